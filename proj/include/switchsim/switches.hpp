#pragma once

#include "switchsim/channel.hpp"

namespace switchsim {

// A channel acting on target (x) control qubits, together with a record of how
// it was assembled. Tensor factor order is target, then controls oldest first
// (the control added last sits in the last factor).
class SwitchChannel {
  public:
    SwitchChannel(KrausChannel inner, int target_dim, int order_qubits, Json provenance);

    const KrausChannel& inner() const { return inner_; }
    int target_dim() const { return target_dim_; }
    int order_qubits() const { return order_qubits_; }
    int control_dim() const { return 1 << order_qubits_; }
    const std::string& label() const { return inner_.label(); }
    const Json& provenance() const { return provenance_; }

    // channel JSON plus a "provenance" field
    Json to_json() const;

  private:
    KrausChannel inner_;
    int target_dim_;
    int order_qubits_;
    Json provenance_;
};

// Order-controlled composition of two qubit channels: Kraus operators
// E_i F_j (x) |0><0| + F_j E_i (x) |1><1|, so control |0> runs f before e.
SwitchChannel quantum_switch(const KrausChannel& e, const KrausChannel& f);

// Order-controlled composition of two single-control switches. Both operands
// act on the same target-plus-control space (the existing control is shared,
// not duplicated); one fresh control qubit is appended.
SwitchChannel higher_order_switch(const SwitchChannel& a, const SwitchChannel& b);

// Self-composition ladder: level 1 is quantum_switch(e, f), each further level
// composes the previous one with itself, sharing all existing controls and
// appending one. Supports order 1..3; Kraus counts grow as
// (count_e * count_f)^(2^(order-1)).
SwitchChannel nested_switch(int order, const KrausChannel& e, const KrausChannel& f);

}  // namespace switchsim
