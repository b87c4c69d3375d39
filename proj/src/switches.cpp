#include "switchsim/switches.hpp"

namespace switchsim {

SwitchChannel::SwitchChannel(KrausChannel inner, int target_dim, int order_qubits, Json provenance)
    : inner_(std::move(inner)),
      target_dim_(target_dim),
      order_qubits_(order_qubits),
      provenance_(std::move(provenance)) {
    require(target_dim_ > 0 && order_qubits_ > 0, "switch: bad shape");
    require(inner_.dim_in() == inner_.dim_out(), "switch: inner channel must be square");
    require(inner_.dim_in() == target_dim_ * (1 << order_qubits_),
            "switch: inner dimension does not match target and controls");
}

Json SwitchChannel::to_json() const {
    Json j = switchsim::to_json(inner_);
    j["provenance"] = provenance_;
    return j;
}

namespace {

// K_ab = A_a B_b (x) |0><0| + B_b A_a (x) |1><1|: the fresh control qubit picks
// the order of the two operand channels, which act on the same space.
std::vector<Mat> order_controlled_kraus(const std::vector<Mat>& as, const std::vector<Mat>& bs) {
    const Mat p0 = projector(ket0());
    const Mat p1 = projector(ket1());
    std::vector<Mat> ks;
    ks.reserve(as.size() * bs.size());
    for (const Mat& a : as)
        for (const Mat& b : bs) ks.push_back(tensor(a * b, p0) + tensor(b * a, p1));
    return ks;
}

SwitchChannel compose_switches(const SwitchChannel& a, const SwitchChannel& b, std::string label,
                               Json provenance) {
    require(a.target_dim() == b.target_dim() && a.order_qubits() == b.order_qubits(),
            "switch composition: operand shapes differ");
    const int dim = a.inner().dim_in() * 2;
    KrausChannel inner(dim, dim, order_controlled_kraus(a.inner().kraus(), b.inner().kraus()),
                       std::move(label));
    return SwitchChannel(std::move(inner), a.target_dim(), a.order_qubits() + 1,
                         std::move(provenance));
}

}  // namespace

SwitchChannel quantum_switch(const KrausChannel& e, const KrausChannel& f) {
    require(e.dim_in() == 2 && e.dim_out() == 2 && f.dim_in() == 2 && f.dim_out() == 2,
            "quantum_switch: operands must be qubit channels");
    KrausChannel inner(4, 4, order_controlled_kraus(e.kraus(), f.kraus()),
                       "S(" + e.label() + "," + f.label() + ")");
    Json prov{{"kind", "switch"}, {"children", Json::array({to_json(e), to_json(f)})}};
    return SwitchChannel(std::move(inner), 2, 1, std::move(prov));
}

SwitchChannel higher_order_switch(const SwitchChannel& a, const SwitchChannel& b) {
    require(a.order_qubits() == 1 && b.order_qubits() == 1,
            "higher_order_switch: operands must be single-control switches");
    Json prov{{"kind", "higher"}, {"children", Json::array({a.provenance(), b.provenance()})}};
    return compose_switches(a, b, "S(" + a.label() + "," + b.label() + ")", std::move(prov));
}

SwitchChannel nested_switch(int order, const KrausChannel& e, const KrausChannel& f) {
    require(order >= 1 && order <= 3, "nested_switch: order must be 1, 2 or 3");
    SwitchChannel s = quantum_switch(e, f);
    for (int level = 2; level <= order; ++level) {
        Json prov{{"kind", "nested"},
                  {"order", level},
                  {"children", Json::array({to_json(e), to_json(f)})}};
        s = compose_switches(s, s,
                             "S" + std::to_string(level) + "(" + e.label() + "," + f.label() + ")",
                             std::move(prov));
    }
    return s;
}

}  // namespace switchsim
