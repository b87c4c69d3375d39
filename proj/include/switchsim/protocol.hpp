#pragma once

#include "switchsim/switches.hpp"

namespace switchsim {

// Heralded transfer: feed rho (x) omega through a switch channel, measure every
// control qubit, and classify each measurement branch by its conditional map on
// the target. A branch whose conditional Choi operator is rank one with a
// unitary reshape transfers the input perfectly up to a known correction; its
// probability then does not depend on the input state.

struct QubitBasis {
    Vec first;
    Vec second;
    char first_symbol = '+';
    char second_symbol = '-';
};

class MeasurementBasis {
  public:
    // orthonormal pair per control qubit, checked within 1e-10
    explicit MeasurementBasis(std::vector<QubitBasis> per_qubit);

    static MeasurementBasis plus_minus(int qubits);
    static MeasurementBasis computational(int qubits);

    int qubits() const { return static_cast<int>(per_qubit_.size()); }
    const QubitBasis& at(int q) const;

    // outcome index runs over all symbol combinations, first control slowest
    Vec outcome_vector(int index) const;
    std::string outcome_label(int index) const;

  private:
    std::vector<QubitBasis> per_qubit_;
};

enum class OutcomeClass { PerfectTransfer, Noisy };

struct ClassifyOptions {
    double rank_tol = 1e-9;       // second largest / largest Choi eigenvalue
    double unitarity_tol = 1e-8;  // entrywise |M^dag M - c I| of the reshaped eigenvector
    double min_probability = 1e-12;
};

struct OutcomeClassification {
    OutcomeClass kind = OutcomeClass::Noisy;
    Mat correction;  // unitary the receiver applies; empty when Noisy
};

// conditional_choi is the unnormalized Choi operator of one branch (input
// factor first). target_dim is the dimension of the transferred system.
OutcomeClassification classify_outcome(const Mat& conditional_choi, int target_dim,
                                       const ClassifyOptions& opts = {});

// "I", "X", "Y" or "Z" when u matches a Pauli up to global phase within 1e-6,
// otherwise "".
std::string nearest_pauli_name(const Mat& u);

struct HeraldOutcome {
    std::string label;
    double probability = 0.0;
    OutcomeClass kind = OutcomeClass::Noisy;
    Mat correction;
    std::string correction_name;  // Pauli letter, "U" for other unitaries, "" when Noisy
    Mat conditional_choi;
};

struct ProtocolReport {
    std::vector<HeraldOutcome> outcomes;
    double success_probability = 0.0;  // total over PerfectTransfer branches

    Json to_json() const;
};

// Branch probabilities are trace(conditional Choi) / target_dim, i.e. the
// branch weight at a maximally mixed input; they sum to one. Branches below
// opts.min_probability stay Noisy and never count toward success.
ProtocolReport run_protocol(const SwitchChannel& sw, const DensityMatrix& omega,
                            const MeasurementBasis& basis, const ClassifyOptions& opts = {});

// Max deviation between each PerfectTransfer branch probability and the same
// branch's weight recomputed at every sample input.
double verify_input_independence(const SwitchChannel& sw, const DensityMatrix& omega,
                                 const MeasurementBasis& basis,
                                 const std::vector<DensityMatrix>& samples);

}  // namespace switchsim
