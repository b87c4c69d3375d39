#include "switchsim/protocol.hpp"

#include <cmath>
#include <stdexcept>

namespace switchsim {

MeasurementBasis::MeasurementBasis(std::vector<QubitBasis> per_qubit)
    : per_qubit_(std::move(per_qubit)) {
    require(!per_qubit_.empty(), "measurement basis: no qubits");
    for (const QubitBasis& b : per_qubit_) {
        require(b.first.size() == 2 && b.second.size() == 2,
                "measurement basis: vectors must be qubit states");
        require(std::abs(b.first.norm() - 1.0) <= 1e-10 && std::abs(b.second.norm() - 1.0) <= 1e-10,
                "measurement basis: vectors must be normalized");
        require(std::abs(b.first.dot(b.second)) <= 1e-10,
                "measurement basis: vectors must be orthogonal");
    }
}

MeasurementBasis MeasurementBasis::plus_minus(int qubits) {
    require(qubits > 0, "measurement basis: qubit count must be positive");
    std::vector<QubitBasis> per(qubits, QubitBasis{ket_plus(), ket_minus(), '+', '-'});
    return MeasurementBasis(std::move(per));
}

MeasurementBasis MeasurementBasis::computational(int qubits) {
    require(qubits > 0, "measurement basis: qubit count must be positive");
    std::vector<QubitBasis> per(qubits, QubitBasis{ket0(), ket1(), '0', '1'});
    return MeasurementBasis(std::move(per));
}

const QubitBasis& MeasurementBasis::at(int q) const {
    require(q >= 0 && q < qubits(), "measurement basis: qubit index out of range");
    return per_qubit_[q];
}

Vec MeasurementBasis::outcome_vector(int index) const {
    require(index >= 0 && index < (1 << qubits()), "measurement basis: outcome index out of range");
    Vec v(1);
    v(0) = 1.0;
    for (int q = 0; q < qubits(); ++q) {
        const int bit = (index >> (qubits() - 1 - q)) & 1;
        v = tensor(v, bit == 0 ? per_qubit_[q].first : per_qubit_[q].second);
    }
    return v;
}

std::string MeasurementBasis::outcome_label(int index) const {
    require(index >= 0 && index < (1 << qubits()), "measurement basis: outcome index out of range");
    std::string label;
    for (int q = 0; q < qubits(); ++q) {
        const int bit = (index >> (qubits() - 1 - q)) & 1;
        label += bit == 0 ? per_qubit_[q].first_symbol : per_qubit_[q].second_symbol;
    }
    return label;
}

OutcomeClassification classify_outcome(const Mat& conditional_choi, int target_dim,
                                       const ClassifyOptions& opts) {
    const int d = target_dim;
    require(d > 0, "classify_outcome: target dimension must be positive");
    require(conditional_choi.rows() == static_cast<long>(d) * d &&
                conditional_choi.cols() == static_cast<long>(d) * d,
            "classify_outcome: Choi size mismatch");

    const Mat sym = (conditional_choi + dagger(conditional_choi)) / 2.0;
    HermitianEig eg = eig_hermitian(sym);
    if (eg.values(0) <= 0.0) return {};
    if (d > 1 && eg.values(1) / eg.values(0) >= opts.rank_tol) return {};

    // rank one: the branch acts as rho -> A rho A^dag with A the reshaped top
    // eigenvector (input index slowest, so v[(i,a)] = A(a,i))
    const Vec v = eg.vectors.col(0);
    Mat m(d, d);
    for (int i = 0; i < d; ++i)
        for (int a = 0; a < d; ++a) m(a, i) = v(static_cast<long>(i) * d + a);

    const Mat gram = dagger(m) * m;
    const double scale = trace(gram).real() / d;
    if (scale <= 0.0) return {};
    if (max_abs_diff(gram, scale * identity(d)) >= opts.unitarity_tol) return {};

    Mat u = m / std::sqrt(scale);
    const double det_mag = std::abs(u.determinant());
    if (det_mag > 0.0) u /= std::pow(det_mag, 1.0 / d);
    return {OutcomeClass::PerfectTransfer, dagger(u)};  // receiver undoes the branch
}

std::string nearest_pauli_name(const Mat& u) {
    if (u.rows() != 2 || u.cols() != 2) return "";
    const struct {
        const char* name;
        const Mat& op;
    } paulis[] = {{"I", identity(2)}, {"X", sigma_x()}, {"Y", sigma_y()}, {"Z", sigma_z()}};
    for (const auto& p : paulis) {
        const Complex overlap = trace(Mat(dagger(p.op) * u));
        if (std::abs(overlap) < 1e-12) continue;
        const Complex phase = overlap / std::abs(overlap);
        if (max_abs_diff(u, Mat(phase * p.op)) < 1e-6) return p.name;
    }
    return "";
}

namespace {

// inner channel applied to |i><j| (x) omega for every target basis pair (i, j)
std::vector<Mat> channel_on_basis(const SwitchChannel& sw, const Mat& omega) {
    const int d = sw.target_dim();
    std::vector<Mat> out;
    out.reserve(static_cast<size_t>(d) * d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) {
            Mat eij = Mat::Zero(d, d);
            eij(i, j) = 1.0;
            out.push_back(apply_to_operator(sw.inner(), tensor(eij, omega)));
        }
    return out;
}

Mat conditional_choi_from(const std::vector<Mat>& basis_out, const Vec& outcome, int d) {
    // Pb = I_d (x) <outcome| projects the controls onto the measured branch
    const Mat bra = outcome.adjoint();
    const Mat pb = tensor(identity(d), bra);
    const Mat pb_dag = dagger(pb);
    Mat c(static_cast<long>(d) * d, static_cast<long>(d) * d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j)
            c.block(static_cast<long>(i) * d, static_cast<long>(j) * d, d, d) =
                pb * basis_out[static_cast<size_t>(i) * d + j] * pb_dag;
    return c;
}

}  // namespace

ProtocolReport run_protocol(const SwitchChannel& sw, const DensityMatrix& omega,
                            const MeasurementBasis& basis, const ClassifyOptions& opts) {
    require(basis.qubits() == sw.order_qubits(), "run_protocol: basis does not match the controls");
    require(omega.dim() == sw.control_dim(), "run_protocol: control state dimension mismatch");

    const int d = sw.target_dim();
    const std::vector<Mat> basis_out = channel_on_basis(sw, omega.matrix());

    ProtocolReport report;
    double total = 0.0;
    for (int o = 0; o < sw.control_dim(); ++o) {
        HeraldOutcome ho;
        ho.label = basis.outcome_label(o);
        ho.conditional_choi = conditional_choi_from(basis_out, basis.outcome_vector(o), d);
        ho.probability = trace(ho.conditional_choi).real() / d;
        total += ho.probability;
        if (ho.probability >= opts.min_probability) {
            OutcomeClassification cls = classify_outcome(ho.conditional_choi, d, opts);
            ho.kind = cls.kind;
            if (cls.kind == OutcomeClass::PerfectTransfer) {
                ho.correction = std::move(cls.correction);
                ho.correction_name = nearest_pauli_name(ho.correction);
                if (ho.correction_name.empty()) ho.correction_name = "U";
                report.success_probability += ho.probability;
            }
        }
        report.outcomes.push_back(std::move(ho));
    }
    if (std::abs(total - 1.0) > 1e-9)
        throw std::runtime_error("run_protocol: branch probabilities do not sum to 1");
    return report;
}

Json ProtocolReport::to_json() const {
    Json outs = Json::array();
    for (const HeraldOutcome& ho : outcomes) {
        Json j{{"label", ho.label},
               {"probability", ho.probability},
               {"class", ho.kind == OutcomeClass::PerfectTransfer ? "perfect" : "noisy"}};
        if (ho.kind == OutcomeClass::PerfectTransfer)
            j["correction"] = ho.correction_name;
        else
            j["correction"] = nullptr;
        outs.push_back(std::move(j));
    }
    return Json{{"success_probability", success_probability}, {"outcomes", std::move(outs)}};
}

double verify_input_independence(const SwitchChannel& sw, const DensityMatrix& omega,
                                 const MeasurementBasis& basis,
                                 const std::vector<DensityMatrix>& samples) {
    const ProtocolReport report = run_protocol(sw, omega, basis);
    const int d = sw.target_dim();
    double worst = 0.0;
    for (const DensityMatrix& rho : samples) {
        require(rho.dim() == d, "verify_input_independence: sample dimension mismatch");
        const Mat joint = apply_to_operator(sw.inner(), tensor(rho.matrix(), omega.matrix()));
        for (int o = 0; o < sw.control_dim(); ++o) {
            if (report.outcomes[o].kind != OutcomeClass::PerfectTransfer) continue;
            const Mat bra = basis.outcome_vector(o).adjoint();
            const Mat pb = tensor(identity(d), bra);
            const double p = trace(Mat(pb * joint * dagger(pb))).real();
            worst = std::max(worst, std::abs(p - report.outcomes[o].probability));
        }
    }
    return worst;
}

}  // namespace switchsim
