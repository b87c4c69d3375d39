#include "switchsim/closed_forms.hpp"

#include <cmath>
#include <cstdio>
#include <cstring>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

#include "switchsim/parallel.hpp"

namespace switchsim {

PauliParams::PauliParams(double p0_, double p1_, double p2_) : p0(p0_), p1(p1_), p2(p2_) {
    for (double p : {p0, p1, p2})
        require(p > 0.0 && p < 1.0, "pauli params: probabilities must be interior to (0,1)");
    require(std::abs(p0 + p1 + p2 - 1.0) <= 1e-12, "pauli params: probabilities must sum to 1");
}

FlipParams::FlipParams(double r_, double s_) : r(r_), s(s_) {
    require(r > 0.0 && r < 1.0 && s > 0.0 && s < 1.0,
            "flip params: probabilities must be interior to (0,1)");
}

double pauli_switch_success(const PauliParams& p) { return 2.0 * p.p1 * p.p2; }

double pauli_double_switch_success(const PauliParams& p) {
    return 4.0 * p.p1 * p.p2 * (3.0 * p.p0 * p.p0 + p.p1 * p.p1 + p.p2 * p.p2);
}

double pauli_advantage(double p1, double p2) {
    const double p0 = 1.0 - p1 - p2;
    return 2.0 * p1 * p2 * (2.0 * (3.0 * p0 * p0 + p1 * p1 + p2 * p2) - 1.0);
}

double flip_switch_success(const FlipParams& fp) { return fp.r * fp.s; }

double flip_double_switch_success(const FlipParams& fp) {
    return 4.0 * fp.r * fp.s * (1.0 - fp.r) * (1.0 - fp.s);
}

double twin_flip_double_switch_success(const FlipParams& fp) {
    return flip_double_switch_success(fp);
}

double TableReport::worst() const {
    return std::max(max_prob_err, std::max(max_state_err, max_control_err));
}

namespace {

// one measurement branch of a doubled switch: closed-form probability plus the
// (normalized) conditional map on the target
struct TableRow {
    double probability = 0.0;
    std::function<Mat(const Mat&)> conditional;
};

using Table = std::map<std::string, TableRow>;

Mat conj_by(const Mat& u, const Mat& rho) { return u * rho * dagger(u); }

Table pauli_rows(const PauliParams& p) {
    const double p0 = p.p0, p1 = p.p1, p2 = p.p2;
    const double sq = p0 * p0 + p1 * p1 + p2 * p2;
    const double q2 = 8.0 * p0 * p0 * p1 * p2;
    const double q3 = 4.0 * p1 * p2 * sq;
    const double q4 = 8.0 * p0 * p1 * p2 * (p1 + p2);
    const double q1 = 1.0 - q2 - q3 - q4;
    const double den = std::pow(p0 + p1, 4) + 4.0 * p0 * p2 * sq +
                       2.0 * p2 * p2 * (3.0 * p0 * p0 + 2.0 * p0 * p1 + 3.0 * p1 * p1) +
                       std::pow(p2, 4);
    const double u1 = 4.0 * p0 * p1 * sq / den;
    const double u2 = 4.0 * p0 * p2 * sq / den;
    Table t;
    t["++"] = {q1, [u1, u2](const Mat& rho) {
                   return Mat((1.0 - u1 - u2) * rho + u1 * conj_by(sigma_y(), rho) +
                              u2 * conj_by(sigma_z(), rho));
               }};
    t["+-"] = {q2, [](const Mat& rho) { return conj_by(sigma_x(), rho); }};
    t["-+"] = {q3, [](const Mat& rho) { return conj_by(sigma_x(), rho); }};
    t["--"] = {q4, [p1, p2](const Mat& rho) {
                   return Mat((p2 * conj_by(sigma_y(), rho) + p1 * conj_by(sigma_z(), rho)) /
                              (p1 + p2));
               }};
    return t;
}

Table bit_phase_rows(const FlipParams& fp) {
    const double r = fp.r, s = fp.s;
    const double q2 = 2.0 * r * s * (1.0 - r) * (1.0 - s);
    const double q4 = 2.0 * r * s * (r + s - 2.0 * r * s);
    const double q1 = 1.0 - 2.0 * q2 - q4;
    const double den = 1.0 - 2.0 * r * s * (2.0 - r - s);
    const double v1 = 2.0 * r * (1.0 - r) * (1.0 - s) * (1.0 - s) / den;
    const double v2 = 2.0 * s * (1.0 - s) * (1.0 - r) * (1.0 - r) / den;
    Table t;
    t["++"] = {q1, [v1, v2](const Mat& rho) {
                   return Mat((1.0 - v1 - v2) * rho + v1 * conj_by(sigma_x(), rho) +
                              v2 * conj_by(sigma_z(), rho));
               }};
    t["+-"] = {q2, [](const Mat& rho) { return conj_by(sigma_y(), rho); }};
    t["-+"] = {q2, [](const Mat& rho) { return conj_by(sigma_y(), rho); }};
    t["--"] = {q4, [r, s](const Mat& rho) {
                   return Mat((s * (1.0 - r) * conj_by(sigma_x(), rho) +
                               r * (1.0 - s) * conj_by(sigma_z(), rho)) /
                              (r + s - 2.0 * r * s));
               }};
    return t;
}

Table twin_flip_rows(const FlipParams& fp) {
    const double r = fp.r, s = fp.s;
    const double q2 = 4.0 * r * s * (1.0 - r) * (1.0 - s);
    const double q1 = 1.0 - q2;
    const double den = q2 - 1.0;
    const double w1 = 2.0 * (2.0 * (1.0 - s) * s - 1.0) * (1.0 - r) * r / den;
    const double w2 = 2.0 * (2.0 * (1.0 - r) * r - 1.0) * (1.0 - s) * s / den;
    Table t;
    t["++"] = {q1, [w1, w2](const Mat& rho) {
                   return Mat((1.0 - w1 - w2) * rho + w1 * conj_by(sigma_x(), rho) +
                              w2 * conj_by(sigma_z(), rho));
               }};
    t["+-"] = {q2, [](const Mat& rho) { return conj_by(sigma_y(), rho); }};
    t["-+"] = {0.0, [](const Mat& rho) { return Mat(Mat::Zero(rho.rows(), rho.cols())); }};
    t["--"] = {0.0, [](const Mat& rho) { return Mat(Mat::Zero(rho.rows(), rho.cols())); }};
    return t;
}

// spanning probe set for qubit maps
std::vector<Mat> probe_states() {
    Vec plus_i(2);
    plus_i << 1.0 / std::sqrt(2.0), Complex(0, 1) / std::sqrt(2.0);
    return {projector(ket0()), projector(ket_plus()), projector(plus_i), identity(2) / 2.0};
}

TableReport check_table(const SwitchChannel& sw, const Table& table) {
    const MeasurementBasis basis = MeasurementBasis::plus_minus(sw.order_qubits());
    const Mat omega = projector(tensor(ket_plus(), ket_plus()));
    TableReport rep;
    for (const Mat& rho : probe_states()) {
        const Mat out = apply_to_operator(sw.inner(), tensor(rho, omega));
        Mat recon = Mat::Zero(out.rows(), out.cols());
        for (int o = 0; o < sw.control_dim(); ++o) {
            const TableRow& row = table.at(basis.outcome_label(o));
            const Vec outcome = basis.outcome_vector(o);
            const Mat bra = outcome.adjoint();
            const Mat pb = tensor(identity(2), bra);
            const Mat cond = pb * out * dagger(pb);
            rep.max_prob_err = std::max(rep.max_prob_err,
                                        std::abs(trace(cond).real() - row.probability));
            if (row.probability > 1e-12) {
                const Mat expected = row.conditional(rho);
                rep.max_state_err = std::max(
                    rep.max_state_err, max_abs_diff(cond / trace(cond), expected / trace(expected)));
            }
            recon += row.probability * tensor(row.conditional(rho), projector(outcome));
        }
        rep.max_control_err = std::max(rep.max_control_err, max_abs_diff(out, recon));
    }
    return rep;
}

SwitchChannel doubled_pauli_switch(const PauliParams& p) {
    const KrausChannel ch = pauli_channel(p.p0, p.p1, p.p2);
    const SwitchChannel s = quantum_switch(ch, ch);
    return higher_order_switch(s, s);
}

SwitchChannel doubled_bit_phase_switch(const FlipParams& fp) {
    const SwitchChannel s = quantum_switch(bit_flip(fp.r), phase_flip(fp.s));
    return higher_order_switch(s, s);
}

SwitchChannel doubled_twin_flip_switch(const FlipParams& fp) {
    const SwitchChannel bb = quantum_switch(bit_flip(fp.r), bit_flip(fp.r));
    const SwitchChannel gg = quantum_switch(phase_flip(fp.s), phase_flip(fp.s));
    return higher_order_switch(bb, gg);
}

}  // namespace

TableReport verify_pauli_table(const PauliParams& p) {
    return check_table(doubled_pauli_switch(p), pauli_rows(p));
}

TableReport verify_bit_phase_table(const FlipParams& fp) {
    return check_table(doubled_bit_phase_switch(fp), bit_phase_rows(fp));
}

TableReport verify_twin_flip_table(const FlipParams& fp) {
    return check_table(doubled_twin_flip_switch(fp), twin_flip_rows(fp));
}

namespace {

double protocol_success(const SwitchChannel& sw, const DensityMatrix& omega) {
    return run_protocol(sw, omega, MeasurementBasis::plus_minus(sw.order_qubits()))
        .success_probability;
}

// brute-force baseline and doubled success probabilities for one scan point
void crosscheck_point(ScanExample ex, const RegionSample& sample, double* baseline, double* higher) {
    const DensityMatrix plus = DensityMatrix(projector(ket_plus()));
    const DensityMatrix plus2 = DensityMatrix(projector(tensor(ket_plus(), ket_plus())));
    switch (ex) {
        case ScanExample::pauli: {
            const PauliParams p(1.0 - sample.param1 - sample.param2, sample.param1, sample.param2);
            const KrausChannel ch = pauli_channel(p.p0, p.p1, p.p2);
            const SwitchChannel s = quantum_switch(ch, ch);
            *baseline = protocol_success(s, plus);
            *higher = protocol_success(higher_order_switch(s, s), plus2);
            return;
        }
        case ScanExample::bit_phase: {
            const SwitchChannel s =
                quantum_switch(bit_flip(sample.param1), phase_flip(sample.param2));
            *baseline = protocol_success(s, plus);
            *higher = protocol_success(higher_order_switch(s, s), plus2);
            return;
        }
        case ScanExample::twin_flip: {
            const SwitchChannel bb = quantum_switch(bit_flip(sample.param1), bit_flip(sample.param1));
            const SwitchChannel gg =
                quantum_switch(phase_flip(sample.param2), phase_flip(sample.param2));
            // both constituent switches are heraldless; report the larger residual
            *baseline = std::max(protocol_success(bb, plus), protocol_success(gg, plus));
            *higher = protocol_success(higher_order_switch(bb, gg), plus2);
            return;
        }
    }
    throw std::invalid_argument("scan_region: unknown example");
}

}  // namespace

ScanResult scan_region(ScanExample ex, int grid_n, int crosscheck_stride) {
    require(grid_n >= 2, "scan_region: grid must be at least 2");
    require(crosscheck_stride >= 1, "scan_region: stride must be at least 1");

    ScanResult result;
    for (int i = 0; i < grid_n; ++i) {
        const double a = (i + 0.5) / grid_n;
        for (int j = 0; j < grid_n; ++j) {
            const double b = (j + 0.5) / grid_n;
            if (ex == ScanExample::pauli && a + b >= 1.0) continue;
            RegionSample sample;
            sample.param1 = a;
            sample.param2 = b;
            switch (ex) {
                case ScanExample::pauli: {
                    const PauliParams p(1.0 - a - b, a, b);
                    sample.baseline_prob = pauli_switch_success(p);
                    sample.higher_prob = pauli_double_switch_success(p);
                    break;
                }
                case ScanExample::bit_phase: {
                    const FlipParams fp(a, b);
                    sample.baseline_prob = flip_switch_success(fp);
                    sample.higher_prob = flip_double_switch_success(fp);
                    break;
                }
                case ScanExample::twin_flip: {
                    const FlipParams fp(a, b);
                    sample.baseline_prob = 0.0;
                    sample.higher_prob = twin_flip_double_switch_success(fp);
                    break;
                }
            }
            sample.advantage = sample.higher_prob - sample.baseline_prob;
            sample.advantage_flag = sample.advantage > 0.0;
            result.samples.push_back(sample);
        }
    }

    std::vector<int> checked;
    for (size_t idx = 0; idx < result.samples.size(); idx += crosscheck_stride)
        checked.push_back(static_cast<int>(idx));
    std::vector<double> errs(checked.size(), 0.0);
    parallel_for(static_cast<int>(checked.size()), [&](int k) {
        const RegionSample& sample = result.samples[checked[k]];
        double baseline = 0.0, higher = 0.0;
        crosscheck_point(ex, sample, &baseline, &higher);
        errs[k] = std::max(std::abs(baseline - sample.baseline_prob),
                           std::abs(higher - sample.higher_prob));
    });
    for (double e : errs) result.max_crosscheck_err = std::max(result.max_crosscheck_err, e);
    result.crosschecked = static_cast<int>(checked.size());
    return result;
}

namespace {

std::string fmt12(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

}  // namespace

void write_csv(std::ostream& out, const std::vector<RegionSample>& rows) {
    out << "param1,param2,baseline_prob,higher_prob,advantage,flag\n";
    for (const RegionSample& r : rows) {
        out << fmt12(r.param1) << ',' << fmt12(r.param2) << ',' << fmt12(r.baseline_prob) << ','
            << fmt12(r.higher_prob) << ',' << fmt12(r.advantage) << ',' << (r.advantage_flag ? 1 : 0)
            << '\n';
    }
    if (!out) throw std::runtime_error("write_csv: stream write failed");
}

std::vector<RegionSample> read_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line) || line != "param1,param2,baseline_prob,higher_prob,advantage,flag")
        throw std::invalid_argument("read_csv: bad header");
    std::vector<RegionSample> rows;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream ss(line);
        std::string field;
        double vals[5];
        for (double& v : vals) {
            if (!std::getline(ss, field, ',')) throw std::invalid_argument("read_csv: short row");
            v = std::strtod(field.c_str(), nullptr);
        }
        if (!std::getline(ss, field, ',')) throw std::invalid_argument("read_csv: short row");
        RegionSample r;
        r.param1 = vals[0];
        r.param2 = vals[1];
        r.baseline_prob = vals[2];
        r.higher_prob = vals[3];
        r.advantage = vals[4];
        r.advantage_flag = field == "1";
        rows.push_back(r);
    }
    return rows;
}

}  // namespace switchsim
