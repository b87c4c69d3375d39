// End-to-end acceptance gate. Each criterion prints one PASS/FAIL line with
// its elapsed time; the exit code is the number of failures.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "switchsim/closed_forms.hpp"
#include "switchsim/optimize.hpp"

using namespace switchsim;

namespace {

using Rng = std::mt19937_64;

PauliParams random_simplex(Rng& rng) {
    std::uniform_real_distribution<double> u(1e-12, 1.0);
    for (;;) {
        const double a = -std::log(u(rng)), b = -std::log(u(rng)), c = -std::log(u(rng));
        const double sum = a + b + c;
        const double p0 = a / sum, p1 = b / sum, p2 = c / sum;
        if (std::min({p0, p1, p2}) > 0.01) return PauliParams(p0, p1, p2);
    }
}

double uniform_in(Rng& rng, double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(rng);
}

DensityMatrix plus_control(int qubits) {
    Vec v = ket_plus();
    for (int q = 1; q < qubits; ++q) v = tensor(v, ket_plus());
    return DensityMatrix::pure(PureState(std::move(v)));
}

double success_at(const SwitchChannel& sw, const DensityMatrix& omega) {
    return run_protocol(sw, omega, MeasurementBasis::plus_minus(sw.order_qubits()))
        .success_probability;
}

Mat random_isometry(Rng& rng, int rows, int cols) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    Mat g(rows, cols);
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j) g(i, j) = Complex(gauss(rng), gauss(rng));
    return Eigen::HouseholderQR<Mat>(g).householderQ() * Mat::Identity(rows, cols);
}

// map recovered from an unnormalized conditional Choi block structure
Mat branch_action(const Mat& conditional_choi, const Mat& rho, int d) {
    Mat out = Mat::Zero(d, d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j)
            out += rho(i, j) * conditional_choi.block(i * d, j * d, d, d);
    return out;
}

Mat map_choi(const std::function<Mat(const Mat&)>& m, int d) {
    Mat c(d * d, d * d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) {
            Mat eij = Mat::Zero(d, d);
            eij(i, j) = 1.0;
            c.block(i * d, j * d, d, d) = m(eij);
        }
    return c;
}

struct Criterion {
    int id;
    std::string name;
    double time_limit;  // seconds, 0 when the criterion has no runtime bound
    std::function<bool(std::string&)> body;
};

bool report_max(std::string& detail, const char* what, double worst, double bound) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "%s %.3g (bound %.3g)", what, worst, bound);
    if (!detail.empty()) detail += ", ";
    detail += buf;
    return worst <= bound;
}

// ---------------------------------------------------------------------------

bool criterion_pauli_closed_form(std::string& detail) {
    Rng rng(101);
    double worst = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
        const PauliParams p = random_simplex(rng);
        const KrausChannel noise = pauli_channel(p.p0, p.p1, p.p2);
        const SwitchChannel sw = quantum_switch(noise, noise);
        const double got = success_at(sw, plus_control(1));
        worst = std::max(worst, std::abs(got - 2.0 * p.p1 * p.p2));
    }
    return report_max(detail, "max |protocol - 2 p1 p2|", worst, 1e-10);
}

bool criterion_pauli_table(std::string& detail) {
    Rng rng(202);
    double worst_table = 0.0, worst_q = 0.0;
    for (int trial = 0; trial < 50; ++trial) {
        const PauliParams p = random_simplex(rng);
        worst_table = std::max(worst_table, verify_pauli_table(p).worst());

        const KrausChannel noise = pauli_channel(p.p0, p.p1, p.p2);
        const SwitchChannel doubled =
            higher_order_switch(quantum_switch(noise, noise), quantum_switch(noise, noise));
        const ProtocolReport rep =
            run_protocol(doubled, plus_control(2), MeasurementBasis::plus_minus(2));
        const double sq = p.p0 * p.p0 + p.p1 * p.p1 + p.p2 * p.p2;
        const double q2 = 8.0 * p.p0 * p.p0 * p.p1 * p.p2;
        const double q3 = 4.0 * p.p1 * p.p2 * sq;
        const double q4 = 8.0 * p.p0 * p.p1 * p.p2 * (p.p1 + p.p2);
        worst_q = std::max({worst_q, std::abs(rep.outcomes[1].probability - q2),
                            std::abs(rep.outcomes[2].probability - q3),
                            std::abs(rep.outcomes[3].probability - q4),
                            std::abs(rep.outcomes[0].probability - (1.0 - q2 - q3 - q4))});
    }
    const bool a = report_max(detail, "max table residual", worst_table, 1e-9);
    const bool b = report_max(detail, "max |branch - q_k|", worst_q, 1e-9);
    return a && b;
}

bool criterion_advantage_region(std::string& detail) {
    const ScanResult res = scan_region(ScanExample::pauli, 200, 10);
    bool flags_ok = true;
    for (const RegionSample& row : res.samples)
        flags_ok = flags_ok && row.advantage_flag == (pauli_advantage(row.param1, row.param2) > 0.0);

    bool slice_ok = true;
    const double rest = 1.0 - 1.0 / std::sqrt(6.0);
    for (int i = 0; i < 200; ++i) {
        const double t = (i + 0.5) / 200.0;
        slice_ok = slice_ok && pauli_advantage(t * rest, (1.0 - t) * rest) > 0.0;
    }

    const bool a = report_max(detail, "max crosscheck err", res.max_crosscheck_err, 1e-9);
    char buf[120];
    std::snprintf(buf, sizeof buf, ", %zu samples / %d crosschecked, flags %s, forced slice %s",
                  res.samples.size(), res.crosschecked, flags_ok ? "consistent" : "WRONG",
                  slice_ok ? "all true" : "VIOLATED");
    detail += buf;
    return a && flags_ok && slice_ok;
}

bool criterion_flip_closed_forms(std::string& detail) {
    Rng rng(404);
    double worst = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
        const FlipParams fp(uniform_in(rng, 0.01, 0.99), uniform_in(rng, 0.01, 0.99));
        const SwitchChannel single = quantum_switch(bit_flip(fp.r), phase_flip(fp.s));
        const SwitchChannel doubled = higher_order_switch(single, single);
        worst = std::max(worst, std::abs(success_at(single, plus_control(1)) -
                                         flip_switch_success(fp)));
        worst = std::max(worst, std::abs(success_at(doubled, plus_control(2)) -
                                         flip_double_switch_success(fp)));
    }

    auto advantage = [](double r, double s) {
        const FlipParams fp(r, s);
        return flip_double_switch_success(fp) - flip_switch_success(fp) > 0.0;
    };
    bool flags_ok = !advantage(0.5, 0.5);
    for (int trial = 0; trial < 100 && flags_ok; ++trial)
        flags_ok = advantage(uniform_in(rng, 0.01, 0.49), uniform_in(rng, 0.01, 0.49));

    const bool a = report_max(detail, "max closed-form residual", worst, 1e-10);
    detail += flags_ok ? ", boundary and r,s<1/2 flags correct" : ", FLAG VIOLATION";
    return a && flags_ok;
}

bool criterion_twin_switches(std::string& detail) {
    Rng rng(505);
    double worst = 0.0;
    bool heraldless = true;
    for (int trial = 0; trial < 100; ++trial) {
        const FlipParams fp(uniform_in(rng, 0.01, 0.99), uniform_in(rng, 0.01, 0.99));
        const SwitchChannel bb = quantum_switch(bit_flip(fp.r), bit_flip(fp.r));
        const SwitchChannel gg = quantum_switch(phase_flip(fp.s), phase_flip(fp.s));

        const DensityMatrix omegas[] = {plus_control(1), DensityMatrix::pure(PureState(ket0())),
                                        DensityMatrix::pure(haar_random_state(2, rng))};
        for (const SwitchChannel* sw : {&bb, &gg})
            for (const DensityMatrix& omega : omegas) {
                const ProtocolReport rep =
                    run_protocol(*sw, omega, MeasurementBasis::plus_minus(1));
                heraldless = heraldless && rep.success_probability == 0.0;
                for (const HeraldOutcome& ho : rep.outcomes)
                    heraldless = heraldless && ho.kind != OutcomeClass::PerfectTransfer;
            }

        const SwitchChannel doubled = higher_order_switch(bb, gg);
        worst = std::max(worst, std::abs(success_at(doubled, plus_control(2)) -
                                         twin_flip_double_switch_success(fp)));
    }
    const bool a = report_max(detail, "max |higher - 4rs(1-r)(1-s)|", worst, 1e-10);
    detail += heraldless ? ", constituents herald nothing" : ", UNEXPECTED HERALD";
    return a && heraldless;
}

bool criterion_negative_cap(std::string& detail) {
    const SwitchChannel single = quantum_switch(bit_flip(0.5), phase_flip(0.5));
    const SwitchChannel doubled = higher_order_switch(single, single);
    const MeasurementBasis basis = MeasurementBasis::plus_minus(2);
    const double cap = 0.25 + 1e-6;

    Rng rng(606);
    double haar_max = 0.0;
    for (int i = 0; i < 1000; ++i) {
        const DensityMatrix omega = DensityMatrix::pure(haar_random_state(4, rng));
        haar_max = std::max(haar_max, run_protocol(doubled, omega, basis).success_probability);
    }

    OptimizeOptions opts;
    opts.restarts = 50;
    opts.seed = 707;
    const OptimizationResult opt = optimize_control(doubled, basis, opts);

    const double at_uniform = success_at(doubled, plus_control(2));

    const bool a = report_max(detail, "haar max", haar_max, cap);
    const bool b = report_max(detail, "optimizer best", opt.best_value, cap);
    const bool c = report_max(detail, "| |++> value - 1/4 |", std::abs(at_uniform - 0.25), 1e-9);
    return a && b && c;
}

bool criterion_supermap_sanity(std::string& detail) {
    const KrausChannel noise = pauli_channel(1.0 / 3, 1.0 / 3, 1.0 / 3);
    const KrausChannel b = bit_flip(0.3), g = phase_flip(0.4);
    const SwitchChannel constructions[] = {
        quantum_switch(noise, noise),
        quantum_switch(b, g),
        quantum_switch(bit_flip(0.25), bit_flip(0.25)),
        higher_order_switch(quantum_switch(noise, noise), quantum_switch(noise, noise)),
        higher_order_switch(quantum_switch(bit_flip(0.5), phase_flip(0.5)),
                            quantum_switch(bit_flip(0.5), phase_flip(0.5))),
        nested_switch(1, b, g),
        nested_switch(2, b, g),
        nested_switch(3, b, g),
    };
    double worst = 0.0;
    for (const SwitchChannel& sw : constructions)
        worst = std::max(worst, validate_cptp(sw.inner()).max_residual);

    // two Kraus operators per constituent, squared per nesting level
    const bool counts = nested_switch(1, b, g).inner().kraus_count() == 4 &&
                        nested_switch(2, b, g).inner().kraus_count() == 16 &&
                        nested_switch(3, b, g).inner().kraus_count() == 256;

    const bool a = report_max(detail, "max CPTP residual", worst, 1e-9);
    detail += counts ? ", Kraus counts 4/16/256" : ", KRAUS COUNT MISMATCH";
    return a && counts;
}

bool criterion_remix_invariance(std::string& detail) {
    Rng rng(808);
    const KrausChannel e = pauli_channel(0.5, 0.2, 0.3);
    const KrausChannel f = pauli_channel(0.25, 0.35, 0.4);
    const SwitchChannel single = quantum_switch(e, f);
    const SwitchChannel doubled = higher_order_switch(single, single);
    const ChoiMatrix single_choi = choi(single.inner());
    const ChoiMatrix doubled_choi = choi(doubled.inner());
    const double single_succ = success_at(single, plus_control(1));
    const double doubled_succ = success_at(doubled, plus_control(2));

    double worst_choi = 0.0, worst_succ = 0.0;
    for (int trial = 0; trial < 20; ++trial) {
        // alternate square unitaries with taller isometries
        const int extra = trial % 2;
        const KrausChannel er =
            remix_kraus(e, random_isometry(rng, e.kraus_count() + extra, e.kraus_count()));
        const KrausChannel fr =
            remix_kraus(f, random_isometry(rng, f.kraus_count() + extra, f.kraus_count()));
        const SwitchChannel single_r = quantum_switch(er, fr);
        const SwitchChannel doubled_r = higher_order_switch(single_r, single_r);

        worst_choi = std::max(worst_choi, choi_distance(single_choi, choi(single_r.inner())));
        worst_choi = std::max(worst_choi, choi_distance(doubled_choi, choi(doubled_r.inner())));
        worst_succ = std::max(worst_succ,
                              std::abs(success_at(single_r, plus_control(1)) - single_succ));
        worst_succ = std::max(worst_succ,
                              std::abs(success_at(doubled_r, plus_control(2)) - doubled_succ));
    }
    const bool a = report_max(detail, "max Choi distance", worst_choi, 1e-9);
    const bool b = report_max(detail, "max success shift", worst_succ, 1e-9);
    return a && b;
}

bool criterion_protocol_properties(std::string& detail) {
    Rng rng(909);
    const KrausChannel noise = pauli_channel(1.0 / 3, 1.0 / 3, 1.0 / 3);
    const SwitchChannel single_pauli = quantum_switch(noise, noise);
    const SwitchChannel doubled_pauli = higher_order_switch(single_pauli, single_pauli);
    const SwitchChannel single_flip = quantum_switch(bit_flip(0.2), phase_flip(0.45));

    // branch probabilities form a distribution
    double worst_total = 0.0;
    const struct {
        const SwitchChannel* sw;
        DensityMatrix omega;
    } runs[] = {{&single_pauli, plus_control(1)},
                {&doubled_pauli, plus_control(2)},
                {&single_flip, DensityMatrix::pure(haar_random_state(2, rng))},
                {&doubled_pauli, DensityMatrix::pure(haar_random_state(4, rng))}};
    std::vector<ProtocolReport> reports;
    for (const auto& r : runs) {
        reports.push_back(
            run_protocol(*r.sw, r.omega, MeasurementBasis::plus_minus(r.sw->order_qubits())));
        double total = 0.0;
        for (const HeraldOutcome& ho : reports.back().outcomes) total += ho.probability;
        worst_total = std::max(worst_total, std::abs(total - 1.0));
    }

    // perfect branches really return the input after the stored correction
    double worst_fid = 0.0;
    for (int trial = 0; trial < 20; ++trial) {
        const DensityMatrix rho = DensityMatrix::pure(haar_random_state(2, rng));
        for (const ProtocolReport& rep : reports)
            for (const HeraldOutcome& ho : rep.outcomes) {
                if (ho.kind != OutcomeClass::PerfectTransfer) continue;
                Mat out = branch_action(ho.conditional_choi, rho.matrix(), 2);
                out /= trace(out);
                const Mat corrected = ho.correction * out * dagger(ho.correction);
                worst_fid = std::max(worst_fid, 1.0 - fidelity(DensityMatrix(corrected), rho));
            }
    }

    // classical controls select a definite order
    const KrausChannel e = bit_flip(0.3), f = phase_flip(0.4);
    const SwitchChannel sw = quantum_switch(e, f);
    auto restricted = [&sw](const Vec& control) {
        const Mat ctrl = projector(control);
        return map_choi(
            [&](const Mat& rho) {
                return partial_trace(apply_to_operator(sw.inner(), tensor(rho, ctrl)), {2, 2},
                                     {0});
            },
            2);
    };
    const double fixed_order =
        std::max(max_abs_diff(restricted(ket0()), choi(compose(e, f)).matrix()),
                 max_abs_diff(restricted(ket1()), choi(compose(f, e)).matrix()));

    const bool a = report_max(detail, "max |sum p - 1|", worst_total, 1e-9);
    const bool b = report_max(detail, "max fidelity loss", worst_fid, 1e-9);
    const bool c = report_max(detail, "classical-order Choi distance", fixed_order, 1e-9);
    return a && b && c;
}

}  // namespace

int main() {
    const std::vector<Criterion> criteria = {
        {1, "single switch success matches 2 p1 p2", 5.0, criterion_pauli_closed_form},
        {2, "doubled switch branch table and q formulas", 30.0, criterion_pauli_table},
        {3, "advantage region scan and forced slice", 0.0, criterion_advantage_region},
        {4, "bit/phase flip closed forms and flags", 0.0, criterion_flip_closed_forms},
        {5, "twin switches heraldless, doubled recovers", 0.0, criterion_twin_switches},
        {6, "success capped at 1/4, attained at |++>", 300.0, criterion_negative_cap},
        {7, "CPTP validation and Kraus count law", 0.0, criterion_supermap_sanity},
        {8, "Kraus remix leaves Choi and success fixed", 0.0, criterion_remix_invariance},
        {9, "distribution, recovery, classical orders", 0.0, criterion_protocol_properties},
    };

    int failures = 0;
    for (const Criterion& c : criteria) {
        std::string detail;
        bool ok = false;
        const auto start = std::chrono::steady_clock::now();
        try {
            ok = c.body(detail);
        } catch (const std::exception& ex) {
            detail = std::string("exception: ") + ex.what();
        }
        const double elapsed =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (c.time_limit > 0.0 && elapsed > c.time_limit) {
            ok = false;
            char buf[80];
            std::snprintf(buf, sizeof buf, ", over %.0f s runtime limit", c.time_limit);
            detail += buf;
        }
        std::printf("%s criterion %d [%.2f s] %s: %s\n", ok ? "PASS" : "FAIL", c.id, elapsed,
                    c.name.c_str(), detail.c_str());
        if (!ok) ++failures;
    }
    if (failures == 0)
        std::printf("all %zu criteria passed\n", criteria.size());
    else
        std::printf("%d of %zu criteria failed\n", failures, criteria.size());
    return failures;
}
