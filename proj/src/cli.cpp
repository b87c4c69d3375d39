#include "switchsim/cli.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <optional>
#include <ostream>
#include <stdexcept>

#include "CLI11.hpp"

#include "switchsim/closed_forms.hpp"
#include "switchsim/optimize.hpp"

namespace switchsim {

double parse_probability(const std::string& text) {
    auto number = [](const std::string& part) {
        std::size_t used = 0;
        double value = 0.0;
        try {
            value = std::stod(part, &used);
        } catch (const std::exception&) {
            throw std::invalid_argument("probability: not a number: " + part);
        }
        require(used == part.size(), "probability: trailing characters in " + part);
        return value;
    };
    const auto slash = text.find('/');
    if (slash == std::string::npos) return number(text);
    const double den = number(text.substr(slash + 1));
    require(den != 0.0, "probability: zero denominator in " + text);
    return number(text.substr(0, slash)) / den;
}

namespace {

void emit(std::ostream& out, const Json& j) { out << j.dump(2) << "\n"; }

Json amplitudes_json(const Vec& v) {
    Json a = Json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i)
        a.push_back(Json::array({v(i).real(), v(i).imag()}));
    return a;
}

Json result_json(const OptimizationResult& r) {
    return Json{{"best_value", r.best_value},
                {"best_control_amplitudes", amplitudes_json(r.best_control)},
                {"restarts_used", r.restarts_used},
                {"evaluations", r.evaluations}};
}

Json section(double closed_form, double protocol) {
    return Json{{"closed_form", closed_form},
                {"protocol", protocol},
                {"residual", std::abs(protocol - closed_form)}};
}

Json table_json(const TableReport& t) {
    return Json{{"max_prob_err", t.max_prob_err},
                {"max_state_err", t.max_state_err},
                {"max_control_err", t.max_control_err},
                {"pass", t.ok()}};
}

DensityMatrix plus_control(int qubits) {
    Vec v(1);
    v(0) = 1.0;
    for (int q = 0; q < qubits; ++q) v = tensor(v, ket_plus());
    return DensityMatrix::pure(PureState(std::move(v)));
}

SwitchChannel pauli_doubled(const PauliParams& p) {
    const KrausChannel noise = pauli_channel(p.p0, p.p1, p.p2);
    const SwitchChannel single = quantum_switch(noise, noise);
    return higher_order_switch(single, single);
}

SwitchChannel bit_phase_doubled(const FlipParams& fp) {
    const SwitchChannel single = quantum_switch(bit_flip(fp.r), phase_flip(fp.s));
    return higher_order_switch(single, single);
}

SwitchChannel twin_flip_doubled(const FlipParams& fp) {
    return higher_order_switch(quantum_switch(bit_flip(fp.r), bit_flip(fp.r)),
                               quantum_switch(phase_flip(fp.s), phase_flip(fp.s)));
}

double doubled_success(const SwitchChannel& sw) {
    return run_protocol(sw, plus_control(2), MeasurementBasis::plus_minus(2)).success_probability;
}

int finish_verify(std::ostream& out, Json report, bool pass) {
    report["pass"] = pass;
    emit(out, report);
    return pass ? 0 : 1;
}

int verify_pauli(const PauliParams& p, std::ostream& out) {
    const KrausChannel noise = pauli_channel(p.p0, p.p1, p.p2);
    const SwitchChannel single = quantum_switch(noise, noise);
    const double base =
        run_protocol(single, plus_control(1), MeasurementBasis::plus_minus(1)).success_probability;
    const double higher = doubled_success(higher_order_switch(single, single));
    const TableReport table = verify_pauli_table(p);

    const bool pass = std::abs(base - pauli_switch_success(p)) < 1e-9 &&
                      std::abs(higher - pauli_double_switch_success(p)) < 1e-9 && table.ok();
    Json report{{"example", "pauli"},
                {"params", {{"p0", p.p0}, {"p1", p.p1}, {"p2", p.p2}}},
                {"baseline", section(pauli_switch_success(p), base)},
                {"higher_order", section(pauli_double_switch_success(p), higher)},
                {"table", table_json(table)}};
    return finish_verify(out, std::move(report), pass);
}

int verify_bit_phase(const FlipParams& fp, std::ostream& out) {
    const SwitchChannel single = quantum_switch(bit_flip(fp.r), phase_flip(fp.s));
    const double base =
        run_protocol(single, plus_control(1), MeasurementBasis::plus_minus(1)).success_probability;
    const double higher = doubled_success(higher_order_switch(single, single));
    const TableReport table = verify_bit_phase_table(fp);

    const bool pass = std::abs(base - flip_switch_success(fp)) < 1e-9 &&
                      std::abs(higher - flip_double_switch_success(fp)) < 1e-9 && table.ok();
    Json report{{"example", "bitphase"},
                {"params", {{"r", fp.r}, {"s", fp.s}}},
                {"baseline", section(flip_switch_success(fp), base)},
                {"higher_order", section(flip_double_switch_success(fp), higher)},
                {"table", table_json(table)}};
    return finish_verify(out, std::move(report), pass);
}

int verify_bbgg(const FlipParams& fp, std::ostream& out) {
    const SwitchChannel bb = quantum_switch(bit_flip(fp.r), bit_flip(fp.r));
    const SwitchChannel gg = quantum_switch(phase_flip(fp.s), phase_flip(fp.s));

    // either constituent alone never heralds a perfect branch, whatever the control
    Vec circular(2);
    circular << Complex(1.0 / std::sqrt(2.0), 0.0), Complex(0.0, 1.0 / std::sqrt(2.0));
    const std::vector<DensityMatrix> controls{DensityMatrix::pure(PureState(ket_plus())),
                                              DensityMatrix::pure(PureState(ket0())),
                                              DensityMatrix::pure(PureState(std::move(circular)))};
    const MeasurementBasis one = MeasurementBasis::plus_minus(1);
    double constituent_max = 0.0;
    for (const SwitchChannel* sw : {&bb, &gg})
        for (const DensityMatrix& omega : controls)
            constituent_max =
                std::max(constituent_max, run_protocol(*sw, omega, one).success_probability);

    const double higher = doubled_success(higher_order_switch(bb, gg));
    const TableReport table = verify_twin_flip_table(fp);

    const bool pass = constituent_max == 0.0 &&
                      std::abs(higher - twin_flip_double_switch_success(fp)) < 1e-9 && table.ok();
    Json report{{"example", "bbgg"},
                {"params", {{"r", fp.r}, {"s", fp.s}}},
                {"constituent_success_max", constituent_max},
                {"higher_order", section(twin_flip_double_switch_success(fp), higher)},
                {"table", table_json(table)}};
    return finish_verify(out, std::move(report), pass);
}

int verify_negative(const FlipParams& fp, int haar_samples, const OptimizeOptions& opts,
                    std::ostream& out) {
    const SwitchChannel doubled = bit_phase_doubled(fp);
    const MeasurementBasis basis = MeasurementBasis::plus_minus(2);

    const double at_uniform = doubled_success(doubled);

    std::mt19937_64 rng(opts.seed);
    double haar_max = 0.0;
    for (int i = 0; i < haar_samples; ++i) {
        const DensityMatrix omega = DensityMatrix::pure(haar_random_state(4, rng));
        haar_max = std::max(haar_max, run_protocol(doubled, omega, basis).success_probability);
    }

    const OptimizationResult opt = optimize_control(doubled, basis, opts);

    const double cap = 0.25 + 1e-6;
    const bool pass =
        haar_max <= cap && opt.best_value <= cap && std::abs(at_uniform - 0.25) <= 1e-9;
    Json report{{"example", "negative"},
                {"params", {{"r", fp.r}, {"s", fp.s}}},
                {"cap", 0.25},
                {"uniform_control_value", at_uniform},
                {"haar", {{"samples", haar_samples}, {"max", haar_max}}},
                {"optimizer", result_json(opt)},
                {"seed", opts.seed}};
    return finish_verify(out, std::move(report), pass);
}

int cmd_scan(const std::string& example, int grid, int stride, const std::string& out_path,
             std::ostream& out, std::ostream& err) {
    ScanExample ex = ScanExample::pauli;
    if (example == "bitphase") ex = ScanExample::bit_phase;
    if (example == "bbgg") ex = ScanExample::twin_flip;

    const ScanResult res = scan_region(ex, grid, stride);

    if (!out_path.empty()) {
        std::ofstream file(out_path, std::ios::binary);
        if (!file.is_open()) {
            err << "error: cannot open " << out_path << " for writing\n";
            return 3;
        }
        try {
            write_csv(file, res.samples);
            file.flush();
        } catch (const std::runtime_error& e) {
            err << "error: " << e.what() << "\n";
            return 3;
        }
        if (!file) {
            err << "error: short write to " << out_path << "\n";
            return 3;
        }
    }

    const long flagged = std::count_if(res.samples.begin(), res.samples.end(),
                                       [](const RegionSample& sm) { return sm.advantage_flag; });
    Json summary{{"example", example},
                 {"grid", grid},
                 {"points", res.samples.size()},
                 {"advantage_fraction",
                  res.samples.empty() ? 0.0
                                      : static_cast<double>(flagged) /
                                            static_cast<double>(res.samples.size())},
                 {"crosschecked", res.crosschecked},
                 {"max_crosscheck_err", res.max_crosscheck_err},
                 {"out", out_path.empty() ? Json() : Json(out_path)}};
    emit(out, summary);
    return res.max_crosscheck_err < 1e-9 ? 0 : 1;
}

int cmd_optimize(const std::string& example, const SwitchChannel& sw, const OptimizeOptions& opts,
                 std::ostream& out) {
    const MeasurementBasis basis = MeasurementBasis::plus_minus(sw.order_qubits());
    const ControlComparison cmp = compare_product_vs_entangled(sw, basis, opts);

    Json report = result_json(cmp.unrestricted);
    report["restarts_used"] = cmp.product.restarts_used + cmp.unrestricted.restarts_used;
    report["evaluations"] = cmp.product.evaluations + cmp.unrestricted.evaluations;
    report["seed"] = opts.seed;
    report["example"] = example;
    report["product"] = result_json(cmp.product);
    report["unrestricted"] = result_json(cmp.unrestricted);
    emit(out, report);
    return 0;
}

// Channel specs for the choi subcommand. Leaves: {"kind":"identity","dim":2},
// {"kind":"pauli","p0":..,"p1":..[,"p2":..]}, {"kind":"bitflip","r":..},
// {"kind":"phaseflip","s":..} or {"kind":"channel",...serialized channel...}.
// Composites take "children":[specA,specB]; "nested" also takes "order".
SwitchChannel switch_from_spec(const Json& spec);

double spec_probability(const Json& v) {
    if (v.is_string()) return parse_probability(v.get<std::string>());
    return v.get<double>();
}

KrausChannel channel_from_spec(const Json& spec) {
    require(spec.is_object() && spec.contains("kind"), "choi spec: needs a kind field");
    const std::string kind = spec.at("kind").get<std::string>();
    if (kind == "identity") return identity_channel(spec.value("dim", 2));
    if (kind == "pauli") {
        const double p0 = spec_probability(spec.at("p0"));
        const double p1 = spec_probability(spec.at("p1"));
        const double p2 = spec.contains("p2") ? spec_probability(spec.at("p2")) : 1.0 - p0 - p1;
        return pauli_channel(p0, p1, p2);
    }
    if (kind == "bitflip") return bit_flip(spec_probability(spec.at("r")));
    if (kind == "phaseflip") return phase_flip(spec_probability(spec.at("s")));
    if (kind == "channel") return channel_from_json(spec);
    if (kind == "switch" || kind == "higher" || kind == "nested")
        return switch_from_spec(spec).inner();
    throw std::invalid_argument("choi spec: unknown kind " + kind);
}

SwitchChannel switch_from_spec(const Json& spec) {
    const std::string kind = spec.at("kind").get<std::string>();
    require(spec.contains("children") && spec.at("children").is_array() &&
                spec.at("children").size() == 2,
            "choi spec: " + kind + " needs exactly two children");
    const Json& kids = spec.at("children");
    if (kind == "switch")
        return quantum_switch(channel_from_spec(kids.at(0)), channel_from_spec(kids.at(1)));
    if (kind == "higher")
        return higher_order_switch(switch_from_spec(kids.at(0)), switch_from_spec(kids.at(1)));
    if (kind == "nested") {
        require(spec.contains("order"), "choi spec: nested needs an order field");
        return nested_switch(spec.at("order").get<int>(), channel_from_spec(kids.at(0)),
                             channel_from_spec(kids.at(1)));
    }
    throw std::invalid_argument("choi spec: unknown switch kind " + kind);
}

int cmd_choi(const std::string& spec_text, std::ostream& out, std::ostream& err) {
    Json spec;
    try {
        spec = Json::parse(spec_text);
    } catch (const Json::parse_error& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }

    Json report;
    std::optional<KrausChannel> ch;
    const bool composite = spec.is_object() && spec.contains("kind") &&
                           (spec.at("kind") == "switch" || spec.at("kind") == "higher" ||
                            spec.at("kind") == "nested");
    if (composite) {
        const SwitchChannel sw = switch_from_spec(spec);
        report["target_dim"] = sw.target_dim();
        report["order_qubits"] = sw.order_qubits();
        ch = sw.inner();
    } else {
        ch = channel_from_spec(spec);
    }

    const ChoiMatrix c = choi(*ch);
    Json rows = Json::array();
    for (Eigen::Index r = 0; r < c.matrix().rows(); ++r) {
        Json row = Json::array();
        for (Eigen::Index cc = 0; cc < c.matrix().cols(); ++cc)
            row.push_back(Json::array({c.matrix()(r, cc).real(), c.matrix()(r, cc).imag()}));
        rows.push_back(std::move(row));
    }
    const HermitianEig eg = eig_hermitian(c.matrix());
    const Mat reduced =
        partial_trace(c.matrix(), {ch->dim_in(), ch->dim_out()}, std::vector<int>{0});

    report["label"] = ch->label();
    report["dim_in"] = ch->dim_in();
    report["dim_out"] = ch->dim_out();
    report["kraus_count"] = ch->kraus_count();
    report["choi"] = std::move(rows);
    report["min_eigenvalue"] = eg.values(eg.values.size() - 1);
    report["trace_residual"] = max_abs_diff(reduced, identity(ch->dim_in()));
    emit(out, report);
    return 0;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"heralded qubit transfer through order-controlled channel compositions"};
    app.name("switchsim");
    app.require_subcommand(1);

    std::string example, p0, p1, p2, r, s, out_path, spec_text;
    int grid = 100, stride = 10, restarts = 50, haar = 1000;
    long max_evals = 4000;
    double tol = 1e-8;
    std::uint64_t seed = 7;

    struct ParamOpts {
        CLI::Option* p0;
        CLI::Option* p1;
        CLI::Option* p2;
        CLI::Option* r;
        CLI::Option* s;
    };
    auto add_params = [&](CLI::App* cmd) {
        ParamOpts po;
        po.p0 = cmd->add_option("--p0", p0, "first pauli weight (decimal or fraction)");
        po.p1 = cmd->add_option("--p1", p1, "second pauli weight");
        po.p2 = cmd->add_option("--p2", p2, "third pauli weight (default 1 - p0 - p1)");
        po.r = cmd->add_option("--r", r, "bit flip probability");
        po.s = cmd->add_option("--s", s, "phase flip probability");
        return po;
    };

    CLI::App* verify =
        app.add_subcommand("verify", "check closed forms and branch tables against brute force");
    verify->add_option("--example", example, "pauli, bitphase, bbgg or negative")
        ->required()
        ->check(CLI::IsMember({"pauli", "bitphase", "bbgg", "negative"}));
    const ParamOpts vparams = add_params(verify);
    verify->add_option("--restarts", restarts, "optimizer restarts (negative example)");
    verify->add_option("--haar", haar, "random control samples (negative example)");
    verify->add_option("--seed", seed, "random seed (negative example)");
    verify->add_option("--tol", tol, "optimizer tolerance");

    CLI::App* scan = app.add_subcommand("scan", "closed-form advantage scan over a parameter grid");
    scan->add_option("--example", example, "pauli, bitphase or bbgg")
        ->required()
        ->check(CLI::IsMember({"pauli", "bitphase", "bbgg"}));
    scan->add_option("--grid", grid, "grid points per axis");
    scan->add_option("--stride", stride, "brute-force cross-check stride");
    scan->add_option("--out", out_path, "CSV output path");

    CLI::App* optimize =
        app.add_subcommand("optimize", "maximize heralded success over pure control states");
    optimize->add_option("--example", example, "pauli, bitphase, bbgg or negative")
        ->required()
        ->check(CLI::IsMember({"pauli", "bitphase", "bbgg", "negative"}));
    const ParamOpts oparams = add_params(optimize);
    optimize->add_option("--restarts", restarts, "optimizer restarts");
    optimize->add_option("--seed", seed, "random seed")->required();
    optimize->add_option("--tol", tol, "optimizer tolerance");
    optimize->add_option("--max-evals", max_evals, "objective evaluations per restart");

    CLI::App* choi_cmd = app.add_subcommand("choi", "print the Choi matrix of a channel spec");
    choi_cmd->add_option("--spec", spec_text, "channel spec as inline JSON")->required();

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }

    auto pauli_params = [&](const ParamOpts& po) {
        require(po.p0->count() > 0 && po.p1->count() > 0,
                "--p0 and --p1 are required for the pauli example");
        const double a = parse_probability(p0);
        const double b = parse_probability(p1);
        const double c = po.p2->count() > 0 ? parse_probability(p2) : 1.0 - a - b;
        return PauliParams(a, b, c);
    };
    auto flip_required = [&](const ParamOpts& po) {
        require(po.r->count() > 0 && po.s->count() > 0,
                "--r and --s are required for this example");
        return FlipParams(parse_probability(r), parse_probability(s));
    };
    auto flip_or_half = [&](const ParamOpts& po) {
        return FlipParams(po.r->count() > 0 ? parse_probability(r) : 0.5,
                          po.s->count() > 0 ? parse_probability(s) : 0.5);
    };

    try {
        if (app.got_subcommand(verify)) {
            if (example == "pauli") return verify_pauli(pauli_params(vparams), out);
            if (example == "bitphase") return verify_bit_phase(flip_required(vparams), out);
            if (example == "bbgg") return verify_bbgg(flip_required(vparams), out);
            OptimizeOptions opts;
            opts.restarts = restarts;
            opts.tol = tol;
            opts.seed = seed;
            opts.max_evals_per_restart = max_evals;
            return verify_negative(flip_or_half(vparams), haar, opts, out);
        }
        if (app.got_subcommand(scan)) {
            require(grid >= 2, "scan: grid must be at least 2");
            require(stride >= 1, "scan: stride must be at least 1");
            return cmd_scan(example, grid, stride, out_path, out, err);
        }
        if (app.got_subcommand(optimize)) {
            OptimizeOptions opts;
            opts.restarts = restarts;
            opts.tol = tol;
            opts.seed = seed;
            opts.max_evals_per_restart = max_evals;
            std::optional<SwitchChannel> target;
            if (example == "pauli")
                target = pauli_doubled(pauli_params(oparams));
            else if (example == "bitphase")
                target = bit_phase_doubled(flip_required(oparams));
            else if (example == "bbgg")
                target = twin_flip_doubled(flip_required(oparams));
            else
                target = bit_phase_doubled(flip_or_half(oparams));
            return cmd_optimize(example, *target, opts, out);
        }
        return cmd_choi(spec_text, out, err);
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const Json::exception& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
}

}  // namespace switchsim
