#include "switchsim/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "switchsim/parallel.hpp"

namespace switchsim {

ControlParametrization::ControlParametrization(int qubits, bool product)
    : qubits_(qubits), product_(product) {
    require(qubits_ >= 1, "control parametrization: needs at least one qubit");
    require(qubits_ <= 8, "control parametrization: too many qubits");
}

int ControlParametrization::angle_count() const {
    return product_ ? 2 * qubits_ : 2 * dim() - 2;
}

namespace {

// hyperspherical magnitudes: n-1 angles -> n values whose squares sum to 1
std::vector<double> sphere_magnitudes(const double* thetas, int n) {
    std::vector<double> mags(n);
    double running = 1.0;
    for (int m = 0; m + 1 < n; ++m) {
        mags[m] = running * std::cos(thetas[m]);
        running *= std::sin(thetas[m]);
    }
    mags[n - 1] = running;
    return mags;
}

// inverse of sphere_magnitudes for nonnegative values
std::vector<double> sphere_angles(const std::vector<double>& mags) {
    const int n = static_cast<int>(mags.size());
    std::vector<double> thetas(n - 1);
    double rem = 1.0;
    for (int m = 0; m + 1 < n; ++m) {
        const double denom = std::sqrt(std::max(rem, 0.0));
        const double c = denom > 1e-15 ? std::clamp(mags[m] / denom, 0.0, 1.0) : 1.0;
        thetas[m] = std::acos(c);
        rem -= mags[m] * mags[m];
    }
    return thetas;
}

Vec single_qubit(double theta, double phi) {
    Vec v(2);
    v << std::cos(theta), std::polar(std::sin(theta), phi);
    return v;
}

}  // namespace

PureState ControlParametrization::decode(const RealVec& angles) const {
    require(angles.size() == angle_count(), "control parametrization: wrong angle count");
    if (product_) {
        Vec state(1);
        state(0) = 1.0;
        for (int q = 0; q < qubits_; ++q)
            state = tensor(state, single_qubit(angles(2 * q), angles(2 * q + 1)));
        return PureState(std::move(state));
    }
    const int n = dim();
    const std::vector<double> mags = sphere_magnitudes(angles.data(), n);
    Vec state(n);
    state(0) = mags[0];
    for (int m = 1; m < n; ++m) state(m) = std::polar(mags[m], angles(n - 2 + m));
    return PureState(std::move(state));
}

RealVec ControlParametrization::encode(const Vec& state) const {
    require(state.size() == dim(), "control parametrization: state dimension mismatch");
    require(std::abs(state.norm() - 1.0) <= 1e-10, "control parametrization: state is not normalized");

    if (product_) {
        // peel off one qubit factor at a time via the reduced state
        RealVec angles(angle_count());
        Vec rest = state;
        for (int q = 0; q < qubits_; ++q) {
            const int tail = static_cast<int>(rest.size()) / 2;
            std::vector<int> dims{2, tail};
            Mat reduced = tail == 1 ? projector(rest) : partial_trace(projector(rest), dims, {0});
            HermitianEig eg = eig_hermitian((reduced + dagger(reduced)) / 2.0);
            require(eg.values(0) >= 1.0 - 1e-9,
                    "control parametrization: state is not a product of qubit factors");
            Vec factor = eg.vectors.col(0);
            const double theta = std::atan2(std::abs(factor(1)), std::abs(factor(0)));
            const double phi = std::arg(factor(1)) - std::arg(factor(0));
            angles(2 * q) = theta;
            angles(2 * q + 1) = std::abs(factor(1)) > 1e-12 ? phi : 0.0;
            if (tail == 1) break;
            // project the factor out to expose the remaining qubits
            const Mat bra = factor.adjoint();
            Vec next = Vec(tensor(bra, identity(tail)) * rest);
            const double norm = next.norm();
            require(norm > 1e-9, "control parametrization: degenerate product factor");
            rest = next / norm;
        }
        return angles;
    }

    const int n = dim();
    std::vector<double> mags(n);
    for (int m = 0; m < n; ++m) mags[m] = std::abs(state(m));
    double global = 0.0;
    for (int m = 0; m < n; ++m)
        if (mags[m] > 1e-12) {
            global = std::arg(state(m));
            break;
        }
    const std::vector<double> thetas = sphere_angles(mags);
    RealVec angles(angle_count());
    for (int m = 0; m + 1 < n; ++m) angles(m) = thetas[m];
    for (int m = 1; m < n; ++m)
        angles(n - 2 + m) = mags[m] > 1e-12 ? std::arg(state(m)) - global : 0.0;
    return angles;
}

PureState haar_random_state(int dim, std::mt19937_64& rng) {
    require(dim >= 1, "haar_random_state: dimension must be positive");
    std::normal_distribution<double> gauss(0.0, 1.0);
    Vec v(dim);
    double norm = 0.0;
    do {
        for (int i = 0; i < dim; ++i) v(i) = Complex(gauss(rng), gauss(rng));
        norm = v.norm();
    } while (norm < 1e-12);
    return PureState(Vec(v / norm));
}

SimplexResult nelder_mead(const std::function<double(const RealVec&)>& f, const RealVec& x0,
                          double step, double tol, long max_evals) {
    const int n = static_cast<int>(x0.size());
    require(n >= 1, "nelder_mead: empty start point");
    require(step > 0 && tol > 0 && max_evals > n, "nelder_mead: bad options");

    long evals = 0;
    auto eval = [&](const RealVec& x) {
        ++evals;
        return f(x);
    };

    std::vector<RealVec> vx(n + 1, x0);
    std::vector<double> fv(n + 1);
    for (int i = 1; i <= n; ++i) vx[i](i - 1) += step;
    for (int i = 0; i <= n; ++i) fv[i] = eval(vx[i]);

    std::vector<int> order(n + 1);
    while (evals < max_evals) {
        std::iota(order.begin(), order.end(), 0);
        std::sort(order.begin(), order.end(), [&](int a, int b) { return fv[a] < fv[b]; });
        const int best = order[0], second_worst = order[n - 1], worst = order[n];

        double diameter = 0.0;
        for (int i = 0; i <= n; ++i)
            diameter = std::max(diameter, (vx[i] - vx[best]).cwiseAbs().maxCoeff());
        if (diameter < tol || fv[worst] - fv[best] < tol) break;

        RealVec centroid = RealVec::Zero(n);
        for (int i = 0; i <= n; ++i)
            if (i != worst) centroid += vx[i];
        centroid /= n;

        const RealVec reflected = centroid + (centroid - vx[worst]);
        const double fr = eval(reflected);
        if (fr < fv[best]) {
            const RealVec expanded = centroid + 2.0 * (centroid - vx[worst]);
            const double fe = eval(expanded);
            if (fe < fr) {
                vx[worst] = expanded;
                fv[worst] = fe;
            } else {
                vx[worst] = reflected;
                fv[worst] = fr;
            }
            continue;
        }
        if (fr < fv[second_worst]) {
            vx[worst] = reflected;
            fv[worst] = fr;
            continue;
        }
        const bool outside = fr < fv[worst];
        const RealVec contracted =
            outside ? RealVec(centroid + 0.5 * (reflected - centroid))
                    : RealVec(centroid - 0.5 * (centroid - vx[worst]));
        const double fc = eval(contracted);
        if (fc < (outside ? fr : fv[worst])) {
            vx[worst] = contracted;
            fv[worst] = fc;
            continue;
        }
        for (int i = 0; i <= n; ++i) {  // shrink toward the best vertex
            if (i == best) continue;
            vx[i] = vx[best] + 0.5 * (vx[i] - vx[best]);
            fv[i] = eval(vx[i]);
        }
    }

    int best = 0;
    for (int i = 1; i <= n; ++i)
        if (fv[i] < fv[best]) best = i;
    return {vx[best], fv[best], evals};
}

namespace {

PureState uniform_plus_state(int qubits) {
    const int n = 1 << qubits;
    Vec v = Vec::Constant(n, Complex(1.0 / std::sqrt(static_cast<double>(n)), 0.0));
    return PureState(std::move(v));
}

double protocol_value(const SwitchChannel& sw, const MeasurementBasis& basis, const PureState& st,
                      const ClassifyOptions& opts) {
    return run_protocol(sw, DensityMatrix::pure(st), basis, opts).success_probability;
}

}  // namespace

OptimizationResult optimize_control(const SwitchChannel& sw, const MeasurementBasis& basis,
                                    const OptimizeOptions& opts) {
    require(opts.restarts >= 1, "optimize_control: needs at least one restart");
    require(opts.tol > 0, "optimize_control: tolerance must be positive");
    require(basis.qubits() == sw.order_qubits(), "optimize_control: basis does not match controls");

    const ControlParametrization par(sw.order_qubits(), opts.product_controls);
    const ClassifyOptions relaxed{1e-6, 1e-6, 1e-12};
    const ClassifyOptions strict{};

    auto objective = [&](const RealVec& angles) {
        return -protocol_value(sw, basis, par.decode(angles), relaxed);
    };

    struct RestartOutcome {
        double strict_value = 0.0;
        Vec control;
        long evaluations = 0;
    };
    std::vector<RestartOutcome> outcomes(opts.restarts);

    parallel_for(opts.restarts, [&](int r) {
        RealVec x0;
        if (r == 0) {
            x0 = par.encode(uniform_plus_state(sw.order_qubits()).amplitudes());
        } else {
            std::mt19937_64 rng(opts.seed + 0x9E3779B97F4A7C15ull * static_cast<std::uint64_t>(r));
            Vec start;
            if (opts.product_controls) {
                start = Vec::Ones(1);
                for (int q = 0; q < sw.order_qubits(); ++q)
                    start = tensor(start, haar_random_state(2, rng).amplitudes());
            } else {
                start = haar_random_state(par.dim(), rng).amplitudes();
            }
            x0 = par.encode(start);
        }
        const SimplexResult sr =
            nelder_mead(objective, x0, 0.35, opts.tol, opts.max_evals_per_restart);
        // The relaxed objective tops out on the classification boundary, where
        // the strict test sees rank two and reports zero, so the search
        // endpoint is not automatically the best certifiable point. Score the
        // seed and the endpoint strictly and keep the winner.
        const PureState searched = par.decode(sr.x);
        const PureState seeded = par.decode(x0);
        const double searched_value = protocol_value(sw, basis, searched, strict);
        const double seeded_value = protocol_value(sw, basis, seeded, strict);
        const bool keep_searched = searched_value >= seeded_value;
        outcomes[r].strict_value = keep_searched ? searched_value : seeded_value;
        outcomes[r].control = (keep_searched ? searched : seeded).amplitudes();
        outcomes[r].evaluations = sr.evaluations + 2;
    });

    OptimizationResult result;
    result.restarts_used = opts.restarts;
    int best = 0;
    for (int r = 0; r < opts.restarts; ++r) {
        result.evaluations += outcomes[r].evaluations;
        result.restart_values.push_back(outcomes[r].strict_value);
        if (outcomes[r].strict_value > outcomes[best].strict_value) best = r;
    }
    result.best_value = outcomes[best].strict_value;
    result.best_control = outcomes[best].control;
    return result;
}

ControlComparison compare_product_vs_entangled(const SwitchChannel& sw,
                                               const MeasurementBasis& basis,
                                               OptimizeOptions opts) {
    opts.product_controls = true;
    OptimizationResult product = optimize_control(sw, basis, opts);
    opts.product_controls = false;
    OptimizationResult unrestricted = optimize_control(sw, basis, opts);
    if (product.best_value > unrestricted.best_value) {
        // every product control is also an unrestricted candidate
        unrestricted.best_value = product.best_value;
        unrestricted.best_control = product.best_control;
    }
    return {std::move(product), std::move(unrestricted)};
}

}  // namespace switchsim
