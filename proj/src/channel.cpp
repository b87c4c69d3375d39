#include "switchsim/channel.hpp"

#include <cmath>
#include <cstdio>

namespace switchsim {

KrausChannel::KrausChannel(int dim_in, int dim_out, std::vector<Mat> kraus, std::string label)
    : dim_in_(dim_in), dim_out_(dim_out), kraus_(std::move(kraus)), label_(std::move(label)) {
    require(dim_in_ > 0 && dim_out_ > 0, "channel: dimensions must be positive");
    require(!kraus_.empty(), "channel: needs at least one Kraus operator");
    for (const Mat& k : kraus_) {
        require(k.rows() == dim_out_ && k.cols() == dim_in_, "channel: Kraus operator shape mismatch");
        require_finite(k, "channel Kraus operator");
    }
    const double res = completeness_residual(kraus_, dim_in_);
    require(res < 1e-9,
            "channel: Kraus operators violate completeness (residual " + std::to_string(res) + ")");
}

double completeness_residual(const std::vector<Mat>& kraus, int dim_in) {
    require(dim_in > 0, "completeness_residual: dimension must be positive");
    require(!kraus.empty(), "completeness_residual: empty Kraus list");
    Mat sum = Mat::Zero(dim_in, dim_in);
    for (const Mat& k : kraus) {
        require(k.cols() == dim_in, "completeness_residual: Kraus operator shape mismatch");
        sum += k.adjoint() * k;
    }
    return max_abs_diff(sum, identity(dim_in));
}

CompletenessReport validate_cptp(const KrausChannel& ch) {
    return CompletenessReport{completeness_residual(ch.kraus(), ch.dim_in())};
}

Mat apply_to_operator(const KrausChannel& ch, const Mat& op) {
    require(op.rows() == ch.dim_in() && op.cols() == ch.dim_in(),
            "apply: operator dimension mismatch");
    Mat out = Mat::Zero(ch.dim_out(), ch.dim_out());
    for (const Mat& k : ch.kraus()) out += k * op * k.adjoint();
    return out;
}

DensityMatrix apply(const KrausChannel& ch, const DensityMatrix& rho) {
    return DensityMatrix(apply_to_operator(ch, rho.matrix()));
}

KrausChannel compose(const KrausChannel& after, const KrausChannel& before) {
    require(before.dim_out() == after.dim_in(), "compose: channel dimensions do not chain");
    std::vector<Mat> ks;
    ks.reserve(static_cast<size_t>(after.kraus_count()) * before.kraus_count());
    for (const Mat& a : after.kraus())
        for (const Mat& b : before.kraus()) ks.push_back(a * b);
    return KrausChannel(before.dim_in(), after.dim_out(), std::move(ks),
                        "compose(" + after.label() + "," + before.label() + ")");
}

ChoiMatrix::ChoiMatrix(int dim_in, int dim_out, Mat m)
    : dim_in_(dim_in), dim_out_(dim_out), m_(std::move(m)) {
    require(dim_in_ > 0 && dim_out_ > 0, "choi: dimensions must be positive");
    const long n = static_cast<long>(dim_in_) * dim_out_;
    require(m_.rows() == n && m_.cols() == n, "choi: matrix size mismatch");
    require(max_abs_diff(m_, dagger(m_)) <= 1e-10, "choi: matrix is not Hermitian");
    HermitianEig eg = eig_hermitian(m_);
    require(eg.values.minCoeff() >= -1e-9, "choi: matrix is not positive semidefinite");
    const Mat reduced = partial_trace(m_, {dim_in_, dim_out_}, {0});
    require(max_abs_diff(reduced, identity(dim_in_)) < 1e-9, "choi: channel is not trace preserving");
}

ChoiMatrix choi(const KrausChannel& ch) {
    const int din = ch.dim_in();
    const int dout = ch.dim_out();
    Mat c = Mat::Zero(static_cast<long>(din) * dout, static_cast<long>(din) * dout);
    for (const Mat& k : ch.kraus()) {
        // vectorize with the input index slowest: v[(i,a)] = K(a,i)
        Vec v(static_cast<long>(din) * dout);
        for (int i = 0; i < din; ++i)
            for (int a = 0; a < dout; ++a) v(static_cast<long>(i) * dout + a) = k(a, i);
        c += v * v.adjoint();
    }
    return ChoiMatrix(din, dout, std::move(c));
}

double choi_distance(const ChoiMatrix& a, const ChoiMatrix& b) {
    require(a.dim_in() == b.dim_in() && a.dim_out() == b.dim_out(),
            "choi_distance: dimension mismatch");
    return max_abs_diff(a.matrix(), b.matrix());
}

namespace {

std::string fmt_param(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", v);
    return buf;
}

}  // namespace

KrausChannel identity_channel(int dim) {
    return KrausChannel(dim, dim, {identity(dim)}, "identity");
}

KrausChannel pauli_channel(double p0, double p1, double p2) {
    require(p0 >= 0 && p1 >= 0 && p2 >= 0, "pauli_channel: probabilities must be nonnegative");
    require(std::abs(p0 + p1 + p2 - 1.0) <= 1e-12, "pauli_channel: probabilities must sum to 1");
    std::vector<Mat> ks{std::sqrt(p0) * identity(2), std::sqrt(p1) * sigma_y(),
                        std::sqrt(p2) * sigma_z()};
    return KrausChannel(2, 2, std::move(ks),
                        "pauli(" + fmt_param(p0) + "," + fmt_param(p1) + "," + fmt_param(p2) + ")");
}

KrausChannel bit_flip(double r) {
    require(r >= 0 && r <= 1, "bit_flip: probability out of range");
    std::vector<Mat> ks{std::sqrt(1 - r) * identity(2), std::sqrt(r) * sigma_x()};
    return KrausChannel(2, 2, std::move(ks), "bitflip(" + fmt_param(r) + ")");
}

KrausChannel phase_flip(double s) {
    require(s >= 0 && s <= 1, "phase_flip: probability out of range");
    std::vector<Mat> ks{std::sqrt(1 - s) * identity(2), std::sqrt(s) * sigma_z()};
    return KrausChannel(2, 2, std::move(ks), "phaseflip(" + fmt_param(s) + ")");
}

KrausChannel remix_kraus(const KrausChannel& ch, const Mat& v) {
    require(v.cols() == ch.kraus_count(), "remix_kraus: isometry width must match Kraus count");
    require(v.rows() >= v.cols(), "remix_kraus: isometry cannot shrink the Kraus space");
    require_finite(v, "remix_kraus isometry");
    require(max_abs_diff(Mat(v.adjoint() * v), identity(static_cast<int>(v.cols()))) <= 1e-10,
            "remix_kraus: columns are not orthonormal");
    std::vector<Mat> ks;
    ks.reserve(v.rows());
    for (Eigen::Index a = 0; a < v.rows(); ++a) {
        Mat k = Mat::Zero(ch.dim_out(), ch.dim_in());
        for (Eigen::Index i = 0; i < v.cols(); ++i) k += v(a, i) * ch.kraus()[i];
        ks.push_back(std::move(k));
    }
    return KrausChannel(ch.dim_in(), ch.dim_out(), std::move(ks), ch.label());
}

Json to_json(const KrausChannel& ch) {
    Json ops = Json::array();
    for (const Mat& k : ch.kraus()) {
        Json entries = Json::array();
        for (Eigen::Index r = 0; r < k.rows(); ++r)
            for (Eigen::Index c = 0; c < k.cols(); ++c)
                entries.push_back(Json::array({k(r, c).real(), k(r, c).imag()}));
        ops.push_back(std::move(entries));
    }
    return Json{{"label", ch.label()},
                {"dim_in", ch.dim_in()},
                {"dim_out", ch.dim_out()},
                {"kraus", std::move(ops)}};
}

KrausChannel channel_from_json(const Json& j) {
    require(j.is_object(), "channel json: not an object");
    for (const char* key : {"label", "dim_in", "dim_out", "kraus"})
        require(j.contains(key), std::string("channel json: missing field ") + key);
    const int din = j.at("dim_in").get<int>();
    const int dout = j.at("dim_out").get<int>();
    require(din > 0 && dout > 0, "channel json: dimensions must be positive");
    require(j.at("kraus").is_array() && !j.at("kraus").empty(), "channel json: kraus must be a nonempty array");
    std::vector<Mat> ks;
    for (const Json& op : j.at("kraus")) {
        require(op.is_array() && static_cast<long>(op.size()) == static_cast<long>(din) * dout,
                "channel json: Kraus entry count mismatch");
        Mat k(dout, din);
        long idx = 0;
        for (Eigen::Index r = 0; r < dout; ++r)
            for (Eigen::Index c = 0; c < din; ++c, ++idx) {
                const Json& e = op.at(idx);
                require(e.is_array() && e.size() == 2, "channel json: entry is not [re, im]");
                k(r, c) = Complex(e.at(0).get<double>(), e.at(1).get<double>());
            }
        ks.push_back(std::move(k));
    }
    return KrausChannel(din, dout, std::move(ks), j.at("label").get<std::string>());
}

}  // namespace switchsim
