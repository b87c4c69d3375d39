#include "switchsim/linalg.hpp"

#include <cmath>
#include <stdexcept>

namespace switchsim {

void require(bool cond, const std::string& msg) {
    if (!cond) throw std::invalid_argument(msg);
}

void require_finite(const Mat& a, const std::string& where) {
    if (!a.allFinite()) throw std::invalid_argument(where + ": non-finite entries");
}

Mat tensor(const Mat& a, const Mat& b) {
    Mat out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index r = 0; r < a.rows(); ++r)
        for (Eigen::Index c = 0; c < a.cols(); ++c)
            out.block(r * b.rows(), c * b.cols(), b.rows(), b.cols()) = a(r, c) * b;
    return out;
}

Vec tensor(const Vec& a, const Vec& b) {
    Vec out(a.size() * b.size());
    for (Eigen::Index i = 0; i < a.size(); ++i) out.segment(i * b.size(), b.size()) = a(i) * b;
    return out;
}

Mat dagger(const Mat& a) { return a.adjoint(); }

Complex trace(const Mat& a) {
    require(a.rows() == a.cols(), "trace: matrix is not square");
    return a.trace();
}

double max_abs(const Mat& a) { return a.size() == 0 ? 0.0 : a.cwiseAbs().maxCoeff(); }

double max_abs_diff(const Mat& a, const Mat& b) {
    require(a.rows() == b.rows() && a.cols() == b.cols(), "max_abs_diff: shape mismatch");
    return max_abs(a - b);
}

bool approx_equal(const Mat& a, const Mat& b, double tol) { return max_abs_diff(a, b) < tol; }

Mat identity(int n) {
    require(n > 0, "identity: dimension must be positive");
    return Mat::Identity(n, n);
}

Mat projector(const Vec& v) {
    require(v.size() > 0, "projector: empty vector");
    return v * v.adjoint();
}

namespace {

Mat make_pauli(Complex a00, Complex a01, Complex a10, Complex a11) {
    Mat m(2, 2);
    m << a00, a01, a10, a11;
    return m;
}

}  // namespace

const Mat& sigma_x() {
    static const Mat m = make_pauli(0, 1, 1, 0);
    return m;
}

const Mat& sigma_y() {
    static const Mat m = make_pauli(0, Complex(0, -1), Complex(0, 1), 0);
    return m;
}

const Mat& sigma_z() {
    static const Mat m = make_pauli(1, 0, 0, -1);
    return m;
}

Vec ket0() {
    Vec v(2);
    v << 1, 0;
    return v;
}

Vec ket1() {
    Vec v(2);
    v << 0, 1;
    return v;
}

Vec ket_plus() {
    Vec v(2);
    v << 1 / std::sqrt(2.0), 1 / std::sqrt(2.0);
    return v;
}

Vec ket_minus() {
    Vec v(2);
    v << 1 / std::sqrt(2.0), -1 / std::sqrt(2.0);
    return v;
}

Mat partial_trace(const Mat& m, const std::vector<int>& dims, const std::vector<int>& keep) {
    require(!dims.empty(), "partial_trace: dims is empty");
    long total = 1;
    for (int d : dims) {
        require(d > 0, "partial_trace: nonpositive subsystem dimension");
        total *= d;
    }
    require(m.rows() == total && m.cols() == total, "partial_trace: dims do not match matrix size");
    require(!keep.empty(), "partial_trace: keep is empty");
    for (size_t i = 0; i < keep.size(); ++i) {
        require(keep[i] >= 0 && keep[i] < static_cast<int>(dims.size()),
                "partial_trace: keep index out of range");
        require(i == 0 || keep[i] > keep[i - 1], "partial_trace: keep must be strictly increasing");
    }

    const int n = static_cast<int>(dims.size());
    std::vector<long> stride(n, 1);
    for (int i = n - 2; i >= 0; --i) stride[i] = stride[i + 1] * dims[i + 1];

    std::vector<int> traced;
    for (int s = 0, k = 0; s < n; ++s) {
        if (k < static_cast<int>(keep.size()) && keep[k] == s)
            ++k;
        else
            traced.push_back(s);
    }

    // flat offsets of every index combination over the given subsystems
    auto offsets = [&](const std::vector<int>& subs) {
        std::vector<long> offs{0};
        for (int s : subs) {
            std::vector<long> next;
            next.reserve(offs.size() * dims[s]);
            for (long o : offs)
                for (int x = 0; x < dims[s]; ++x) next.push_back(o + x * stride[s]);
            offs = std::move(next);
        }
        return offs;
    };
    const std::vector<long> keep_offs = offsets(keep);
    const std::vector<long> traced_offs = offsets(traced);

    Mat out = Mat::Zero(keep_offs.size(), keep_offs.size());
    for (size_t i = 0; i < keep_offs.size(); ++i)
        for (size_t j = 0; j < keep_offs.size(); ++j)
            for (long t : traced_offs) out(i, j) += m(keep_offs[i] + t, keep_offs[j] + t);
    return out;
}

HermitianEig eig_hermitian(const Mat& a) {
    require(a.rows() == a.cols() && a.rows() > 0, "eig_hermitian: matrix is not square");
    require_finite(a, "eig_hermitian");
    require(max_abs_diff(a, dagger(a)) <= 1e-10, "eig_hermitian: matrix is not Hermitian");

    Eigen::SelfAdjointEigenSolver<Mat> solver(a);
    require(solver.info() == Eigen::Success, "eig_hermitian: eigensolver failed");

    const int n = static_cast<int>(a.rows());
    HermitianEig out;
    out.values.resize(n);
    out.vectors.resize(n, n);
    for (int k = 0; k < n; ++k) {  // Eigen sorts ascending; flip to descending
        out.values(k) = solver.eigenvalues()(n - 1 - k);
        out.vectors.col(k) = solver.eigenvectors().col(n - 1 - k);
    }
    return out;
}

Mat sqrt_psd(const Mat& a) {
    HermitianEig eg = eig_hermitian(a);
    Vec roots(eg.values.size());
    for (Eigen::Index k = 0; k < eg.values.size(); ++k)
        roots(k) = std::sqrt(std::max(eg.values(k), 0.0));
    return eg.vectors * roots.asDiagonal() * eg.vectors.adjoint();
}

}  // namespace switchsim
