#include "switchsim/state.hpp"

#include <cmath>

namespace switchsim {

PureState::PureState(Vec amplitudes) : v_(std::move(amplitudes)) {
    require(v_.size() > 0, "pure state: empty amplitude vector");
    require(v_.allFinite(), "pure state: non-finite amplitudes");
    require(std::abs(v_.norm() - 1.0) <= 1e-10, "pure state: norm is not 1");
}

DensityMatrix::DensityMatrix(Mat m) : m_(std::move(m)) {
    require(m_.rows() == m_.cols() && m_.rows() > 0, "density matrix: not square");
    require_finite(m_, "density matrix");
    require(max_abs_diff(m_, dagger(m_)) <= 1e-10, "density matrix: not Hermitian");
    require(std::abs(trace(m_) - 1.0) <= 1e-10, "density matrix: trace is not 1");
    HermitianEig eg = eig_hermitian(m_);
    require(eg.values.minCoeff() >= -1e-10, "density matrix: negative eigenvalue");
}

DensityMatrix DensityMatrix::pure(const PureState& s) {
    return DensityMatrix(projector(s.amplitudes()));
}

DensityMatrix maximally_mixed(int dim) {
    require(dim > 0, "maximally_mixed: dimension must be positive");
    return DensityMatrix(Mat::Identity(dim, dim) / static_cast<double>(dim));
}

DensityMatrix partial_trace(const DensityMatrix& rho, const std::vector<int>& dims,
                            const std::vector<int>& keep) {
    return DensityMatrix(partial_trace(rho.matrix(), dims, keep));
}

double fidelity(const DensityMatrix& rho, const DensityMatrix& sigma) {
    require(rho.dim() == sigma.dim(), "fidelity: dimension mismatch");
    const Mat root = sqrt_psd(rho.matrix());
    Mat inner = root * sigma.matrix() * root;
    inner = (inner + dagger(inner)) / 2.0;
    HermitianEig eg = eig_hermitian(inner);
    double sum = 0.0;
    for (Eigen::Index k = 0; k < eg.values.size(); ++k)
        sum += std::sqrt(std::max(eg.values(k), 0.0));
    return sum * sum;
}

}  // namespace switchsim
