#pragma once

#include "switchsim/linalg.hpp"

namespace switchsim {

class PureState {
  public:
    // amplitudes must have unit norm within 1e-10
    explicit PureState(Vec amplitudes);

    int dim() const { return static_cast<int>(v_.size()); }
    const Vec& amplitudes() const { return v_; }

  private:
    Vec v_;
};

// Density operator, validated on construction: Hermitian within 1e-10,
// unit trace within 1e-10, eigenvalues >= -1e-10.
class DensityMatrix {
  public:
    explicit DensityMatrix(Mat m);
    static DensityMatrix pure(const PureState& s);

    int dim() const { return static_cast<int>(m_.rows()); }
    const Mat& matrix() const { return m_; }

  private:
    Mat m_;
};

DensityMatrix maximally_mixed(int dim);

DensityMatrix partial_trace(const DensityMatrix& rho, const std::vector<int>& dims,
                            const std::vector<int>& keep);

// Uhlmann fidelity (tr sqrt(sqrt(rho) sigma sqrt(rho)))^2.
double fidelity(const DensityMatrix& rho, const DensityMatrix& sigma);

}  // namespace switchsim
