#pragma once

#include <complex>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace switchsim {

using Complex = std::complex<double>;

// Row-major so flattened entries line up with tensor-product index arithmetic
// (first subsystem varies slowest).
using Mat = Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Vec = Eigen::Matrix<Complex, Eigen::Dynamic, 1>;
using RealVec = Eigen::VectorXd;

// Throws std::invalid_argument with msg when cond is false.
void require(bool cond, const std::string& msg);
void require_finite(const Mat& a, const std::string& where);

Mat tensor(const Mat& a, const Mat& b);
Vec tensor(const Vec& a, const Vec& b);
Mat dagger(const Mat& a);
Complex trace(const Mat& a);
double max_abs(const Mat& a);
double max_abs_diff(const Mat& a, const Mat& b);
bool approx_equal(const Mat& a, const Mat& b, double tol);

Mat identity(int n);
Mat projector(const Vec& v);

const Mat& sigma_x();
const Mat& sigma_y();
const Mat& sigma_z();
Vec ket0();
Vec ket1();
Vec ket_plus();
Vec ket_minus();

// Trace out the subsystems not listed in `keep` from an operator on the tensor
// product of `dims` (first factor slowest). `keep` must be strictly increasing
// and nonempty; kept factors stay in their original order.
Mat partial_trace(const Mat& m, const std::vector<int>& dims, const std::vector<int>& keep);

struct HermitianEig {
    RealVec values;  // descending
    Mat vectors;     // column k pairs with values(k)
};

// Requires max |a - a^dag| <= 1e-10.
HermitianEig eig_hermitian(const Mat& a);

// Principal square root of a positive semidefinite matrix; eigenvalues below
// zero are clamped before the square root.
Mat sqrt_psd(const Mat& a);

}  // namespace switchsim
