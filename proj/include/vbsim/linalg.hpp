#pragma once
#include <complex>

#include <Eigen/Dense>

namespace vbsim {

using cd = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;

// Kronecker product, row-major index convention: (A(x)B)[i*rb+j, k*cb+l] = A(i,k)B(j,l).
Mat kron(const Mat& a, const Mat& b);

// Frobenius norm of the anti-Hermitian part, ||A - A^dag||_F.
double hermiticity_defect(const Mat& a);

// exp(-i H t) for Hermitian H via eigendecomposition. Throws std::invalid_argument
// when H is not Hermitian; the message carries the anti-Hermitian norm so the
// caller can see how far off the input was.
Mat expm_generator(const Mat& h, double t);

// Principal square root of a positive semidefinite Hermitian matrix.
// Eigenvalues in [-1e-8, 0) are treated as roundoff and clamped to zero;
// anything below -1e-8 throws std::domain_error.
Mat sqrt_psd(const Mat& a);

// Partial trace over a leading two-level factor: (2n)x(2n) -> nxn.
Mat partial_trace_electron(const Mat& rho);

} // namespace vbsim
