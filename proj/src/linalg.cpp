#include "vbsim/linalg.hpp"

#include <sstream>
#include <stdexcept>

namespace vbsim {

Mat kron(const Mat& a, const Mat& b) {
  const Eigen::Index ra = a.rows(), ca = a.cols(), rb = b.rows(), cb = b.cols();
  Mat out(ra * rb, ca * cb);
  for (Eigen::Index i = 0; i < ra; ++i)
    for (Eigen::Index k = 0; k < ca; ++k)
      out.block(i * rb, k * cb, rb, cb) = a(i, k) * b;
  return out;
}

double hermiticity_defect(const Mat& a) {
  return (a - a.adjoint()).norm();
}

Mat expm_generator(const Mat& h, double t) {
  if (h.rows() != h.cols()) throw std::invalid_argument("expm_generator: matrix not square");
  const double defect = hermiticity_defect(h);
  const double scale = std::max(1.0, h.norm());
  if (defect > 1e-10 * scale) {
    std::ostringstream msg;
    msg << "expm_generator: input not Hermitian, ||H - H^dag||_F = " << defect;
    throw std::invalid_argument(msg.str());
  }
  Eigen::SelfAdjointEigenSolver<Mat> es(h);
  const Eigen::VectorXd& w = es.eigenvalues();
  const Mat& v = es.eigenvectors();
  Vec phases(w.size());
  for (Eigen::Index i = 0; i < w.size(); ++i) phases(i) = std::exp(cd(0.0, -w(i) * t));
  return v * phases.asDiagonal() * v.adjoint();
}

Mat sqrt_psd(const Mat& a) {
  if (a.rows() != a.cols()) throw std::invalid_argument("sqrt_psd: matrix not square");
  Eigen::SelfAdjointEigenSolver<Mat> es(a);
  const Eigen::VectorXd& w = es.eigenvalues();
  const Mat& v = es.eigenvectors();
  Eigen::VectorXd roots(w.size());
  for (Eigen::Index i = 0; i < w.size(); ++i) {
    if (w(i) < -1e-8) {
      std::ostringstream msg;
      msg << "sqrt_psd: eigenvalue " << w(i) << " below the -1e-8 roundoff floor";
      throw std::domain_error(msg.str());
    }
    roots(i) = w(i) > 0.0 ? std::sqrt(w(i)) : 0.0;
  }
  return v * roots.asDiagonal() * v.adjoint();
}

Mat partial_trace_electron(const Mat& rho) {
  const Eigen::Index d = rho.rows();
  if (d != rho.cols() || d % 2 != 0)
    throw std::invalid_argument("partial_trace_electron: need a square matrix of even dimension");
  const Eigen::Index n = d / 2;
  return rho.topLeftCorner(n, n) + rho.bottomRightCorner(n, n);
}

} // namespace vbsim
