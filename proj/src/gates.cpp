#include "vbsim/gates.hpp"

#include <cmath>
#include <stdexcept>

#include "vbsim/constants.hpp"
#include "vbsim/spin_model.hpp"

namespace vbsim {

namespace {

char complement_axis(std::pair<char, char> pair) {
  const std::string all = "xyz";
  std::string have{pair.first, pair.second};
  for (char c : all)
    if (have.find(c) == std::string::npos) return c;
  throw std::invalid_argument("subspace pair must be two distinct letters of x, y, z");
}

Mat outer(const Vec& a, const Vec& b) { return a * b.adjoint(); }

// prod_k op over the three nuclei with an electron 2x2 factor
Mat coll(const Mat& e2, const Mat& op3) {
  return kron(e2, kron(op3, kron(op3, op3)));
}

} // namespace

Vec nuclear_ket(char which) {
  Vec v = Vec::Zero(3);
  const double s2 = 1.0 / std::sqrt(2.0);
  switch (which) {
    case 'x': v(0) = s2; v(2) = -s2; break; // (|1> - |-1>)/sqrt2
    case 'y': v(0) = s2; v(2) = s2; break;  // (|1> + |-1>)/sqrt2
    case 'z': v(1) = 1.0; break;            // |0>
    default: throw std::invalid_argument("nuclear_ket: expected x, y or z");
  }
  return v;
}

Vec nuclear_ket_m(int m) {
  Vec v = Vec::Zero(3);
  switch (m) {
    case 1: v(0) = 1.0; break;
    case 0: v(1) = 1.0; break;
    case -1: v(2) = 1.0; break;
    default: throw std::invalid_argument("nuclear_ket_m: m must be +1, 0 or -1");
  }
  return v;
}

Mat pair_projector(char a, char b) {
  return outer(nuclear_ket(a), nuclear_ket(a)) + outer(nuclear_ket(b), nuclear_ket(b));
}

Mat pair_x(char a, char b) {
  return outer(nuclear_ket(a), nuclear_ket(b)) + outer(nuclear_ket(b), nuclear_ket(a));
}

Mat pair_y(char a, char b) {
  return cd(0, -1) * outer(nuclear_ket(a), nuclear_ket(b)) +
         cd(0, 1) * outer(nuclear_ket(b), nuclear_ket(a));
}

Mat pair_z(char a, char b) {
  return outer(nuclear_ket(a), nuclear_ket(a)) - outer(nuclear_ket(b), nuclear_ket(b));
}

Mat pair_h(char a, char b) {
  return (pair_projector(a, b) + cd(0, 1) * pair_x(a, b)) / std::sqrt(2.0);
}

Mat euler_form(char axis, double phi) {
  const Mat& i_axis = nuclear_op(axis);
  const Vec k = nuclear_ket(axis);
  const Mat p_axis = outer(k, k);
  const Mat p_pair = Mat::Identity(3, 3) - p_axis;
  return p_axis + std::cos(phi) * p_pair - cd(0, 1) * std::sin(phi) * i_axis;
}

Mat collective_nuclear(const Mat& electron2, const Mat& op3) { return coll(electron2, op3); }

Mat entangling_gate(char axis, double phi) {
  Mat g = Mat::Zero(kDim, kDim);
  const Mat se = embed_electron(sigma_op(axis));
  for (int k = 0; k < kNumNuclei; ++k) g += se * embed_nucleus(nuclear_op(axis), k);
  return expm_generator(g, phi);
}

Mat entangling_conditional_form(char axis, double phi) {
  // electron eigenvectors of sigma_axis
  Eigen::SelfAdjointEigenSolver<Mat> es(sigma_op(axis));
  Mat out = Mat::Zero(kDim, kDim);
  for (int i = 0; i < 2; ++i) {
    const double lambda = es.eigenvalues()(i);
    const Vec v = es.eigenvectors().col(i);
    out += coll(outer(v, v), euler_form(axis, lambda * phi));
  }
  return out;
}

GateSpec synchronous_gate(char kind, std::pair<char, char> subspace) {
  const char axis = complement_axis(subspace);
  const char a = subspace.first, b = subspace.second;
  const Mat e2 = Mat::Identity(2, 2);
  GateSpec spec;
  switch (kind) {
    case 'X': {
      // one CPMG block at phi = pi/2 entangles, the final electron pi pulse
      // (assumed instantaneous and perfect) disentangles; fidelity against the
      // entangled-stage target is identical either way
      spec.label = std::string("X_") + a + b;
      spec.domain = coll(e2, pair_projector(a, b));
      spec.ideal = cd(0, 1) * coll(sigma_op(axis), pair_x(a, b));
      spec.recipe = std::string("(-i sigma_") + axis + " (x) 1) * U_" + axis + "(pi/2) on 1 (x) P^3";
      break;
    }
    case 'Z': {
      // free evolution: the zz hyperfine term generates e^{-i pi I_b} per
      // nucleus at t = pi/a_z, which restricts to -Z on the pair subspace
      spec.label = std::string("Z_") + a + b;
      spec.domain = coll(e2, pair_projector(a, b));
      spec.ideal = -coll(e2, pair_z(a, b));
      spec.recipe = std::string("free evolution, U_") + b + "(pi) on 1 (x) P^3";
      break;
    }
    case 'H': {
      // driven on the sigma_axis = -1 electron branch
      Eigen::SelfAdjointEigenSolver<Mat> es(sigma_op(axis));
      const Vec minus = es.eigenvectors().col(0); // eigenvalue -1
      spec.label = std::string("H_") + a + b;
      spec.domain = coll(outer(minus, minus), pair_projector(a, b));
      spec.ideal = coll(outer(minus, minus), pair_h(a, b));
      spec.recipe = std::string("U_") + axis + "(pi/4) on |-><-| (x) P^3";
      break;
    }
    default:
      throw std::invalid_argument("synchronous_gate: kind must be 'X', 'Z' or 'H'");
  }
  return spec;
}

GateSpec rotation_gate(double phi, std::pair<char, char> subspace) {
  const char axis = complement_axis(subspace);
  const Mat e2 = Mat::Identity(2, 2);
  GateSpec spec;
  spec.label = std::string("R_") + subspace.first + subspace.second;
  spec.domain = coll(e2, pair_projector(subspace.first, subspace.second));
  spec.ideal = entangling_gate(axis, phi) * spec.domain;
  spec.recipe = std::string("U_") + axis + "(phi) restricted to 1 (x) P^3";
  return spec;
}

double phase_aligned_overlap(const Mat& a, const Mat& b) {
  const double na = a.norm(), nb = b.norm();
  if (na == 0.0 || nb == 0.0) return 0.0;
  return std::abs((a.adjoint() * b).trace()) / (na * nb);
}

Vec ghz_initial_state(int m_i) {
  // electron |0> times three nuclei in |m_i>
  const Vec n = nuclear_ket_m(m_i);
  Vec out = Vec::Zero(kDim);
  out.head(kNuclearDim) = kron(n, kron(n, n));
  return out;
}

Vec bar_ket(int which, int m_i) {
  if (which != 0 && which != 1) throw std::invalid_argument("bar_ket: which must be 0 or 1");
  const double sign = which == 0 ? 1.0 : -1.0;
  return euler_form('x', sign * kPi / 2.0) * nuclear_ket_m(m_i);
}

Vec ghz_target(double nu, int m_i) {
  const Vec b0 = bar_ket(0, m_i), b1 = bar_ket(1, m_i);
  const Vec t0 = kron(b0, kron(b0, b0));
  const Vec t1 = kron(b1, kron(b1, b1));
  return (t0 + std::exp(cd(0, nu)) * t1) / std::sqrt(2.0);
}

std::array<GhzOutcome, 2> ghz_protocol(const Mat& entangler, int m_i) {
  const Vec psi = entangler * ghz_initial_state(m_i);
  std::array<GhzOutcome, 2> out;
  for (int h = 0; h < 2; ++h) {
    const Vec branch = psi.segment(h * kNuclearDim, kNuclearDim);
    out[h].herald = h;
    out[h].probability = branch.squaredNorm();
    out[h].nuclear = branch * branch.adjoint(); // sub-normalized
    out[h].phase_nu = h == 0 ? 0.0 : kPi;
  }
  return out;
}

Mat ghz_phase_correction() { return entangling_gate('y', kPi / 2.0); }

Mat ghz_transfer_to_yz() {
  Mat u1 = euler_form('z', kPi / 2.0);
  return kron(u1, kron(u1, u1));
}

std::array<WriteOutcome, 2> collective_write(cd alpha, cd beta, int m_i) {
  if (std::abs(std::norm(alpha) + std::norm(beta) - 1.0) > 1e-10)
    throw std::invalid_argument("collective_write: |alpha|^2 + |beta|^2 must be 1");
  const double s2 = 1.0 / std::sqrt(2.0);
  Vec electron(2);
  // alpha|+> + beta|-> in the {|0>, |-1>} basis
  electron << s2 * (alpha + beta), s2 * (alpha - beta);
  const Vec n = nuclear_ket_m(m_i);
  const Vec psi0 = kron(electron, kron(n, kron(n, n)));
  const Vec psi = entangling_gate('x', kPi / 2.0) * psi0;
  std::array<WriteOutcome, 2> out;
  for (int h = 0; h < 2; ++h) {
    Vec branch = psi.segment(h * kNuclearDim, kNuclearDim);
    out[h].probability = branch.squaredNorm();
    out[h].nuclear = branch / std::sqrt(out[h].probability);
  }
  return out;
}

ReadOutcome collective_read(const Vec& nuclear27, int m_i) {
  if (nuclear27.size() != kNuclearDim)
    throw std::invalid_argument("collective_read: nuclear state must be 27-dimensional");
  Vec psi(kDim);
  psi.setZero();
  psi.head(kNuclearDim) = nuclear27.normalized();
  const Vec out54 = entangling_gate('z', kPi / 12.0) * (entangling_gate('x', kPi / 2.0) * psi);

  // reduced electron state rho(i,j) = sum_n psi_{i,n} conj(psi_{j,n})
  Eigen::Matrix2cd rho_e = Eigen::Matrix2cd::Zero();
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      rho_e(i, j) = out54.segment(j * kNuclearDim, kNuclearDim)
                        .dot(out54.segment(i * kNuclearDim, kNuclearDim));

  ReadOutcome res;
  res.purity = (rho_e * rho_e).trace().real();
  res.factorization_error = 1.0 - res.purity;

  // claimed amplitudes from the decomposition of the input on the branch kets
  const Vec b0 = bar_ket(0, m_i), b1 = bar_ket(1, m_i);
  const Vec t0 = kron(b0, kron(b0, b0));
  const Vec t1 = kron(b1, kron(b1, b1));
  const cd a = t0.dot(nuclear27.normalized());
  const cd b = t1.dot(nuclear27.normalized());
  const double s2 = 1.0 / std::sqrt(2.0);
  res.electron_claimed << s2 * (a + b), cd(0, -1) * static_cast<double>(m_i) * s2 * (a - b);
  const double cn = res.electron_claimed.squaredNorm();
  if (cn > 0.0)
    res.overlap = (res.electron_claimed.adjoint() * rho_e * res.electron_claimed)(0).real() / cn;
  return res;
}

} // namespace vbsim
