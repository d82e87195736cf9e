#include "vbsim/spin_model.hpp"

#include <cmath>
#include <stdexcept>

namespace vbsim {

namespace {

Mat make_sigma(char axis) {
  Mat s(2, 2);
  switch (axis) {
    case 'x': s << 0, 1, 1, 0; break;
    case 'y': s << 0, cd(0, -1), cd(0, 1), 0; break;
    case 'z': s << 1, 0, 0, -1; break;
    default: throw std::invalid_argument("sigma_op: axis must be x, y or z");
  }
  return s;
}

Mat make_nuclear(char axis) {
  const double s2 = 1.0 / std::sqrt(2.0);
  Mat m = Mat::Zero(3, 3);
  switch (axis) {
    case 'x':
      m(0, 1) = m(1, 0) = m(1, 2) = m(2, 1) = s2;
      break;
    case 'y':
      m(0, 1) = cd(0, -s2);
      m(1, 0) = cd(0, s2);
      m(1, 2) = cd(0, -s2);
      m(2, 1) = cd(0, s2);
      break;
    case 'z':
      m(0, 0) = 1;
      m(2, 2) = -1;
      break;
    default: throw std::invalid_argument("nuclear_op: axis must be x, y or z");
  }
  return m;
}

int axis_index(char axis) {
  switch (axis) {
    case 'x': return 0;
    case 'y': return 1;
    case 'z': return 2;
    default: throw std::invalid_argument("axis must be x, y or z");
  }
}

// sigma_axis (x) I_k^axis2 products for all (electron axis, nucleus, nuclear axis)
// combinations used by the Hamiltonian, built once.
struct TermCache {
  // terms[e_axis][k][n_axis]
  Mat terms[3][3][3];
  Mat quad; // sum_k (I_k^z)^2 (dimensionless; caller scales by Q)
  TermCache() {
    for (int ea = 0; ea < 3; ++ea) {
      const char eaxis = "xyz"[ea];
      const Mat se = embed_electron(sigma_op(eaxis));
      for (int k = 0; k < 3; ++k)
        for (int na = 0; na < 3; ++na)
          terms[ea][k][na] = se * embed_nucleus(nuclear_op("xyz"[na]), k);
    }
    quad = Mat::Zero(kDim, kDim);
    const Mat iz2 = nuclear_op('z') * nuclear_op('z');
    for (int k = 0; k < 3; ++k) quad += embed_nucleus(iz2, k);
  }
};

const TermCache& cache() {
  static const TermCache c;
  return c;
}

} // namespace

const Mat& sigma_op(char axis) {
  static const Mat sx = make_sigma('x'), sy = make_sigma('y'), sz = make_sigma('z');
  switch (axis_index(axis)) {
    case 0: return sx;
    case 1: return sy;
    default: return sz;
  }
}

const Mat& nuclear_op(char axis) {
  static const Mat ix = make_nuclear('x'), iy = make_nuclear('y'), iz = make_nuclear('z');
  switch (axis_index(axis)) {
    case 0: return ix;
    case 1: return iy;
    default: return iz;
  }
}

Mat embed_electron(const Mat& op2) {
  return kron(op2, Mat::Identity(kNuclearDim, kNuclearDim));
}

Mat embed_nucleus(const Mat& op3, int k) {
  if (k < 0 || k >= kNumNuclei) throw std::invalid_argument("embed_nucleus: k out of range");
  const Mat e2 = Mat::Identity(2, 2);
  const Mat e3 = Mat::Identity(3, 3);
  Mat out = (k == 0) ? op3 : e3;
  for (int j = 1; j < kNumNuclei; ++j) out = kron(out, j == k ? op3 : e3);
  return kron(e2, out);
}

ModelParams::ModelParams(double B_mT) : field_mT(B_mT) {
  const double w_signed = kDgs - kGammaE * B_mT;
  above_crossing = w_signed < 0.0;
  omega0 = std::abs(w_signed);
  const double s2 = std::sqrt(2.0);
  double az_sum = 0.0, aperp_sum = 0.0;
  for (int k = 0; k < 3; ++k) {
    const auto& A = kHyperfine[k];
    omega_n[k] = kGammaN * B_mT + A[2][2] / 2.0;
    delta_k[k] = omega0 - omega_n[k];
    sigma_k[k] = omega0 + omega_n[k];
    a_perp_k[k] = (A[0][0] + A[1][1]) / (2.0 * s2);
    b_perp_k[k] = (A[0][0] - A[1][1]) / (2.0 * s2);
    a_xy_k[k] = A[0][1];
    az_sum += A[2][2];
    aperp_sum += a_perp_k[k];
  }
  a_z = az_sum / 6.0;
  a_perp = aperp_sum / 3.0;
  delta_mean = (delta_k[0] + delta_k[1] + delta_k[2]) / 3.0;
}

TermSelector term_selector_from_string(const std::string& s) {
  if (s == "all") return TermSelector::All;
  if (s == "eff") return TermSelector::Effective;
  if (s == "eff-avg") return TermSelector::EffectiveAveraged;
  if (s == "rw-odd") return TermSelector::RotatingOdd;
  if (s == "crw") return TermSelector::CounterRotating;
  throw std::invalid_argument("terms: expected all, eff, eff-avg, rw-odd or crw, got '" + s + "'");
}

std::string to_string(TermSelector sel) {
  switch (sel) {
    case TermSelector::All: return "all";
    case TermSelector::Effective: return "eff";
    case TermSelector::EffectiveAveraged: return "eff-avg";
    case TermSelector::RotatingOdd: return "rw-odd";
    case TermSelector::CounterRotating: return "crw";
  }
  return "all";
}

const Mat& quadrupole_term() {
  static const Mat q = kRadPerNs * kQuadrupole * cache().quad;
  return q;
}

void rotating_hamiltonian_into(Mat& h, double t_ns, const ModelParams& pm,
                               const FilterTriple& f, TermSelector sel,
                               bool quadrupole) {
  const TermCache& tc = cache();
  h.resize(kDim, kDim);
  h.setZero();
  const double K = kRadPerNs;
  const double s2 = std::sqrt(2.0);

  const bool want_eff = sel == TermSelector::All || sel == TermSelector::Effective ||
                        sel == TermSelector::EffectiveAveraged;
  if (want_eff) {
    if (sel == TermSelector::EffectiveAveraged) {
      // mean couplings at the mean detuning
      const double c = std::cos(K * pm.delta_mean * t_ns);
      for (int k = 0; k < 3; ++k) {
        h += (K * pm.a_z * f.fz) * tc.terms[2][k][2];
        h += (K * pm.a_perp * c) * (f.fx * tc.terms[0][k][0] + f.fy * tc.terms[1][k][1]);
      }
    } else {
      for (int k = 0; k < 3; ++k) {
        h += (K * (kHyperfine[k][2][2] / 2.0) * f.fz) * tc.terms[2][k][2];
        const double c = std::cos(K * pm.delta_k[k] * t_ns);
        h += (K * pm.a_perp_k[k] * c) * (f.fx * tc.terms[0][k][0] + f.fy * tc.terms[1][k][1]);
      }
    }
  }
  if (sel == TermSelector::All || sel == TermSelector::RotatingOdd) {
    for (int k = 0; k < 3; ++k) {
      const double s = std::sin(K * pm.delta_k[k] * t_ns);
      h += (-K * pm.a_perp_k[k] * s) * (f.fx * tc.terms[0][k][1] - f.fy * tc.terms[1][k][0]);
    }
  }
  if (sel == TermSelector::All || sel == TermSelector::CounterRotating) {
    for (int k = 0; k < 3; ++k) {
      const double cs = std::cos(K * pm.sigma_k[k] * t_ns);
      const double sn = std::sin(K * pm.sigma_k[k] * t_ns);
      h += (K * pm.b_perp_k[k]) *
           (cs * (f.fx * tc.terms[0][k][0] - f.fy * tc.terms[1][k][1]) +
            sn * (f.fx * tc.terms[0][k][1] + f.fy * tc.terms[1][k][0]));
      // in-plane anisotropy; the frame transform leaves Axy/sqrt2 on these terms
      h += (K * pm.a_xy_k[k] / s2) *
           (-sn * (f.fx * tc.terms[0][k][0] - f.fy * tc.terms[1][k][1]) +
            cs * (f.fx * tc.terms[0][k][1] + f.fy * tc.terms[1][k][0]));
    }
  }
  if (quadrupole) h += quadrupole_term();
}

Mat rotating_hamiltonian(double t_ns, const ModelParams& pm, const FilterTriple& f,
                         TermSelector sel, bool quadrupole) {
  Mat h;
  rotating_hamiltonian_into(h, t_ns, pm, f, sel, quadrupole);
  return h;
}

double synchronous_field(double phi, int n_periods) {
  if (phi == 0.0) throw std::invalid_argument("synchronous_field: phi must be nonzero");
  if (n_periods <= 0) throw std::invalid_argument("synchronous_field: n_periods must be positive");
  double az_sum = 0.0, aperp_sum = 0.0;
  const double s2 = std::sqrt(2.0);
  for (int k = 0; k < 3; ++k) {
    az_sum += kHyperfine[k][2][2];
    aperp_sum += kHyperfine[k][0][0] + kHyperfine[k][1][1];
  }
  const double a_z = az_sum / 6.0;
  const double a_perp = aperp_sum / (6.0 * s2);
  return (4.0 * n_periods * a_perp / phi + kDgs + a_z) / (kGammaE - kGammaN);
}

} // namespace vbsim
