#include "vbsim/pulse_control.hpp"

#include <cmath>
#include <stdexcept>

namespace vbsim {

Schedule Schedule::free() { return Schedule{}; }

Schedule Schedule::cpmg(double period_ns) {
  if (period_ns <= 0.0) throw std::invalid_argument("Schedule::cpmg: period must be positive");
  Schedule s;
  s.kind = Kind::Cpmg;
  s.period_ns = period_ns;
  return s;
}

Schedule Schedule::constant(double fx, double fy, double fz) {
  Schedule s;
  s.kind = Kind::Constant;
  s.fixed = FilterTriple{fx, fy, fz};
  return s;
}

FilterTriple Schedule::filters(double t_ns) const {
  switch (kind) {
    case Kind::Free: return FilterTriple{1.0, 1.0, 1.0};
    case Kind::Constant: return fixed;
    case Kind::Cpmg: {
      const double tau = t_ns / period_ns - std::floor(t_ns / period_ns);
      const double f = (tau < 0.25 || tau >= 0.75) ? 1.0 : -1.0;
      return FilterTriple{f, 1.0, f};
    }
  }
  return FilterTriple{};
}

std::vector<double> Schedule::breakpoints(double t_max) const {
  std::vector<double> out;
  if (kind != Kind::Cpmg) return out;
  for (long m = 0;; ++m) {
    for (double frac : {0.25, 0.75}) {
      const double tb = (static_cast<double>(m) + frac) * period_ns;
      if (tb >= t_max) return out;
      out.push_back(tb);
    }
  }
}

double cpmg_period(const ModelParams& pm, int p) {
  if (p <= 0 || p % 2 == 0)
    throw std::invalid_argument("cpmg_period: p must be a positive odd integer "
                                "(the filter has no even harmonics)");
  return 2.0 * kPi * p / (kRadPerNs * std::abs(pm.delta_mean));
}

double realized_rotation(const ModelParams& pm, int n_periods, int p) {
  if (p <= 0 || p % 2 == 0)
    throw std::invalid_argument("realized_rotation: p must be a positive odd integer");
  const double harmonic_sign = std::sin(p * kPi / 2.0); // +1 for p = 1 mod 4, -1 for 3 mod 4
  return 4.0 * harmonic_sign * pm.a_perp * n_periods / pm.delta_mean;
}

double angular_resolution(const ModelParams& pm) {
  return 4.0 * pm.a_perp / std::abs(pm.delta_mean);
}

double resonance_integral(double delta, double period_ns, int n_periods) {
  if (period_ns <= 0.0 || n_periods <= 0)
    throw std::invalid_argument("resonance_integral: need positive period and count");
  // F_x is constant on [mT, (m+1/4)T), [(m+1/4)T, (m+3/4)T), [(m+3/4)T, (m+1)T);
  // integrate cos exactly on each piece.
  double total = 0.0;
  for (int m = 0; m < n_periods; ++m) {
    const double t0 = m * period_ns;
    const double e1 = t0 + 0.25 * period_ns;
    const double e2 = t0 + 0.75 * period_ns;
    const double e3 = t0 + period_ns;
    auto seg = [delta](double a, double b) {
      if (delta == 0.0) return b - a;
      return (std::sin(delta * b) - std::sin(delta * a)) / delta;
    };
    total += seg(t0, e1) - seg(e1, e2) + seg(e2, e3);
  }
  return total;
}

Mat toggling_operator(char axis, double t_ns, const Schedule& s) {
  const Mat& sig = sigma_op(axis);
  if (s.kind != Schedule::Kind::Cpmg) return sig;
  // count pi_y pulses before t; each is exp(-i pi/2 sigma_y) = -i sigma_y
  long n = 0;
  for (long m = 0;; ++m) {
    bool any = false;
    for (double frac : {0.25, 0.75}) {
      if ((static_cast<double>(m) + frac) * s.period_ns <= t_ns) {
        ++n;
        any = true;
      }
    }
    if (!any) break;
  }
  Mat uc = Mat::Identity(2, 2);
  const Mat pulse = cd(0, -1) * sigma_op('y');
  for (long i = 0; i < n; ++i) uc = pulse * uc;
  return uc.adjoint() * sig * uc;
}

} // namespace vbsim
