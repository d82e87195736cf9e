#pragma once
#include <vector>

#include "vbsim/spin_model.hpp"

namespace vbsim {

// Pulse schedule seen by the rotating-frame Hamiltonian. Cpmg is the periodic
// two-pulse-per-period sequence of pi rotations about sigma_y at times
// (m+1/4)T and (m+3/4)T: F_y stays +1 while F_x = F_z form a square wave that
// is +1 on [0,T/4) and [3T/4,T) and -1 in between (right-continuous at the
// switch times). Constant holds user-supplied filter values, used mostly by
// tests to isolate single Hamiltonian terms.
struct Schedule {
  enum class Kind { Free, Cpmg, Constant };
  Kind kind = Kind::Free;
  double period_ns = 0.0;
  FilterTriple fixed{};

  static Schedule free();
  static Schedule cpmg(double period_ns);
  static Schedule constant(double fx, double fy, double fz);

  FilterTriple filters(double t_ns) const;
  // Filter switch times in (0, t_max), ascending.
  std::vector<double> breakpoints(double t_max) const;
};

// CPMG period locking the p-th harmonic of the filter to the mean detuning:
// T = 2*pi*p / |Delta|. p must be a positive odd integer; the even harmonics
// of this filter vanish, so even p is rejected (std::invalid_argument).
double cpmg_period(const ModelParams& pm, int p);

// Rotation angle accumulated by N periods at the p-th harmonic:
// phi = 4 sin(p*pi/2) * a_perp * N / Delta. p congruent to 3 mod 4 flips the
// sign, which realizes the inverse gate.
double realized_rotation(const ModelParams& pm, int n_periods, int p);

// Smallest rotation-angle increment per period, delta = 4*a_perp/|Delta|.
double angular_resolution(const ModelParams& pm);

// Exact piecewise integral of F_x(t)*cos(delta*t) over [0, N*T] for the CPMG
// filter (rad/ns argument). At delta = 2*pi*p/T this equals N*T*(2/(p*pi))*sin(p*pi/2).
double resonance_integral(double delta_rad_per_ns, double period_ns, int n_periods);

// Toggling-frame image of sigma_axis at time t under the ideal pulse train:
// U_c(t)^dag sigma_axis U_c(t) with U_c the product of instantaneous pi_y
// pulses before t. Equals F_axis(t) * sigma_axis for the CPMG filter.
Mat toggling_operator(char axis, double t_ns, const Schedule& s);

} // namespace vbsim
