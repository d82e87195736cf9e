#pragma once
#include <functional>
#include <vector>

#include "vbsim/pulse_control.hpp"

namespace vbsim {

struct EvolutionOptions {
  TermSelector selector = TermSelector::All;
  bool quadrupole = false;
  double step_ns = 0.0; // <= 0 selects default_step(pm)
};

// Default integration substep: 50 samples per period of the fastest
// coefficient oscillation, 2*pi / (50 * max_k |Sigma_k|) with Sigma_k in rad/ns.
double default_step(const ModelParams& pm);

struct EvolutionResult {
  std::vector<double> times;
  std::vector<Mat> unitaries;
  double step_ns = 0.0;          // substep bound actually used
  double unitarity_defect = 0.0; // ||U^dag U - 1||_F at the final snapshot
};

// Midpoint-exponential propagator for the time-dependent rotating-frame
// Hamiltonian: the integration interval is split at every requested snapshot
// time and every filter breakpoint, each span is divided into equal substeps
// no longer than step, and U accumulates exp(-i H(t_mid) h) per substep.
// Snapshots are returned for every requested time in (0, t_max] (and t = 0
// when requested). Snapshot times must be ascending.
EvolutionResult propagate(const ModelParams& pm, double t_max,
                          const std::vector<double>& snapshot_times,
                          const Schedule& sched, const EvolutionOptions& opt = {});

// Observer form of the same propagation: cb(t0, t1, U) after every substep,
// where U is the accumulated unitary at t1 and [t0, t1] the substep just taken.
void propagate_observe(const ModelParams& pm, double t_max, const Schedule& sched,
                       const EvolutionOptions& opt,
                       const std::function<void(double, double, const Mat&)>& cb);

// Frobenius distance between U(t_max) computed at the working step and at half
// the step; a cheap convergence estimate for the midpoint rule.
double convergence_estimate(const ModelParams& pm, double t_max, const Schedule& sched,
                            const EvolutionOptions& opt = {});

struct LindbladResult {
  Mat rho;
  double trace_drift = 0.0; // |Tr rho - Tr rho0| accumulated by the integrator
};

// Classic fixed-step RK4 for the master equation
//   drho/dt = -i[H(t), rho] + gamma (L rho L - rho),  L = sigma_z (x) 1,
// i.e. pure electron dephasing (L is Hermitian and L^2 = 1). Steps are
// segmented at the schedule breakpoints (a step straddling a filter flip
// would be first-order accurate); within a segment the step is span/ceil(
// span/step) and the filter triple is the segment's constant value. gamma is
// in 1/ns.
LindbladResult rk4_lindblad(const ModelParams& pm, const Mat& rho0, double t_max,
                            double gamma_per_ns, const Schedule& sched,
                            const EvolutionOptions& opt = {});

} // namespace vbsim
