#include "vbsim/evolution.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

namespace vbsim {

double default_step(const ModelParams& pm) {
  double smax = 0.0;
  for (double s : pm.sigma_k) smax = std::max(smax, kRadPerNs * std::abs(s));
  if (smax <= 0.0) throw std::invalid_argument("default_step: degenerate frame frequencies");
  return 2.0 * kPi / (50.0 * smax);
}

namespace {

struct EventList {
  std::vector<double> events; // ascending, in (0, t_max]
};

EventList build_events(const std::vector<double>& snapshot_times, const Schedule& sched,
                       double t_max) {
  std::set<double> ev(snapshot_times.begin(), snapshot_times.end());
  for (double b : sched.breakpoints(t_max)) ev.insert(b);
  EventList out;
  for (double e : ev)
    if (e > 0.0 && e <= t_max + 1e-12) out.events.push_back(e);
  return out;
}

} // namespace

void propagate_observe(const ModelParams& pm, double t_max, const Schedule& sched,
                       const EvolutionOptions& opt,
                       const std::function<void(double, double, const Mat&)>& cb) {
  const double step = opt.step_ns > 0.0 ? opt.step_ns : default_step(pm);
  EventList ev = build_events({t_max}, sched, t_max);
  Mat u = Mat::Identity(kDim, kDim);
  Mat h(kDim, kDim);
  double t0 = 0.0;
  for (double te : ev.events) {
    const double span = te - t0;
    const int nsub = std::max(1, static_cast<int>(std::ceil(span / step - 1e-12)));
    const double hstep = span / nsub;
    for (int i = 0; i < nsub; ++i) {
      const double tm = t0 + (i + 0.5) * hstep;
      rotating_hamiltonian_into(h, tm, pm, sched.filters(tm), opt.selector, opt.quadrupole);
      Eigen::SelfAdjointEigenSolver<Mat> es(h);
      const Eigen::VectorXd& w = es.eigenvalues();
      const Mat& v = es.eigenvectors();
      Vec phases(w.size());
      for (Eigen::Index j = 0; j < w.size(); ++j) phases(j) = std::exp(cd(0.0, -w(j) * hstep));
      u = v * phases.asDiagonal() * v.adjoint() * u;
      cb(t0 + i * hstep, t0 + (i + 1) * hstep, u);
    }
    t0 = te;
  }
}

EvolutionResult propagate(const ModelParams& pm, double t_max,
                          const std::vector<double>& snapshot_times,
                          const Schedule& sched, const EvolutionOptions& opt) {
  if (!std::is_sorted(snapshot_times.begin(), snapshot_times.end()))
    throw std::invalid_argument("propagate: snapshot times must be ascending");
  const double step = opt.step_ns > 0.0 ? opt.step_ns : default_step(pm);
  EvolutionResult res;
  res.step_ns = step;
  EventList ev = build_events(snapshot_times, sched, t_max);

  for (double g : snapshot_times)
    if (std::abs(g) < 1e-15) {
      res.times.push_back(0.0);
      res.unitaries.push_back(Mat::Identity(kDim, kDim));
    }

  Mat u = Mat::Identity(kDim, kDim);
  Mat h(kDim, kDim);
  double t0 = 0.0;
  auto next_snap = std::lower_bound(snapshot_times.begin(), snapshot_times.end(), 1e-15);
  for (double te : ev.events) {
    const double span = te - t0;
    const int nsub = std::max(1, static_cast<int>(std::ceil(span / step - 1e-12)));
    const double hstep = span / nsub;
    for (int i = 0; i < nsub; ++i) {
      const double tm = t0 + (i + 0.5) * hstep;
      rotating_hamiltonian_into(h, tm, pm, sched.filters(tm), opt.selector, opt.quadrupole);
      Eigen::SelfAdjointEigenSolver<Mat> es(h);
      const Eigen::VectorXd& w = es.eigenvalues();
      const Mat& v = es.eigenvectors();
      Vec phases(w.size());
      for (Eigen::Index j = 0; j < w.size(); ++j) phases(j) = std::exp(cd(0.0, -w(j) * hstep));
      u = v * phases.asDiagonal() * v.adjoint() * u;
    }
    t0 = te;
    while (next_snap != snapshot_times.end() && *next_snap <= te + 1e-12) {
      if (std::abs(*next_snap - te) < 1e-12) {
        res.times.push_back(*next_snap);
        res.unitaries.push_back(u);
      }
      ++next_snap;
    }
  }
  if (!res.unitaries.empty()) {
    const Mat& uf = res.unitaries.back();
    res.unitarity_defect = (uf.adjoint() * uf - Mat::Identity(kDim, kDim)).norm();
  }
  return res;
}

double convergence_estimate(const ModelParams& pm, double t_max, const Schedule& sched,
                            const EvolutionOptions& opt) {
  EvolutionOptions full = opt;
  if (full.step_ns <= 0.0) full.step_ns = default_step(pm);
  EvolutionOptions half = full;
  half.step_ns = full.step_ns / 2.0;
  const std::vector<double> snap{t_max};
  EvolutionResult a = propagate(pm, t_max, snap, sched, full);
  EvolutionResult b = propagate(pm, t_max, snap, sched, half);
  return (a.unitaries.back() - b.unitaries.back()).norm();
}

LindbladResult rk4_lindblad(const ModelParams& pm, const Mat& rho0, double t_max,
                            double gamma_per_ns, const Schedule& sched,
                            const EvolutionOptions& opt) {
  if (rho0.rows() != kDim || rho0.cols() != kDim)
    throw std::invalid_argument("rk4_lindblad: state must match the register dimension");
  const double step = opt.step_ns > 0.0 ? opt.step_ns : default_step(pm);
  // Segment at the schedule breakpoints like propagate does: an RK4 step that
  // straddles a filter flip would drop the method to first order locally.
  EventList ev = build_events({t_max}, sched, t_max);

  Mat h(kDim, kDim);
  // Filters are constant inside a segment; sampling at the segment midpoint
  // avoids picking up the post-flip value when a stage lands exactly on a
  // right-continuous breakpoint.
  FilterTriple seg_f{};
  // rhs = -i[H, rho] + gamma (L rho L - rho), L = sigma_z (x) 1: L rho L flips
  // the sign of the electron off-diagonal blocks, so build it by block signs.
  auto rhs = [&](double t, const Mat& rho, Mat& out) {
    rotating_hamiltonian_into(h, t, pm, seg_f, opt.selector, opt.quadrupole);
    out.noalias() = cd(0, -1) * (h * rho - rho * h);
    if (gamma_per_ns != 0.0) {
      const Eigen::Index n = kDim / 2;
      out.topRightCorner(n, n) -= 2.0 * gamma_per_ns * rho.topRightCorner(n, n);
      out.bottomLeftCorner(n, n) -= 2.0 * gamma_per_ns * rho.bottomLeftCorner(n, n);
    }
  };

  Mat rho = rho0;
  Mat k1(kDim, kDim), k2(kDim, kDim), k3(kDim, kDim), k4(kDim, kDim), tmp(kDim, kDim);
  const double tr0 = rho0.trace().real();
  double t0 = 0.0;
  for (double te : ev.events) {
    const double span = te - t0;
    const int nsub = std::max(1, static_cast<int>(std::ceil(span / step - 1e-12)));
    const double hstep = span / nsub;
    seg_f = sched.filters(t0 + 0.5 * span);
    for (int i = 0; i < nsub; ++i) {
      const double t = t0 + i * hstep;
      rhs(t, rho, k1);
      tmp = rho + (hstep / 2.0) * k1;
      rhs(t + hstep / 2.0, tmp, k2);
      tmp = rho + (hstep / 2.0) * k2;
      rhs(t + hstep / 2.0, tmp, k3);
      tmp = rho + hstep * k3;
      rhs(t + hstep, tmp, k4);
      rho += (hstep / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    t0 = te;
  }
  LindbladResult res;
  res.rho = std::move(rho);
  res.trace_drift = std::abs(res.rho.trace().real() - tr0);
  return res;
}

} // namespace vbsim
