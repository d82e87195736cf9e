// Acceptance harness: drives every scenario at its nominal operating point and
// checks the results against the target envelope (fidelity bands +-0.005,
// time anchors +-2 percent unless stated). Prints one PASS/FAIL line per
// criterion with measured-vs-required detail underneath; the exit code is the
// number of failed criteria, so 0 means fully green.

#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "vbsim/engine.hpp"

using namespace vbsim;
namespace fs = std::filesystem;

namespace {

std::string strf(const char* fmt, ...) {
  char buf[512];
  va_list ap;
  va_start(ap, fmt);
  vsnprintf(buf, sizeof(buf), fmt, ap);
  va_end(ap);
  return buf;
}

struct Criterion {
  std::string id;
  std::string name;
  bool pass = true;
  std::vector<std::string> lines;

  void check(bool ok, const std::string& detail) {
    pass = pass && ok;
    lines.push_back(std::string(ok ? "  [ok]   " : "  [FAIL] ") + detail);
  }
  void note(const std::string& detail) { lines.push_back("  [note] " + detail); }
};

std::vector<Criterion> g_criteria;

Criterion& begin(const std::string& id, const std::string& name) {
  g_criteria.push_back({id, name, true, {}});
  return g_criteria.back();
}

bool in_band(double x, double center, double half_width) {
  return std::abs(x - center) <= half_width;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

// ---------------------------------------------------------------------------

void criterion_x_gate(const GateTraceResult& x) {
  Criterion& c = begin("C1", "collective X gate point and region");
  const auto t0 = std::chrono::steady_clock::now();

  c.check(in_band(x.field_mT, 345.0, 0.01 * 345.0),
          strf("operating field %.6g mT vs 345 mT (+-1%%)", x.field_mT));
  c.check(std::abs(x.trace.reference_time - 40.43) <= 0.02 * 40.43,
          strf("gate time %.6g ns vs 40.43 ns (+-2%%)", x.trace.reference_time));
  c.check(x.trace.value_at_reference >= 0.9908 - 0.005,
          strf("fidelity at the gate time %.6g vs >= %.4g", x.trace.value_at_reference,
               0.9908 - 0.005));
  c.check(x.unitarity_defect < 1e-8,
          strf("propagator unitarity defect %.3g vs < 1e-8", x.unitarity_defect));

  // mini heatmap over N x p; the high-fidelity region must reach 0.98
  double best = 0.0;
  int best_n = 0, best_p = 0;
  for (int n : {10, 20, 50, 100})
    for (int p : {1, 3, 5, 7}) {
      Config cell;
      cell.n_periods = n;
      cell.p_harmonic = p;
      const GateTraceResult r = run_gate_x(cell);
      if (r.trace.max_value > best) {
        best = r.trace.max_value;
        best_n = n;
        best_p = p;
      }
    }
  c.check(best >= 0.98, strf("best heatmap cell %.6g at N=%d, p=%d vs >= 0.98", best, best_n, best_p));
  const double wall = seconds_since(t0);
  c.check(wall < 1800.0, strf("mini-sweep wall time %.1f s vs < 1800 s", wall));
}

void criterion_z_gate(const GateTraceResult& z500, const GateTraceResult& z700,
                      const GateTraceResult& z100) {
  Criterion& c = begin("C2", "Z gate from free evolution");
  c.check(in_band(z500.trace.value_at_reference, 0.9723, 0.005),
          strf("fidelity at pi/a_z, 500 mT: %.6g vs 0.9723 +- 0.005",
               z500.trace.value_at_reference));
  c.check(in_band(z700.trace.value_at_reference, 0.9882, 0.005),
          strf("fidelity at pi/a_z, 700 mT: %.6g vs 0.9882 +- 0.005",
               z700.trace.value_at_reference));
  c.check(z100.trace.max_value < 0.8,
          strf("trace maximum at 100 mT: %.6g vs < 0.8 (gate collapses off resonance)",
               z100.trace.max_value));

  const double grid_step = z500.trace.times[1] - z500.trace.times[0];
  const double off500 = std::abs(z500.trace.argmax_time - z500.trace.reference_time);
  const double off700 = std::abs(z700.trace.argmax_time - z700.trace.reference_time);
  c.check(off700 <= grid_step + 1e-9,
          strf("optimal time offset at 700 mT: %.4g ns vs <= one grid step (%.4g ns)", off700,
               grid_step));
  c.check(off500 <= grid_step + 1e-9,
          strf("optimal time offset at 500 mT: %.4g ns vs <= one grid step (%.4g ns)", off500,
               grid_step));
  if (off500 > grid_step + 1e-9)
    c.note(strf("at 500 mT the transverse hyperfine terms pull the optimum %.0f grid steps "
                "below pi/a_z (f there %.6g); the pi/a_z value itself is in band",
                off500 / grid_step, z500.trace.max_value));
}

void criterion_hadamard(const GateTraceResult& h) {
  Criterion& c = begin("C3", "collective Hadamard");
  c.check(in_band(h.trace.value_at_reference, 0.9991, 0.005),
          strf("fidelity at the gate time %.6g vs 0.9991 +- 0.005", h.trace.value_at_reference));
  c.check(std::abs(h.trace.reference_time - 20.21) <= 0.02 * 20.21,
          strf("gate time %.6g ns vs 20.21 ns (+-2%%)", h.trace.reference_time));
  c.check(std::abs(h.dev_az) <= 0.013,
          strf("optimal-time deviation %.4g vs <= 0.013 (units of 1/a_z)", h.dev_az));

  Config cfg; // default p_scan {1,3,5,7}
  const auto scan = run_hadamard_pscan(cfg);
  double f1 = 0, f3 = 0, f5 = 0, f7 = 0;
  for (const auto& pt : scan) {
    if (pt.p == 1) f1 = pt.f_max;
    if (pt.p == 3) f3 = pt.f_max;
    if (pt.p == 5) f5 = pt.f_max;
    if (pt.p == 7) f7 = pt.f_max;
  }
  c.check(f1 > f3 && f5 > f3 && f5 > f7,
          strf("p mod 4 alternation: f(1)=%.4g, f(3)=%.4g, f(5)=%.4g, f(7)=%.4g; "
               "p=1,5 must beat p=3,7",
               f1, f3, f5, f7));
}

void criterion_ghz(const GhzResult& g) {
  Criterion& c = begin("C4", "GHZ preparation by half rotation");
  c.check(in_band(g.f_opt[0], 0.9985, 0.005),
          strf("herald |0>: optimal fidelity %.6g vs 0.9985 +- 0.005", g.f_opt[0]));
  c.check(in_band(g.f_ref[0], 0.9963, 0.005),
          strf("herald |0>: fidelity at N*T %.6g vs 0.9963 +- 0.005", g.f_ref[0]));
  c.check(in_band(g.f_opt[1], 0.9984, 0.005),
          strf("herald |-1>: optimal fidelity %.6g vs 0.9984 +- 0.005", g.f_opt[1]));
  c.check(in_band(g.f_ref[1], 0.9955, 0.005),
          strf("herald |-1>: fidelity at N*T %.6g vs 0.9955 +- 0.005", g.f_ref[1]));
  c.check(in_band(g.dev_az[0], 0.1055, 0.05),
          strf("herald |0>: optimal-time deviation %.4g vs 0.1055 +- 0.05 (1/a_z)", g.dev_az[0]));
  c.check(in_band(g.dev_az[1], 0.1651, 0.05),
          strf("herald |-1>: optimal-time deviation %.4g vs 0.1651 +- 0.05 (1/a_z)", g.dev_az[1]));
  if (!in_band(g.dev_az[0], 0.1055, 0.05) || !in_band(g.dev_az[1], 0.1651, 0.05))
    c.note("the fidelity plateau near N*T is almost flat (range < 3e-3), so the argmax "
           "position is dominated by sub-grid ripple rather than a robust shift");
}

void criterion_dephasing(const DephasingResult& d) {
  Criterion& c = begin("C5", "electron dephasing sensitivity");
  auto eps = [&](char kind, double ginv) {
    for (const auto& r : d.gates)
      if (r.kind == kind && r.gamma_inv_us == ginv) return r.epsilon;
    return -1.0;
  };
  const double x2 = eps('x', 2.0), x4 = eps('x', 4.0);
  const double z2 = eps('z', 2.0), z4 = eps('z', 4.0);
  const double h2 = eps('h', 2.0), h4 = eps('h', 4.0);
  c.check(in_band(x2, 0.0164, 0.003),
          strf("X gate loss at 1/Gamma = 2 us: %.4g vs 0.0164 +- 0.003", x2));
  c.check(in_band(x4, 0.0083, 0.002),
          strf("X gate loss at 1/Gamma = 4 us: %.4g vs 0.0083 +- 0.002", x4));
  c.check(x2 > z2 && x2 > h2 && x4 > z4 && x4 > h4,
          strf("X exceeds Z and Hadamard at both rates: X %.4g/%.4g, Z %.4g/%.4g, H %.4g/%.4g",
               x2, x4, z2, z4, h2, h4));
  bool ghz_small = true;
  double worst = 0.0;
  for (const auto& r : d.ghz) {
    ghz_small = ghz_small && r.epsilon < 1e-3;
    worst = std::max(worst, r.epsilon);
  }
  c.check(ghz_small, strf("GHZ state losses all < 1e-3: worst %.4g", worst));
  if (!ghz_small)
    c.note("the heralded GHZ state keeps its electron coherence only during the "
           "preparation window, so its first-order loss tracks gamma*N*T (about "
           "0.8 percent at 2 us) rather than staying below 0.1 percent");
  c.check(d.max_trace_drift < 1e-6,
          strf("master-equation trace drift %.3g vs < 1e-6", d.max_trace_drift));
}

void criterion_quadrupole(const GateTraceResult& x, const GateTraceResult& z500,
                          const GateTraceResult& h, const GhzResult& g) {
  Criterion& c = begin("C6", "quadrupole sensitivity");
  Config qx, qz, qh, qg;
  qx.quadrupole = qz.quadrupole = qh.quadrupole = qg.quadrupole = true;
  const GateTraceResult xq = run_gate_x(qx);
  const GateTraceResult zq = run_gate_z_at_field(qz, 500.0);
  const GateTraceResult hq = run_hadamard(qh);
  const GhzResult gq = run_ghz(qg);

  auto rel = [](double a, double b) { return std::abs(a - b) / a; };
  const double rx = rel(x.trace.value_at_reference, xq.trace.value_at_reference);
  const double rz = rel(z500.trace.value_at_reference, zq.trace.value_at_reference);
  const double rh = rel(h.trace.value_at_reference, hq.trace.value_at_reference);
  c.check(rz < 0.0025, strf("Z gate fidelity shift %.4g vs < 0.0025 relative", rz));
  c.check(rh < 0.0025, strf("Hadamard fidelity shift %.4g vs < 0.0025 relative", rh));
  c.check(rx < 0.0025, strf("X gate fidelity shift %.4g vs < 0.0025 relative", rx));
  if (rx >= 0.0025)
    c.note("the X gate runs for two periods of the quadrupole phase (40 ns * Q/2pi in "
           "units of turns), so its shift lands just above the band");
  const double rg0 = rel(g.f_ref[0], gq.f_ref[0]);
  const double rg1 = rel(g.f_ref[1], gq.f_ref[1]);
  c.check(rg0 < 1.5e-4, strf("GHZ herald |0> fidelity shift %.4g vs < 1.5e-4 relative", rg0));
  c.check(rg1 < 1.5e-4, strf("GHZ herald |-1> fidelity shift %.4g vs < 1.5e-4 relative", rg1));
  if (rg0 >= 1.5e-4 || rg1 >= 1.5e-4)
    c.note("the prepared state is compared against the bare-frame target, so the "
           "quadrupole phase accumulated over N*T shows up in full instead of "
           "cancelling between target and state");
}

void criterion_properties(const GhzResult& g) {
  Criterion& c = begin("C7", "model-independent property suite");

  // ideal gate algebra
  const GateSpec gx = synchronous_gate('X');
  const GateSpec gz = synchronous_gate('Z');
  const GateSpec gh = synchronous_gate('H');
  const double ex = (Mat(entangling_gate('x', kPi / 2) * gx.domain) - gx.ideal).norm();
  const double ez = (Mat(entangling_gate('z', kPi) * gz.domain) - gz.ideal).norm();
  const double eh = (Mat(entangling_gate('x', kPi / 4) * gh.domain) - gh.ideal).norm();
  c.check(ex < 1e-12 && ez < 1e-12 && eh < 1e-12,
          strf("entangling rotations reproduce the X/Z/H targets: defects %.2g/%.2g/%.2g",
               ex, ez, eh));
  const Mat px = pair_x('y', 'z'), pz = pair_z('y', 'z'), ph = pair_h('y', 'z');
  const double e_h2 = (Mat(ph * ph) - Mat(cd(0, 1) * px)).norm();
  const double e_ac = Mat(pz * px + px * pz).norm();
  c.check(e_h2 < 1e-12 && e_ac < 1e-12,
          strf("H^2 = iX and ZX = -XZ on the pair subspace: defects %.2g/%.2g", e_h2, e_ac));

  // filter Fourier series
  {
    const double T = 4.0;
    const Schedule s = Schedule::cpmg(T);
    const int n_samples = 4096;
    double err2 = 0.0;
    for (int i = 0; i < n_samples; ++i) {
      const double t = (i + 0.5) * T / n_samples;
      double series = 0.0;
      for (int k = 1; k <= 2001; k += 2)
        series += 4.0 / (kPi * k) * ((k % 4 == 1) ? 1.0 : -1.0) * std::cos(2.0 * kPi * k * t / T);
      const double diff = series - s.filters(t).fx;
      err2 += diff * diff;
    }
    const double l2 = std::sqrt(err2 / n_samples);
    c.check(l2 < 0.05, strf("filter vs its Fourier series to k=2001: L2 error %.4g vs < 0.05", l2));
  }

  // Haar closed form vs Monte Carlo
  {
    const Mat e = synchronous_gate('X').ideal;
    const double exact = avg_gate_fidelity(e);
    double err = 0.0;
    const double mc = avg_gate_fidelity_mc(e, 20000, 2024, 1, &err);
    c.check(std::abs(mc - exact) <= 3.0 * err,
            strf("Monte-Carlo fidelity %.6g vs closed form %.6g within 3 sigma (%.2g)", mc, exact,
                 3.0 * err));
  }

  // integrator orders
  {
    const ModelParams pm(345.410521);
    const Schedule s = Schedule::free();
    EvolutionOptions o1, o2;
    o1.step_ns = 0.01;
    o2.step_ns = 0.005;
    const double e1 = convergence_estimate(pm, 4.0, s, o1);
    const double e2 = convergence_estimate(pm, 4.0, s, o2);
    c.check(e1 / e2 >= 3.5,
            strf("midpoint error reduction on halving: %.2fx vs >= 3.5x", e1 / e2));

    const Vec psi0 = Vec::Unit(kDim, 0) + Vec::Unit(kDim, 30);
    const Mat rho0 = Mat(0.5 * psi0 * psi0.adjoint());
    // Richardson self-convergence: a midpoint reference would contaminate the
    // ratio with its own O(h^2) error.
    auto rk4_rho = [&](double h) {
      EvolutionOptions o;
      o.step_ns = h;
      return rk4_lindblad(pm, rho0, 1.0, 1e-3, s, o).rho;
    };
    const Mat q1 = rk4_rho(0.01), q2 = rk4_rho(0.005), q3 = rk4_rho(0.0025);
    const double r1 = (q1 - q2).norm(), r2 = (q2 - q3).norm();
    c.check(r1 / r2 >= 12.0, strf("RK4 error reduction on halving: %.1fx vs >= 12x", r1 / r2));
  }

  // analytic pure-dephasing decay
  {
    const ModelParams pm(345.410521);
    const Schedule s = Schedule::constant(0.0, 0.0, 1.0);
    EvolutionOptions opt;
    opt.selector = TermSelector::Effective;
    opt.step_ns = 0.02;
    Vec psi0 = Vec::Zero(kDim);
    psi0[0] = psi0[27] = std::sqrt(0.5);
    const double gamma = 5e-4, t = 20.0;
    const LindbladResult lr =
        rk4_lindblad(pm, Mat(psi0 * psi0.adjoint()), t, gamma, s, opt);
    const double got = std::abs(lr.rho(0, 27));
    const double want = 0.5 * std::exp(-2.0 * gamma * t);
    c.check(std::abs(got - want) < 1e-6,
            strf("electron coherence %.8g vs exp(-2 gamma t) prediction %.8g (+-1e-6)", got, want));
  }

  c.check(g.herald_sum_defect < 1e-9,
          strf("herald probabilities sum to 1: worst defect %.3g vs < 1e-9", g.herald_sum_defect));
  c.check(g.ideal_fidelity_defect < 1e-12 && g.corrected_branch_defect < 1e-12,
          strf("ideal GHZ protocol and phase correction exact: defects %.2g/%.2g",
               g.ideal_fidelity_defect, g.corrected_branch_defect));
  c.check(g.write_read_overlap_defect < 1e-10 && g.write_read_factorization < 1e-10,
          strf("collective write/read round trip: overlap defect %.2g, factorization %.2g",
               g.write_read_overlap_defect, g.write_read_factorization));
}

void criterion_determinism() {
  Criterion& c = begin("C8", "deterministic and thread-invariant output");
  const fs::path base = fs::temp_directory_path() / "vbsim_acceptance";
  fs::remove_all(base);

  // Repeat runs reuse the same out_dir: the CSV header embeds the resolved
  // config, so different directories would differ in that one line.
  Config cfg;
  cfg.out_dir = (base / "const").string();
  std::string ca;
  for (int leg = 0; leg < 2; ++leg) {
    if (run_scenario("constants", cfg) != 0) {
      c.check(false, "constants scenario failed to run");
      return;
    }
    if (leg == 0) ca = slurp((base / "const" / "constants.csv").string());
  }
  const std::string cb = slurp((base / "const" / "constants.csv").string());
  c.check(!ca.empty() && ca == cb,
          strf("constants.csv byte-identical across runs (%zu bytes)", ca.size()));

  Config sw;
  sw.sweep_n_min = 2;
  sw.sweep_n_max = 3;
  sw.sweep_p = {1};
  sw.grid_samples = 40;
  sw.out_dir = (base / "sweep").string();
  const std::string sweep_file = (fs::path(sw.out_dir) / "sweep.csv").string();
  std::string sa;
  for (int leg = 0; leg < 2; ++leg) {
    if (run_scenario("sweep", sw) != 0) {
      c.check(false, "sweep scenario failed to run");
      return;
    }
    if (leg == 0) sa = slurp(sweep_file);
  }
  c.check(!sa.empty() && sa == slurp(sweep_file),
          strf("sweep.csv byte-identical across runs (%zu bytes)", sa.size()));

  const SweepResult serial = run_sweep_serial(sw);
  const SweepResult par = run_sweep(sw, 4);
  bool same = serial.cells.size() == par.cells.size();
  if (same)
    for (std::size_t i = 0; i < serial.cells.size(); ++i)
      same = same && serial.cells[i].f_max == par.cells[i].f_max &&
             serial.cells[i].t_opt == par.cells[i].t_opt && serial.cells[i].ok == par.cells[i].ok;
  c.check(same, "parallel sweep cells bitwise equal to the serial reference");

  const Mat e = synchronous_gate('X').ideal;
  c.check(avg_gate_fidelity_mc(e, 4096, 99, 1) == avg_gate_fidelity_mc(e, 4096, 99, 4),
          "Monte-Carlo fidelity bitwise equal for 1 and 4 threads");
  fs::remove_all(base);
}

} // namespace

int main() {
  std::printf("acceptance run, library version %s\n", kVersion);
  const auto t_all = std::chrono::steady_clock::now();

  // shared baseline runs (defaults: N = 50, p = 5, 600-sample grid)
  Config cfg;
  const auto t_point = std::chrono::steady_clock::now();
  const GateTraceResult x = run_gate_x(cfg);
  const double x_wall = seconds_since(t_point);

  const GateTraceResult z500 = run_gate_z_at_field(cfg, 500.0);
  const GateTraceResult z700 = run_gate_z_at_field(cfg, 700.0);
  const GateTraceResult z100 = run_gate_z_at_field(cfg, 100.0);
  const GateTraceResult h = run_hadamard(cfg);
  const GhzResult g = run_ghz(cfg);

  criterion_x_gate(x);
  g_criteria.back().check(x_wall < 120.0,
                          strf("single-point wall time %.1f s vs < 120 s", x_wall));
  criterion_z_gate(z500, z700, z100);
  criterion_hadamard(h);
  criterion_ghz(g);
  criterion_dephasing(run_dephasing(cfg));
  criterion_quadrupole(x, z500, h, g);
  criterion_properties(g);
  criterion_determinism();

  int failed = 0;
  std::printf("\n");
  for (const auto& c : g_criteria) {
    std::printf("%s %s: %s\n", c.id.c_str(), c.name.c_str(), c.pass ? "PASS" : "FAIL");
    for (const auto& l : c.lines) std::printf("%s\n", l.c_str());
    if (!c.pass) ++failed;
  }
  std::printf("\n%d of %zu criteria failed, total wall time %.1f s\n", failed, g_criteria.size(),
              seconds_since(t_all));
  return failed;
}
