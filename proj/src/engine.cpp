#include "vbsim/engine.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <limits>
#include <map>
#include <set>
#include <stdexcept>

#include "vbsim/gates.hpp"
#include "vbsim/linalg.hpp"
#include "vbsim/pulse_control.hpp"
#include "vbsim/spin_model.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace vbsim {

namespace fs = std::filesystem;

std::vector<double> uniform_grid(double t_ref, int n, double factor) {
  if (!(t_ref > 0) || n < 2 || factor < 1.0)
    throw std::invalid_argument("uniform_grid: need t_ref > 0, n >= 2, factor >= 1");
  std::vector<double> g;
  g.reserve(static_cast<std::size_t>(n) + 1);
  const double dt = factor * t_ref / n;
  for (int k = 1; k <= n; ++k) g.push_back(k == n ? factor * t_ref : k * dt);
  if (std::find(g.begin(), g.end(), t_ref) == g.end()) g.push_back(t_ref);
  std::sort(g.begin(), g.end());
  g.erase(std::unique(g.begin(), g.end()), g.end());
  return g;
}

double axial_rate() {
  double azz = 0.0;
  for (const auto& tensor : kHyperfine) azz += tensor[2][2];
  return kRadPerNs * azz / 6.0; // mean of A_k^zz / 2, in rad/ns
}

namespace {

EvolutionOptions options_from(const Config& cfg) {
  EvolutionOptions opt;
  opt.selector = term_selector_from_string(cfg.terms);
  opt.quadrupole = cfg.quadrupole;
  opt.step_ns = cfg.step_ns;
  return opt;
}

// Shared driver for the gate scenarios: propagate over the sample grid and
// score every snapshot against the ideal gate restricted to its domain.
GateTraceResult run_gate_trace(const Config& cfg, const ModelParams& pm, const Schedule& sched,
                               double t_ref, const GateSpec& spec, int n_periods, int p_harmonic,
                               double period_ns) {
  const EvolutionOptions opt = options_from(cfg);
  const std::vector<double> grid = uniform_grid(t_ref, cfg.grid_samples, cfg.grid_factor);
  const EvolutionResult ev = propagate(pm, grid.back(), grid, sched, opt);

  const Mat vdag = spec.ideal.adjoint();
  const double denom = avg_gate_fidelity(vdag * spec.ideal);

  GateTraceResult r;
  r.trace.reference_time = t_ref;
  r.trace.times = ev.times;
  r.trace.values.reserve(ev.unitaries.size());
  for (const Mat& u : ev.unitaries)
    r.trace.values.push_back(avg_gate_fidelity(vdag * u * spec.domain) / denom);
  finalize_trace(r.trace);
  r.field_mT = pm.field_mT;
  r.period_ns = period_ns;
  r.step_ns = ev.step_ns;
  r.n_periods = n_periods;
  r.p_harmonic = p_harmonic;
  r.dev_az = (r.trace.argmax_time - t_ref) * axial_rate();
  r.unitarity_defect = ev.unitarity_defect;
  return r;
}

} // namespace

GateTraceResult run_gate_x(const Config& cfg) {
  const double b = cfg.field_mT > 0 ? cfg.field_mT : synchronous_field(cfg.phi, cfg.n_periods);
  const ModelParams pm(b);
  const double period = cpmg_period(pm, cfg.p_harmonic);
  const double t_ref = cfg.n_periods * period;
  return run_gate_trace(cfg, pm, Schedule::cpmg(period), t_ref, synchronous_gate('X'),
                        cfg.n_periods, cfg.p_harmonic, period);
}

GateTraceResult run_gate_z_at_field(const Config& cfg, double field_mT) {
  const ModelParams pm(field_mT);
  const double t_ref = kPi / axial_rate();
  return run_gate_trace(cfg, pm, Schedule::free(), t_ref, synchronous_gate('Z'), 0, 0, 0.0);
}

std::vector<GateTraceResult> run_gate_z(const Config& cfg) {
  std::vector<GateTraceResult> out;
  out.reserve(cfg.fields_mT.size());
  for (double b : cfg.fields_mT) out.push_back(run_gate_z_at_field(cfg, b));
  return out;
}

GateTraceResult run_hadamard(const Config& cfg) {
  // the Hadamard runs at the quarter-angle synchronization field
  const double b = cfg.field_mT > 0 ? cfg.field_mT : synchronous_field(kPi / 4, cfg.n_periods);
  const ModelParams pm(b);
  const double period = cpmg_period(pm, cfg.p_harmonic);
  const double t_ref = cfg.n_periods * period;
  return run_gate_trace(cfg, pm, Schedule::cpmg(period), t_ref, synchronous_gate('H'),
                        cfg.n_periods, cfg.p_harmonic, period);
}

std::vector<PScanPoint> run_hadamard_pscan(const Config& cfg) {
  std::vector<PScanPoint> out;
  out.reserve(cfg.p_scan.size());
  for (int p : cfg.p_scan) {
    Config c = cfg;
    c.p_harmonic = p;
    const GateTraceResult r = run_hadamard(c);
    out.push_back({p, r.trace.max_value, r.trace.argmax_time});
  }
  return out;
}

GhzResult run_ghz(const Config& cfg) {
  const double b = cfg.field_mT > 0 ? cfg.field_mT : synchronous_field(cfg.phi, cfg.n_periods);
  const ModelParams pm(b);
  const double period = cpmg_period(pm, cfg.p_harmonic);
  const double t_ref = cfg.n_periods * period;
  const EvolutionOptions opt = options_from(cfg);
  const std::vector<double> grid = uniform_grid(t_ref, cfg.grid_samples, cfg.grid_factor);
  const EvolutionResult ev = propagate(pm, grid.back(), grid, Schedule::cpmg(period), opt);

  const Vec psi0 = ghz_initial_state(cfg.m_i);
  const std::array<Vec, 2> targets = {ghz_target(0.0, cfg.m_i), ghz_target(kPi, cfg.m_i)};

  GhzResult res;
  res.times = ev.times;
  res.t_ref = t_ref;
  res.field_mT = b;
  res.period_ns = period;
  res.step_ns = ev.step_ns;
  res.unitarity_defect = ev.unitarity_defect;
  for (int h = 0; h < 2; ++h) {
    res.fidelity[h].reserve(ev.times.size());
    res.herald_prob[h].reserve(ev.times.size());
  }
  for (const Mat& u : ev.unitaries) {
    const Vec psi = u * psi0;
    double psum = 0.0;
    for (int h = 0; h < 2; ++h) {
      const Vec branch = psi.segment(h * kNuclearDim, kNuclearDim);
      const double pr = branch.squaredNorm();
      psum += pr;
      const double amp = std::abs(targets[h].dot(branch));
      res.herald_prob[h].push_back(pr);
      res.fidelity[h].push_back(pr > 0 ? amp / std::sqrt(pr) : 0.0);
    }
    res.herald_sum_defect = std::max(res.herald_sum_defect, std::abs(psum - 1.0));
  }

  for (int h = 0; h < 2; ++h) {
    const std::size_t imax = trace_maximum(res.fidelity[h]);
    res.f_opt[h] = res.fidelity[h][imax];
    res.t_opt[h] = res.times[imax];
    res.dev_az[h] = (res.t_opt[h] - t_ref) * axial_rate();
    bool found = false;
    for (std::size_t i = 0; i < res.times.size(); ++i) {
      if (std::abs(res.times[i] - t_ref) < 1e-9) {
        res.f_ref[h] = res.fidelity[h][i];
        res.p_ref[h] = res.herald_prob[h][i];
        found = true;
        break;
      }
    }
    if (!found) throw std::runtime_error("ghz: reference time missing from the sample grid");
  }

  // ideal-protocol checks: the exact entangler must reproduce the targets, the
  // electron pulse must fold herald |-1> onto the herald |0> state, and the
  // write/read pair must hand the stored qubit back
  {
    const Mat ideal = entangling_gate('x', kPi / 2);
    const auto outcomes = ghz_protocol(ideal, cfg.m_i);
    for (const auto& oc : outcomes) {
      const double fid =
          oc.probability > 0
              ? std::sqrt(std::max(
                    0.0, (targets[oc.herald].adjoint() * oc.nuclear * targets[oc.herald])(0).real() /
                             oc.probability))
              : 0.0;
      res.ideal_fidelity_defect = std::max(res.ideal_fidelity_defect,
                                           std::abs(oc.probability - 0.5));
      res.ideal_fidelity_defect = std::max(res.ideal_fidelity_defect, std::abs(fid - 1.0));
    }

    Vec branch1 = (ideal * ghz_initial_state(cfg.m_i)).tail(kNuclearDim);
    Vec lifted = Vec::Zero(kDim);
    lifted.tail(kNuclearDim) = branch1;
    const Vec corrected = ghz_phase_correction() * lifted;
    Vec target0 = Vec::Zero(kDim);
    target0.head(kNuclearDim) = targets[0];
    res.corrected_branch_defect =
        1.0 - std::abs(target0.dot(corrected)) / corrected.norm();

    if (cfg.write_read_check) {
      const cd alpha = std::cos(0.4);
      const cd beta = std::sin(0.4) * std::exp(cd(0, 0.9));
      const auto written = collective_write(alpha, beta, cfg.m_i);
      for (const auto& wr : written) {
        const ReadOutcome rd = collective_read(wr.nuclear, cfg.m_i);
        res.write_read_overlap_defect =
            std::max(res.write_read_overlap_defect, std::abs(1.0 - rd.overlap));
        res.write_read_factorization =
            std::max(res.write_read_factorization, rd.factorization_error);
      }
    }
  }
  return res;
}

namespace {

struct DephasingSetup {
  ModelParams pm;
  Schedule sched;
  double duration = 0.0;
  Mat target;
  Mat domain;
};

DephasingSetup dephasing_setup(char kind, const Config& cfg) {
  switch (kind) {
    case 'x': {
      const double b = cfg.field_mT > 0 ? cfg.field_mT : synchronous_field(kPi / 2, cfg.n_periods);
      ModelParams pm(b);
      const double period = cpmg_period(pm, cfg.p_harmonic);
      const GateSpec spec = synchronous_gate('X');
      return {pm, Schedule::cpmg(period), cfg.n_periods * period, spec.ideal, spec.domain};
    }
    case 'z': {
      // free evolution; a fixed mid-range field unless one is configured
      const double b = cfg.field_mT > 0 ? cfg.field_mT : 500.0;
      ModelParams pm(b);
      const GateSpec spec = synchronous_gate('Z');
      return {pm, Schedule::free(), kPi / axial_rate(), spec.ideal, spec.domain};
    }
    case 'h': {
      const double b = cfg.field_mT > 0 ? cfg.field_mT : synchronous_field(kPi / 4, cfg.n_periods);
      ModelParams pm(b);
      const double period = cpmg_period(pm, cfg.p_harmonic);
      const GateSpec spec = synchronous_gate('H');
      return {pm, Schedule::cpmg(period), cfg.n_periods * period, spec.ideal, spec.domain};
    }
    default:
      throw std::invalid_argument("gate_dephasing_coefficient: kind must be 'x', 'z' or 'h'");
  }
}

} // namespace

double gate_dephasing_coefficient(char kind, const Config& cfg) {
  const DephasingSetup s = dephasing_setup(kind, cfg);
  const EvolutionOptions opt = options_from(cfg);

  // final-time unitary first; the jump operator enters through A_t = U_t^dag L U_t
  const EvolutionResult ev = propagate(s.pm, s.duration, {s.duration}, s.sched, opt);
  const Mat& u_final = ev.unitaries.back();
  const Mat vdag = s.target.adjoint();
  const Mat gp = s.domain * vdag * u_final;        // tau_t = |Tr(gp A_t)|
  const Mat w = u_final.adjoint() * s.target * vdag * u_final; // s_t = Tr(w A_t P A_t^dag)

  const double tau0 = std::abs((vdag * u_final * s.domain).trace());
  const double s0 = (w * s.domain).trace().real();
  const double base = tau0 * tau0 + s0;
  if (base <= 0) throw std::runtime_error("gate_dephasing_coefficient: degenerate target");

  double integral = 0.0;
  propagate_observe(s.pm, s.duration, s.sched, opt,
                    [&](double t0, double t1, const Mat& u) {
                      // L = sigma_z (x) 1: L u just flips the sign of the lower block
                      Mat lu = u;
                      lu.bottomRows(kNuclearDim) *= -1.0;
                      const Mat a = u.adjoint() * lu;
                      const double tau = std::abs(gp.transpose().cwiseProduct(a).sum());
                      const Mat wap = w * (a * s.domain);
                      const double st = wap.cwiseProduct(a.conjugate()).sum().real();
                      integral += (t1 - t0) * (tau * tau + st);
                    });

  return (s.duration * base - integral) / base;
}

DephasingResult run_dephasing(const Config& cfg) {
  DephasingResult res;

  const char kinds[3] = {'x', 'z', 'h'};
  for (int i = 0; i < 3; ++i) res.coefficient_ns[i] = gate_dephasing_coefficient(kinds[i], cfg);
  for (int i = 0; i < 3; ++i)
    for (double ginv : cfg.gamma_inv_us) {
      const double gamma = 1.0 / (ginv * 1000.0); // us -> ns
      res.gates.push_back({kinds[i], ginv, gamma * res.coefficient_ns[i]});
    }

  // GHZ branch fidelities under the full master equation at the reference time
  const double b = cfg.field_mT > 0 ? cfg.field_mT : synchronous_field(kPi / 2, cfg.n_periods);
  const ModelParams pm(b);
  const double period = cpmg_period(pm, cfg.p_harmonic);
  const double t_ref = cfg.n_periods * period;
  const EvolutionOptions opt = options_from(cfg);
  const Schedule sched = Schedule::cpmg(period);
  const Vec psi0 = ghz_initial_state(cfg.m_i);
  const Mat rho0 = psi0 * psi0.adjoint();
  const std::array<Vec, 2> targets = {ghz_target(0.0, cfg.m_i), ghz_target(kPi, cfg.m_i)};

  auto branch_fidelities = [&](const Mat& rho) {
    std::array<double, 2> f{};
    const auto heralds = heralded_states(rho);
    for (int h = 0; h < 2; ++h) f[h] = state_fidelity_pure(targets[h], heralds[h].nuclear);
    return f;
  };

  const LindbladResult ref = rk4_lindblad(pm, rho0, t_ref, 0.0, sched, opt);
  res.max_trace_drift = ref.trace_drift;
  const std::array<double, 2> f_ref = branch_fidelities(ref.rho);

  for (double ginv : cfg.gamma_inv_us) {
    const double gamma = 1.0 / (ginv * 1000.0);
    const LindbladResult noisy = rk4_lindblad(pm, rho0, t_ref, gamma, sched, opt);
    res.max_trace_drift = std::max(res.max_trace_drift, noisy.trace_drift);
    const std::array<double, 2> f_noisy = branch_fidelities(noisy.rho);
    for (int h = 0; h < 2; ++h)
      res.ghz.push_back({h, ginv, (f_ref[h] - f_noisy[h]) / f_ref[h], f_ref[h], f_noisy[h]});
  }
  return res;
}

namespace {

SweepCell compute_sweep_cell(const Config& cfg, int n, int p) {
  SweepCell cell;
  cell.n_periods = n;
  cell.p_harmonic = p;
  try {
    Config c = cfg;
    c.n_periods = n;
    c.p_harmonic = p;
    c.field_mT = cfg.field_mT; // 0 selects the synchronization field per N
    const GateTraceResult r = run_gate_x(c);
    cell.field_mT = r.field_mT;
    cell.f_max = r.trace.max_value;
    cell.t_opt = r.trace.argmax_time;
    cell.t_ref = r.trace.reference_time;
    cell.ok = true;
  } catch (const std::exception&) {
    // missing-value sentinel; the sweep carries on
    cell.field_mT = std::numeric_limits<double>::quiet_NaN();
    cell.f_max = std::numeric_limits<double>::quiet_NaN();
    cell.t_opt = std::numeric_limits<double>::quiet_NaN();
    cell.t_ref = std::numeric_limits<double>::quiet_NaN();
    cell.ok = false;
  }
  return cell;
}

SweepResult sweep_frame(const Config& cfg) {
  SweepResult res;
  for (int n = cfg.sweep_n_min; n <= cfg.sweep_n_max; ++n) res.n_values.push_back(n);
  res.p_values = cfg.sweep_p;
  res.cells.resize(res.n_values.size() * res.p_values.size());
  return res;
}

} // namespace

SweepResult run_sweep(const Config& cfg, int jobs) {
  SweepResult res = sweep_frame(cfg);
  const int total = static_cast<int>(res.cells.size());
  const int nn = static_cast<int>(res.n_values.size());
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic) num_threads(std::max(1, jobs))
#endif
  for (int idx = 0; idx < total; ++idx) {
    const int row = idx / nn, col = idx % nn;
    res.cells[static_cast<std::size_t>(idx)] =
        compute_sweep_cell(cfg, res.n_values[static_cast<std::size_t>(col)],
                           res.p_values[static_cast<std::size_t>(row)]);
  }
#ifndef _OPENMP
  (void)jobs;
#endif
  return res;
}

SweepResult run_sweep_serial(const Config& cfg) {
  SweepResult res = sweep_frame(cfg);
  const int nn = static_cast<int>(res.n_values.size());
  for (int idx = 0; idx < static_cast<int>(res.cells.size()); ++idx) {
    const int row = idx / nn, col = idx % nn;
    res.cells[static_cast<std::size_t>(idx)] =
        compute_sweep_cell(cfg, res.n_values[static_cast<std::size_t>(col)],
                           res.p_values[static_cast<std::size_t>(row)]);
  }
  return res;
}

// --- scenario writers ---------------------------------------------------------

namespace {

constexpr double kUnitarityLimit = 1e-8;
constexpr double kTraceDriftLimit = 1e-6;

std::string join_path(const std::string& dir, const std::string& name) {
  return (fs::path(dir) / name).string();
}

void emit(const std::string& path, const std::string& content,
          std::vector<std::string>* files) {
  write_text_file(path, content);
  if (files) files->push_back(path);
}

void write_trace_rows(CsvWriter& w, const std::vector<double>& times,
                      const std::vector<double>& values, const std::string& label) {
  for (std::size_t i = 0; i < times.size(); ++i)
    w.add_row({CsvWriter::num(times[i]), CsvWriter::num(values[i]), label});
}

std::vector<std::string> gate_summary_columns() {
  return {"label",    "field_mT", "period_ns", "t_ref_ns",        "f_ref",
          "t_opt_ns", "f_max",    "dev_az",    "n_periods",       "p_harmonic",
          "step_ns",  "unitarity_defect"};
}

void add_gate_summary_row(CsvWriter& w, const std::string& label, const GateTraceResult& r) {
  w.add_row({label, CsvWriter::num(r.field_mT), CsvWriter::num(r.period_ns),
             CsvWriter::num(r.trace.reference_time), CsvWriter::num(r.trace.value_at_reference),
             CsvWriter::num(r.trace.argmax_time), CsvWriter::num(r.trace.max_value),
             CsvWriter::num(r.dev_az), CsvWriter::num(r.n_periods),
             CsvWriter::num(r.p_harmonic), CsvWriter::num(r.step_ns),
             CsvWriter::num(r.unitarity_defect)});
}

int finish_gate_scenario(const std::string& name, const Config& cfg,
                         const std::vector<std::pair<std::string, GateTraceResult>>& runs,
                         std::vector<std::string>* files) {
  CsvWriter trace({"time_ns", "fidelity", "label"});
  trace.add_standard_headers(cfg.scenario, cfg);
  CsvWriter summary(gate_summary_columns());
  summary.add_standard_headers(cfg.scenario, cfg);
  for (const auto& [label, r] : runs) {
    write_trace_rows(trace, r.trace.times, r.trace.values, label);
    add_gate_summary_row(summary, label, r);
  }
  emit(join_path(cfg.out_dir, name + ".csv"), trace.str(), files);
  emit(join_path(cfg.out_dir, name + "_summary.csv"), summary.str(), files);

  if (cfg.svg) {
    std::vector<Series> series;
    for (const auto& [label, r] : runs) series.push_back({label, r.trace.times, r.trace.values});
    emit(join_path(cfg.out_dir, name + ".svg"),
         svg_lines(name, "time_ns", "relative average gate fidelity", series), files);
  }

  for (const auto& [label, r] : runs)
    if (r.unitarity_defect > kUnitarityLimit) {
      std::fprintf(stderr, "convergence failure (%s): unitarity defect %.3g exceeds %.1g\n",
                   label.c_str(), r.unitarity_defect, kUnitarityLimit);
      return 3;
    }
  return 0;
}

int scenario_constants(const Config& cfg, std::vector<std::string>* files) {
  CsvWriter w({"n_periods", "field_mT", "omega0", "delta_mean", "delta_spread", "sigma_1",
               "sigma_2", "sigma_3", "a_z", "a_perp"});
  w.add_standard_headers(cfg.scenario, cfg);
  for (int n = 10; n <= 200; n += 10) {
    const double b = synchronous_field(kPi / 2, n);
    const ModelParams pm(b);
    double spread = 0.0;
    for (double d : pm.delta_k) spread = std::max(spread, std::abs(d - pm.delta_mean));
    w.add_numeric_row({static_cast<double>(n), b, pm.omega0, pm.delta_mean, spread,
                       pm.sigma_k[0], pm.sigma_k[1], pm.sigma_k[2], pm.a_z, pm.a_perp});
  }
  emit(join_path(cfg.out_dir, "constants.csv"), w.str(), files);
  return 0;
}

int scenario_gate_x(const Config& cfg, std::vector<std::string>* files) {
  const GateTraceResult r = run_gate_x(cfg);
  return finish_gate_scenario("gate_x", cfg, {{"X_yz", r}}, files);
}

int scenario_gate_z(const Config& cfg, std::vector<std::string>* files) {
  std::vector<std::pair<std::string, GateTraceResult>> runs;
  for (double b : cfg.fields_mT) {
    char label[48];
    std::snprintf(label, sizeof label, "B=%.9gmT", b);
    runs.emplace_back(label, run_gate_z_at_field(cfg, b));
  }
  return finish_gate_scenario("gate_z", cfg, runs, files);
}

int scenario_hadamard(const Config& cfg, std::vector<std::string>* files) {
  const GateTraceResult r = run_hadamard(cfg);
  const int code = finish_gate_scenario("hadamard", cfg, {{"H_yz", r}}, files);

  CsvWriter scan({"p_harmonic", "f_max", "t_opt_ns"});
  scan.add_standard_headers(cfg.scenario, cfg);
  for (const PScanPoint& pt : run_hadamard_pscan(cfg))
    scan.add_numeric_row({static_cast<double>(pt.p), pt.f_max, pt.t_opt});
  emit(join_path(cfg.out_dir, "hadamard_pscan.csv"), scan.str(), files);
  return code;
}

int scenario_ghz(const Config& cfg, std::vector<std::string>* files) {
  const GhzResult r = run_ghz(cfg);
  const char* labels[2] = {"herald_0", "herald_-1"};

  CsvWriter trace({"time_ns", "value", "label"});
  trace.add_standard_headers(cfg.scenario, cfg);
  for (int h = 0; h < 2; ++h)
    write_trace_rows(trace, r.times, r.fidelity[h], std::string("fidelity_") + labels[h]);
  for (int h = 0; h < 2; ++h)
    write_trace_rows(trace, r.times, r.herald_prob[h], std::string("prob_") + labels[h]);
  emit(join_path(cfg.out_dir, "ghz.csv"), trace.str(), files);

  CsvWriter summary({"herald", "probability_ref", "f_ref", "f_opt", "t_opt_ns", "t_ref_ns",
                     "dev_az", "field_mT", "period_ns", "step_ns"});
  summary.add_standard_headers(cfg.scenario, cfg);
  for (int h = 0; h < 2; ++h)
    summary.add_row({labels[h], CsvWriter::num(r.p_ref[h]), CsvWriter::num(r.f_ref[h]),
                     CsvWriter::num(r.f_opt[h]), CsvWriter::num(r.t_opt[h]),
                     CsvWriter::num(r.t_ref), CsvWriter::num(r.dev_az[h]),
                     CsvWriter::num(r.field_mT), CsvWriter::num(r.period_ns),
                     CsvWriter::num(r.step_ns)});
  emit(join_path(cfg.out_dir, "ghz_summary.csv"), summary.str(), files);

  CsvWriter checks({"herald_sum_defect", "ideal_fidelity_defect", "corrected_branch_defect",
                    "write_read_overlap_defect", "write_read_factorization",
                    "unitarity_defect"});
  checks.add_standard_headers(cfg.scenario, cfg);
  checks.add_numeric_row({r.herald_sum_defect, r.ideal_fidelity_defect,
                          r.corrected_branch_defect, r.write_read_overlap_defect,
                          r.write_read_factorization, r.unitarity_defect});
  emit(join_path(cfg.out_dir, "ghz_checks.csv"), checks.str(), files);

  if (cfg.svg) {
    std::vector<Series> series;
    for (int h = 0; h < 2; ++h)
      series.push_back({std::string("fidelity_") + labels[h], r.times, r.fidelity[h]});
    emit(join_path(cfg.out_dir, "ghz.svg"),
         svg_lines("ghz", "time_ns", "branch state fidelity", series), files);
  }

  if (r.unitarity_defect > kUnitarityLimit) {
    std::fprintf(stderr, "convergence failure (ghz): unitarity defect %.3g exceeds %.1g\n",
                 r.unitarity_defect, kUnitarityLimit);
    return 3;
  }
  return 0;
}

int scenario_dephasing(const Config& cfg, std::vector<std::string>* files) {
  const DephasingResult r = run_dephasing(cfg);

  CsvWriter gates({"gate", "gamma_inv_us", "epsilon", "coefficient_ns"});
  gates.add_standard_headers(cfg.scenario, cfg);
  for (const auto& row : r.gates) {
    const int ci = row.kind == 'x' ? 0 : row.kind == 'z' ? 1 : 2;
    gates.add_row({std::string(1, row.kind), CsvWriter::num(row.gamma_inv_us),
                   CsvWriter::num(row.epsilon), CsvWriter::num(r.coefficient_ns[ci])});
  }
  emit(join_path(cfg.out_dir, "dephasing_gates.csv"), gates.str(), files);

  CsvWriter ghz({"herald", "gamma_inv_us", "fidelity_ref", "fidelity_noisy", "epsilon"});
  ghz.add_standard_headers(cfg.scenario, cfg);
  for (const auto& row : r.ghz)
    ghz.add_row({row.herald == 0 ? "herald_0" : "herald_-1", CsvWriter::num(row.gamma_inv_us),
                 CsvWriter::num(row.fidelity_ref), CsvWriter::num(row.fidelity_noisy),
                 CsvWriter::num(row.epsilon)});
  emit(join_path(cfg.out_dir, "dephasing_ghz.csv"), ghz.str(), files);

  if (r.max_trace_drift > kTraceDriftLimit) {
    std::fprintf(stderr, "convergence failure (dephasing): trace drift %.3g exceeds %.1g\n",
                 r.max_trace_drift, kTraceDriftLimit);
    return 3;
  }
  return 0;
}

int scenario_sweep(const Config& cfg, std::vector<std::string>* files) {
  const SweepResult r = run_sweep(cfg, cfg.jobs);
  CsvWriter w({"p_harmonic", "n_periods", "field_mT", "f_max", "t_opt_ns", "t_ref_ns", "ok"});
  w.add_standard_headers(cfg.scenario, cfg);
  const std::size_t nn = r.n_values.size();
  for (const SweepCell& c : r.cells)
    w.add_row({CsvWriter::num(c.p_harmonic), CsvWriter::num(c.n_periods),
               CsvWriter::num(c.field_mT), CsvWriter::num(c.f_max), CsvWriter::num(c.t_opt),
               CsvWriter::num(c.t_ref), c.ok ? "1" : "0"});
  emit(join_path(cfg.out_dir, "sweep.csv"), w.str(), files);

  if (cfg.svg) {
    Heatmap hm;
    hm.title = "sweep";
    hm.row_label = "p_harmonic";
    hm.col_label = "n_periods";
    for (int p : r.p_values) hm.row_ticks.push_back(p);
    for (int n : r.n_values) hm.col_ticks.push_back(n);
    hm.cells.resize(r.p_values.size(), std::vector<double>(nn));
    for (std::size_t i = 0; i < r.cells.size(); ++i)
      hm.cells[i / nn][i % nn] = r.cells[i].f_max;
    emit(join_path(cfg.out_dir, "sweep.svg"), svg_heatmap(hm), files);
  }

  bool all_failed = !r.cells.empty();
  for (const SweepCell& c : r.cells)
    if (c.ok) { all_failed = false; break; }
  if (all_failed) {
    std::fprintf(stderr, "sweep: every cell failed\n");
    return 3;
  }
  return 0;
}

int scenario_render(const Config& cfg, std::vector<std::string>* files) {
  if (cfg.input_csv.empty()) {
    std::fprintf(stderr, "config field 'input_csv': required for render\n");
    return 2;
  }
  const CsvData data = read_csv(cfg.input_csv);
  std::string out = cfg.output_svg;
  if (out.empty()) {
    fs::path p(cfg.input_csv);
    p.replace_extension(".svg");
    out = p.string();
  }
  const std::string title = fs::path(cfg.input_csv).stem().string();

  if (cfg.plot_kind == "lines") {
    std::vector<Series> series;
    if (!data.rows.empty()) {
      if (data.columns.size() < 2) {
        std::fprintf(stderr, "render: lines needs at least two columns\n");
        return 3;
      }
      const bool labeled = data.columns.size() >= 3;
      std::map<std::string, std::size_t> index;
      for (std::size_t i = 0; i < data.rows.size(); ++i) {
        if (data.rows[i].size() < 2) continue;
        const std::string key =
            labeled && data.raw[i].size() > 2 ? data.raw[i][2] : data.columns[1];
        auto it = index.find(key);
        if (it == index.end()) {
          it = index.emplace(key, series.size()).first;
          series.push_back({key, {}, {}});
        }
        series[it->second].x.push_back(data.rows[i][0]);
        series[it->second].y.push_back(data.rows[i][1]);
      }
    }
    emit(out, svg_lines(title, data.columns.size() > 0 ? data.columns[0] : "",
                        data.columns.size() > 1 ? data.columns[1] : "", series),
         files);
    return 0;
  }

  // heatmap: pivot (row key, column key, value)
  std::size_t ri = 0, ci = 1, vi = 2;
  const auto named = [&](const std::string& name) {
    return std::find(data.columns.begin(), data.columns.end(), name) - data.columns.begin();
  };
  if (named("p_harmonic") < static_cast<std::ptrdiff_t>(data.columns.size()) &&
      named("n_periods") < static_cast<std::ptrdiff_t>(data.columns.size()) &&
      named("f_max") < static_cast<std::ptrdiff_t>(data.columns.size())) {
    ri = static_cast<std::size_t>(named("p_harmonic"));
    ci = static_cast<std::size_t>(named("n_periods"));
    vi = static_cast<std::size_t>(named("f_max"));
  } else if (data.columns.size() < 3 && !data.rows.empty()) {
    std::fprintf(stderr, "render: heatmap needs at least three columns\n");
    return 3;
  }

  const std::size_t need = std::max(ri, std::max(ci, vi)) + 1;
  std::set<double> row_keys, col_keys;
  for (const auto& row : data.rows) {
    if (row.size() < need) continue;
    row_keys.insert(row[ri]);
    col_keys.insert(row[ci]);
  }
  Heatmap hm;
  hm.title = title;
  hm.row_label = data.columns.size() > ri ? data.columns[ri] : "row";
  hm.col_label = data.columns.size() > ci ? data.columns[ci] : "col";
  hm.row_ticks.assign(row_keys.begin(), row_keys.end());
  hm.col_ticks.assign(col_keys.begin(), col_keys.end());
  hm.cells.assign(hm.row_ticks.size(),
                  std::vector<double>(hm.col_ticks.size(),
                                      std::numeric_limits<double>::quiet_NaN()));
  for (const auto& row : data.rows) {
    if (row.size() < need) continue;
    const std::size_t rr = static_cast<std::size_t>(
        std::lower_bound(hm.row_ticks.begin(), hm.row_ticks.end(), row[ri]) -
        hm.row_ticks.begin());
    const std::size_t cc = static_cast<std::size_t>(
        std::lower_bound(hm.col_ticks.begin(), hm.col_ticks.end(), row[ci]) -
        hm.col_ticks.begin());
    hm.cells[rr][cc] = row[vi];
  }
  emit(out, svg_heatmap(hm), files);
  return 0;
}

} // namespace

int run_scenario(const std::string& verb, const Config& cfg_in,
                 std::vector<std::string>* files) {
  std::string v = verb;
  std::replace(v.begin(), v.end(), '_', '-');
  static const std::set<std::string> known = {"constants", "gate-x", "gate-z",  "hadamard",
                                              "ghz",       "dephasing", "sweep", "render"};
  if (!known.count(v)) {
    std::fprintf(stderr, "unknown scenario verb '%s'\n", verb.c_str());
    return 2;
  }
  Config cfg = cfg_in;
  cfg.scenario = v;
  try {
    if (!cfg.out_dir.empty()) fs::create_directories(cfg.out_dir);
    if (v == "constants") return scenario_constants(cfg, files);
    if (v == "gate-x") return scenario_gate_x(cfg, files);
    if (v == "gate-z") return scenario_gate_z(cfg, files);
    if (v == "hadamard") return scenario_hadamard(cfg, files);
    if (v == "ghz") return scenario_ghz(cfg, files);
    if (v == "dephasing") return scenario_dephasing(cfg, files);
    if (v == "sweep") return scenario_sweep(cfg, files);
    return scenario_render(cfg, files);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 3;
  }
}

} // namespace vbsim
