#pragma once
#include <array>
#include <optional>
#include <string>
#include <vector>

#include "vbsim/evolution.hpp"
#include "vbsim/io.hpp"
#include "vbsim/metrics.hpp"

namespace vbsim {

// Snapshot grid t_k = k * (factor * t_ref / n) for k = 1..n with the endpoint
// exact; t_ref is inserted when not already present.
std::vector<double> uniform_grid(double t_ref, int n, double factor);

// Mean axial hyperfine coupling a_z in rad/ns; gate times are quoted in units
// of its inverse.
double axial_rate();

// --- gate scenarios ---------------------------------------------------------
struct GateTraceResult {
  FidelityTrace trace;
  double field_mT = 0.0;
  double period_ns = 0.0; // CPMG period, 0 for free evolution
  double step_ns = 0.0;
  int n_periods = 0;
  int p_harmonic = 0;
  double dev_az = 0.0; // (t_opt - t_ref) * a_z, dimensionless
  double unitarity_defect = 0.0;
};

// Collective X gate: CPMG at B = synchronous_field(phi, N) (or cfg.field_mT),
// fidelity trace of U(t) (1 (x) P_yz^3) against i sigma_x (x) X_yz^3.
GateTraceResult run_gate_x(const Config& cfg);

// Collective Z gate at a fixed field under free evolution; reference time
// pi/a_z, target -1 (x) Z_yz^3.
GateTraceResult run_gate_z_at_field(const Config& cfg, double field_mT);
std::vector<GateTraceResult> run_gate_z(const Config& cfg);

// Collective Hadamard: CPMG at B = synchronous_field(pi/4, N), target
// |-><-| (x) H_yz^3.
GateTraceResult run_hadamard(const Config& cfg);

struct PScanPoint {
  int p = 0;
  double f_max = 0.0;
  double t_opt = 0.0;
};
// Maximum Hadamard fidelity per filter harmonic p (cfg.p_scan); shows the
// p mod 4 alternation between the gate and its inverse.
std::vector<PScanPoint> run_hadamard_pscan(const Config& cfg);

// --- GHZ scenario -----------------------------------------------------------
struct GhzResult {
  std::vector<double> times;
  std::array<std::vector<double>, 2> fidelity; // per herald (|0>, |-1>)
  std::array<std::vector<double>, 2> herald_prob;
  double t_ref = 0.0;
  double field_mT = 0.0;
  double period_ns = 0.0;
  double step_ns = 0.0;
  std::array<double, 2> f_ref{}, p_ref{}, f_opt{}, t_opt{}, dev_az{};
  double unitarity_defect = 0.0;
  double herald_sum_defect = 0.0; // max |p0 + p1 - 1| over the grid
  // ideal-protocol checks (phase correction, collective write/read)
  double ideal_fidelity_defect = 0.0;      // ideal entangler vs targets
  double corrected_branch_defect = 0.0;    // phase-corrected herald |-1> vs GHZ_0
  double write_read_overlap_defect = 0.0;  // collective read electron overlap
  double write_read_factorization = 0.0;   // factorization error of the read
};
GhzResult run_ghz(const Config& cfg);

// --- dephasing scenario -------------------------------------------------------
struct DephasingResult {
  struct GateRow {
    char kind = 'x';
    double gamma_inv_us = 0.0;
    double epsilon = 0.0; // fractional fidelity loss
  };
  std::vector<GateRow> gates;
  std::array<double, 3> coefficient_ns{}; // first-order C for x, z, h
  struct GhzRow {
    int herald = 0;
    double gamma_inv_us = 0.0;
    double epsilon = 0.0;
    double fidelity_ref = 0.0;   // RK4 at gamma = 0
    double fidelity_noisy = 0.0; // RK4 at gamma
  };
  std::vector<GhzRow> ghz;
  double max_trace_drift = 0.0;
};
// First-order dephasing coefficient C (ns) for gate kind 'x', 'z' or 'h';
// epsilon = gamma * C.
double gate_dephasing_coefficient(char kind, const Config& cfg);
DephasingResult run_dephasing(const Config& cfg);

// --- sweep scenario -----------------------------------------------------------
struct SweepCell {
  int n_periods = 0;
  int p_harmonic = 0;
  double field_mT = 0.0;
  double f_max = 0.0;
  double t_opt = 0.0;
  double t_ref = 0.0;
  bool ok = false;
};
struct SweepResult {
  std::vector<int> n_values;
  std::vector<int> p_values;
  std::vector<SweepCell> cells; // row-major, rows = p, cols = N
};
// X-gate fidelity maximum per (N, p) cell at B = synchronous_field(phi, N).
// Cells are independent; jobs > 1 distributes them over OpenMP threads with
// results written into preassigned slots, so output is thread-count invariant.
SweepResult run_sweep(const Config& cfg, int jobs);
SweepResult run_sweep_serial(const Config& cfg); // reference implementation

// --- CLI entry ----------------------------------------------------------------
// Runs a scenario verb end to end and writes its CSV (and SVG when cfg.svg)
// into cfg.out_dir. Returns the process exit code (0 ok, 2 config error,
// 3 runtime failure); written file paths are appended to files when given.
int run_scenario(const std::string& verb, const Config& cfg,
                 std::vector<std::string>* files = nullptr);

} // namespace vbsim
