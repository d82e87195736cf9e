// Benchmark of the OpenMP kernels against their serial reference
// implementations. The parallel paths must produce bitwise-identical results;
// this binary times both and fails (exit 1) on any mismatch.

#include <chrono>
#include <cstdio>

#include "vbsim/engine.hpp"

using namespace vbsim;

namespace {

double wall(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

int g_failures = 0;

void expect(bool ok, const char* what) {
  if (!ok) {
    std::printf("MISMATCH: %s\n", what);
    ++g_failures;
  }
}

} // namespace

int main() {
#ifdef _OPENMP
  std::printf("OpenMP enabled\n");
#else
  std::printf("OpenMP disabled; parallel calls fall back to the serial path\n");
#endif

  // sweep kernel: small grid, N in [4, 9] x p in {1, 3}
  Config cfg;
  cfg.sweep_n_min = 4;
  cfg.sweep_n_max = 9;
  cfg.sweep_p = {1, 3};
  cfg.grid_samples = 60;

  auto t0 = std::chrono::steady_clock::now();
  const SweepResult serial = run_sweep_serial(cfg);
  const double t_serial = wall(t0);

  for (int jobs : {2, 4}) {
    t0 = std::chrono::steady_clock::now();
    const SweepResult par = run_sweep(cfg, jobs);
    const double t_par = wall(t0);
    bool same = serial.cells.size() == par.cells.size();
    if (same)
      for (std::size_t i = 0; i < serial.cells.size(); ++i)
        same = same && serial.cells[i].f_max == par.cells[i].f_max &&
               serial.cells[i].t_opt == par.cells[i].t_opt &&
               serial.cells[i].t_ref == par.cells[i].t_ref &&
               serial.cells[i].ok == par.cells[i].ok;
    expect(same, "sweep cells differ from the serial reference");
    std::printf("sweep %zu cells: serial %.2f s, jobs=%d %.2f s (speedup %.2fx)\n",
                serial.cells.size(), t_serial, jobs, t_par, t_serial / t_par);
  }

  // Monte-Carlo fidelity kernel
  const Mat e = synchronous_gate('X').ideal;
  const std::int64_t samples = 40000;
  t0 = std::chrono::steady_clock::now();
  const double f1 = avg_gate_fidelity_mc(e, samples, 12345, 1);
  const double t_mc1 = wall(t0);
  for (int jobs : {2, 4}) {
    t0 = std::chrono::steady_clock::now();
    const double fj = avg_gate_fidelity_mc(e, samples, 12345, jobs);
    const double t_mcj = wall(t0);
    expect(f1 == fj, "Monte-Carlo mean differs from the serial reference");
    std::printf("mc %lld samples: serial %.2f s, jobs=%d %.2f s (speedup %.2fx)\n",
                static_cast<long long>(samples), t_mc1, jobs, t_mcj, t_mc1 / t_mcj);
  }

  if (g_failures == 0) std::printf("all parallel kernels match their serial references\n");
  return g_failures == 0 ? 0 : 1;
}
