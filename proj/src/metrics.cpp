#include "vbsim/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "vbsim/constants.hpp"
#include "vbsim/rng.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace vbsim {

double avg_gate_fidelity(const Mat& e) {
  const auto d = static_cast<double>(e.rows());
  if (e.rows() != e.cols()) throw std::invalid_argument("avg_gate_fidelity: matrix must be square");
  const double tr2 = std::norm(e.trace());
  const double hs = (e.adjoint() * e).trace().real();
  return (tr2 + hs) / (d * (d + 1.0));
}

double avg_gate_fidelity_mc(const Mat& e, std::int64_t samples, std::uint64_t seed, int jobs,
                            double* std_err) {
  if (samples <= 0) throw std::invalid_argument("avg_gate_fidelity_mc: samples must be positive");
  const int dim = static_cast<int>(e.rows());

  // fixed-size chunks summed serially, then combined in index order, so the
  // result is bitwise independent of the thread count
  constexpr std::int64_t kChunk = 256;
  const std::int64_t n_chunks = (samples + kChunk - 1) / kChunk;
  std::vector<double> sum1(static_cast<std::size_t>(n_chunks), 0.0),
      sum2(static_cast<std::size_t>(n_chunks), 0.0);
#ifndef _OPENMP
  (void)jobs;
#endif

#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic) num_threads(std::max(1, jobs))
#endif
  for (std::int64_t c = 0; c < n_chunks; ++c) {
    const std::int64_t lo = c * kChunk;
    const std::int64_t hi = std::min(samples, lo + kChunk);
    double s1 = 0.0, s2 = 0.0;
    for (std::int64_t i = lo; i < hi; ++i) {
      const Vec psi = haar_state(dim, seed, static_cast<std::uint64_t>(i));
      const Vec out = e * psi;
      // survival probability |<psi|E|psi>|^2 for a unitary-style map
      const double f = std::norm(psi.dot(out));
      s1 += f;
      s2 += f * f;
    }
    sum1[c] = s1;
    sum2[c] = s2;
  }

  double s1 = 0.0, s2 = 0.0;
  for (std::int64_t c = 0; c < n_chunks; ++c) {
    s1 += sum1[c];
    s2 += sum2[c];
  }
  const double n = static_cast<double>(samples);
  const double mean = s1 / n;
  if (std_err) {
    const double var = std::max(0.0, s2 / n - mean * mean);
    *std_err = std::sqrt(var / n);
  }
  return mean;
}

double relative_avg_gate_fidelity(const Mat& e, const Mat& v) {
  if (e.rows() != v.rows() || e.cols() != v.cols())
    throw std::invalid_argument("relative_avg_gate_fidelity: shape mismatch");
  const double denom = avg_gate_fidelity(v.adjoint() * v);
  if (denom <= 0.0)
    throw std::invalid_argument("relative_avg_gate_fidelity: reference has zero self-fidelity");
  return avg_gate_fidelity(v.adjoint() * e) / denom;
}

double state_fidelity(const Mat& rho, const Mat& sigma) {
  if (rho.rows() != sigma.rows() || rho.rows() != rho.cols() || sigma.rows() != sigma.cols())
    throw std::invalid_argument("state_fidelity: shape mismatch");
  const Mat sr = sqrt_psd(sigma);
  const Mat inner = sqrt_psd(sr * rho * sr);
  return inner.trace().real();
}

double state_fidelity_pure(const Vec& psi, const Mat& rho) {
  if (psi.size() != rho.rows() || rho.rows() != rho.cols())
    throw std::invalid_argument("state_fidelity_pure: shape mismatch");
  const double val = (psi.adjoint() * rho * psi)(0).real();
  return std::sqrt(std::max(0.0, val));
}

std::array<HeraldedState, 2> heralded_states(const Mat& rho54) {
  if (rho54.rows() != kDim || rho54.cols() != kDim)
    throw std::invalid_argument("heralded_states: expected the full register density matrix");
  std::array<HeraldedState, 2> out;
  for (int h = 0; h < 2; ++h) {
    Mat block = rho54.block(h * kNuclearDim, h * kNuclearDim, kNuclearDim, kNuclearDim);
    const double pr = block.trace().real();
    out[h].probability = pr;
    if (pr > 0.0) block /= pr;
    out[h].nuclear = block;
  }
  return out;
}

int trace_maximum(const std::vector<double>& values) {
  if (values.empty()) throw std::invalid_argument("trace_maximum: empty trace");
  return static_cast<int>(
      std::distance(values.begin(), std::max_element(values.begin(), values.end())));
}

void finalize_trace(FidelityTrace& tr) {
  if (tr.times.size() != tr.values.size() || tr.times.empty())
    throw std::invalid_argument("finalize_trace: times and values must match and be non-empty");
  tr.argmax_index = trace_maximum(tr.values);
  tr.argmax_time = tr.times[static_cast<std::size_t>(tr.argmax_index)];
  tr.max_value = tr.values[static_cast<std::size_t>(tr.argmax_index)];
  // value at the reference time: exact grid membership is guaranteed upstream
  tr.value_at_reference = 0.0;
  for (std::size_t i = 0; i < tr.times.size(); ++i) {
    if (std::abs(tr.times[i] - tr.reference_time) < 1e-9) {
      tr.value_at_reference = tr.values[i];
      return;
    }
  }
  throw std::invalid_argument("finalize_trace: reference time not found on the grid");
}

double relative_deviation(double reference, double value) {
  if (reference == 0.0) throw std::invalid_argument("relative_deviation: zero reference");
  return (reference - value) / reference;
}

} // namespace vbsim
