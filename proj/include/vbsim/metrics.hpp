#pragma once
#include <array>
#include <cstdint>
#include <vector>

#include "vbsim/gates.hpp"

namespace vbsim {

// Haar-averaged gate fidelity of an operator E (not necessarily unitary;
// projected operators are allowed): (|Tr E|^2 + Tr(E^dag E)) / (d(d+1)).
double avg_gate_fidelity(const Mat& e);

// Monte-Carlo estimate of the same average, mean of |<psi|E|psi>|^2 over Haar
// samples. Chunked deterministic reduction: the result is independent of the
// number of threads. std_err (optional) receives the standard error.
double avg_gate_fidelity_mc(const Mat& e, std::int64_t samples, std::uint64_t seed,
                            int jobs = 1, double* std_err = nullptr);

// Relative average gate fidelity F(V^dag E) / F(V^dag V). Rejects targets with
// F(V^dag V) = 0 (std::invalid_argument).
double relative_avg_gate_fidelity(const Mat& e, const Mat& v);

// Uhlmann fidelity F(rho, sigma) = Tr sqrt(sqrt(sigma) rho sqrt(sigma))
// (amplitude convention, no square). Symmetric in its arguments.
double state_fidelity(const Mat& rho, const Mat& sigma);
// Pure-target shortcut, sqrt(<psi|rho|psi>).
double state_fidelity_pure(const Vec& psi, const Mat& rho);

// Electron-herald decomposition of a register density matrix: diagonal
// electron blocks as sub-normalized 27x27 nuclear states with probabilities.
// Probabilities sum to Tr rho.
struct HeraldedState {
  double probability = 0.0;
  Mat nuclear; // sub-normalized
};
std::array<HeraldedState, 2> heralded_states(const Mat& rho54);

// Fidelity trace over a time grid plus its first global maximum.
struct FidelityTrace {
  std::vector<double> times;
  std::vector<double> values;
  double reference_time = 0.0;
  double value_at_reference = 0.0;
  int argmax_index = -1;
  double argmax_time = 0.0;
  double max_value = 0.0;
};

// Index of the first global maximum (earliest time attaining the maximum).
int trace_maximum(const std::vector<double>& values);
// Fills the argmax/reference fields from times/values; reference value is
// taken at the grid point closest to reference_time.
void finalize_trace(FidelityTrace& tr);

// (reference - value) / reference; the fractional loss of a figure of merit.
double relative_deviation(double reference, double value);

// First-order sensitivity of the average gate fidelity to electron pure
// dephasing: for the channel with jump operator L = sigma_z (x) 1 at rate
// gamma, the fractional fidelity loss is eps = gamma * C + O(gamma^2) with
//   C = [T (tau0^2 + S0) - int_0^T (tau_t^2 + s_t) dt] / (tau0^2 + S0),
//   tau_t = |Tr(V^dag U_T A_t P)|, s_t = Tr(V V^dag (U_T A_t) P (U_T A_t)^dag),
//   A_t = U_t^dag L U_t  (A_0 = L, giving tau0 and S0 via A replaced by 1).
// The normalization F(V^dag V) cancels in the relative fidelity, so C applies
// to relative_avg_gate_fidelity directly.
struct DephasingSensitivity {
  double coefficient_ns = 0.0; // C, in ns
  double tau0 = 0.0;
  double s0 = 0.0;
};

} // namespace vbsim
