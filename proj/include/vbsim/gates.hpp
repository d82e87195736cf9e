#pragma once
#include <array>
#include <string>
#include <utility>

#include "vbsim/linalg.hpp"

namespace vbsim {

// --- single-nucleus two-level algebra -------------------------------------
// A spin-1 nucleus is used as a qubit on the two-level subspace spanned by a
// pair of the basis kets |x> = (|1>-|-1>)/sqrt2, |y> = (|1>+|-1>)/sqrt2,
// |z> = |0>. As matrices, I_x = X^{yz}, I_y = -Y^{zx}, I_z = X^{xy}.

Vec nuclear_ket(char which);      // 'x', 'y' or 'z' (3-dim)
Vec nuclear_ket_m(int m);         // m in {+1, 0, -1}

Mat pair_projector(char a, char b); // P^{ab} = |a><a| + |b><b|
Mat pair_x(char a, char b);         // X^{ab} = |a><b| + |b><a|
Mat pair_y(char a, char b);         // Y^{ab} = -i|a><b| + i|b><a|
Mat pair_z(char a, char b);         // Z^{ab} = |a><a| - |b><b|
Mat pair_h(char a, char b);         // (P^{ab} + i X^{ab}) / sqrt2

// Closed-form exp(-i phi I_axis) = P^axis + cos(phi) (1 - P^axis) - i sin(phi) I_axis
// (3x3). Leaves |axis> invariant with unit amplitude for every phi.
Mat euler_form(char axis, double phi);

// --- register-level constructions -----------------------------------------

// Product embedding op (x) op (x) op on the nuclei with an electron factor.
Mat collective_nuclear(const Mat& electron2, const Mat& op3);

// Entangling rotation exp(-i phi sigma_axis (x) sum_k I_k^axis) (54x54).
Mat entangling_gate(char axis, double phi);
// The same operator written as an electron-conditioned product
// |+axis><+axis| (x) prod_k e^{-i phi I_k^axis} + |-axis><-axis| (x) prod_k e^{+i phi I_k^axis}.
Mat entangling_conditional_form(char axis, double phi);

// Ideal target of a synchronous gate together with its domain projector.
struct GateSpec {
  std::string label;
  Mat ideal;   // projected unitary, ideal = domain * ideal * domain
  Mat domain;  // projector onto the gate's domain
  std::string recipe; // protocol that realizes it, for reports
};

// kind 'X', 'Z' or 'H' acting on all three nuclear qubits at once, on the
// two-level subspace given by the pair (default yz). The driving axis is the
// basis letter complementary to the pair.
GateSpec synchronous_gate(char kind, std::pair<char, char> subspace = {'y', 'z'});
// R(phi): restriction of the entangling rotation to the gate domain.
GateSpec rotation_gate(double phi, std::pair<char, char> subspace = {'y', 'z'});

// Gate equality up to global phase: max over phase of |Tr(A^dag B)| / ||A||_F^2
// for operators of equal Frobenius norm; 1 means equal up to a phase.
double phase_aligned_overlap(const Mat& a, const Mat& b);

// --- GHZ preparation and collective access ---------------------------------

// Register state |0> (x) |m_I>^3, m_I in {+1, -1}.
Vec ghz_initial_state(int m_i = +1);
// Branch kets |0bar> = e^{-i(pi/2)I_x}|m_I> and |1bar> = e^{+i(pi/2)I_x}|m_I>.
Vec bar_ket(int which, int m_i = +1);
// (|0bar 0bar 0bar> + e^{i nu}|1bar 1bar 1bar>)/sqrt2, 27-dim.
Vec ghz_target(double nu, int m_i = +1);

struct GhzOutcome {
  int herald = 0;          // 0: electron |0>, 1: electron |-1>
  double probability = 0.0;
  Mat nuclear;             // 27x27, sub-normalized (trace = probability)
  double phase_nu = 0.0;   // GHZ phase of the ideal target for this herald
};

// Applies the supplied 54x54 entangler (ideal entangling_gate('x', pi/2) or a
// simulated propagator) to |0> (x) |m_I>^3 and projects the electron onto
// {|0>, |-1>}. Herald |0> carries nu = 0, herald |-1> carries nu = pi.
std::array<GhzOutcome, 2> ghz_protocol(const Mat& entangler, int m_i = +1);

// Phase correction for the herald-|-1> branch: the full register rotation
// entangling_gate('y', pi/2) maps |-1> (x) GHZ_pi onto |0> (x) GHZ_0 up to phase.
Mat ghz_phase_correction();

// Electron-|0> block of the z rotation at phi = pi/2, prod_k (P_k^z - i X_k^{xy}),
// mapping |x>_k -> -i|y>_k so a GHZ state moves into the yz subspace (27x27).
Mat ghz_transfer_to_yz();

// Ideal collective write: electron (alpha, beta) in the {|+>, |->} basis is
// mapped through the entangler and heralded, leaving the nuclei in
// alpha|0bar..> + s beta|1bar..> with s = +1 for herald |0> and -1 for |-1>.
struct WriteOutcome {
  double probability = 0.0;
  Vec nuclear; // 27-dim, normalized
};
std::array<WriteOutcome, 2> collective_write(cd alpha, cd beta, int m_i = +1);

// Ideal collective read: U_z(pi/12) U_x(pi/2) applied to |0> (x) nuclear.
// The stated product form is verified numerically: the result factorizes into
// electron (x) nuclei exactly (three nuclei contribute 6 * (pi/12) = pi/2 of
// relative phase), with electron amplitudes ((a+b)/sqrt2, -i m_I (a-b)/sqrt2)
// for nuclear input a|0bar..> + b|1bar..>.
struct ReadOutcome {
  Eigen::Vector2cd electron_claimed; // amplitudes on {|0>, |-1>}
  double overlap = 0.0;              // <claimed| rho_e |claimed> / <claimed|claimed>
  double purity = 0.0;               // Tr rho_e^2
  double factorization_error = 0.0;  // 1 - purity
};
ReadOutcome collective_read(const Vec& nuclear27, int m_i = +1);

} // namespace vbsim
