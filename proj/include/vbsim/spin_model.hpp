#pragma once
#include <array>

#include "vbsim/constants.hpp"
#include "vbsim/linalg.hpp"

namespace vbsim {

// Electron qubit operators on {|0>, |-1>} (2x2) and spin-1 operators in the
// m = +1, 0, -1 basis (3x3). axis is 'x', 'y' or 'z'.
const Mat& sigma_op(char axis);
const Mat& nuclear_op(char axis);

// Embeddings into the 54-dimensional register, electron factor leading.
Mat embed_electron(const Mat& op2);
Mat embed_nucleus(const Mat& op3, int k);

// Frame parameters derived from the static field. All frequencies in 2*pi*MHz.
// The rotating frame is taken at the magnitude of the electron splitting
// |D_gs - gamma_e*B| so the same expressions hold on both sides of the
// ground-state level crossing; above_crossing records which side we are on.
struct ModelParams {
  double field_mT = 0.0;
  bool above_crossing = false;
  double omega0 = 0.0;                     // |D_gs - gamma_e*B|
  std::array<double, 3> omega_n{};         // gamma_n*B + Azz_k/2
  std::array<double, 3> delta_k{};         // omega0 - omega_n[k]
  std::array<double, 3> sigma_k{};         // omega0 + omega_n[k]
  double delta_mean = 0.0;                 // mean of delta_k
  std::array<double, 3> a_perp_k{};        // (Axx+Ayy)/(2 sqrt2)
  std::array<double, 3> b_perp_k{};        // (Axx-Ayy)/(2 sqrt2)
  std::array<double, 3> a_xy_k{};          // Axy
  double a_z = 0.0;                        // mean Azz/2
  double a_perp = 0.0;                     // mean of a_perp_k

  explicit ModelParams(double B_mT);
};

// Which groups of the rotating-frame Hamiltonian to include. All is the full
// model; Effective keeps the secular zz term plus the co-rotating transverse
// term with per-nucleus detunings; EffectiveAveraged replaces the per-nucleus
// couplings and detunings by their means; RotatingOdd is the quadrature
// partner of the co-rotating term; CounterRotating collects the fast terms at
// the sum frequencies, including the in-plane anisotropy and Axy pieces.
// All equals Effective + RotatingOdd + CounterRotating identically.
enum class TermSelector { All, Effective, EffectiveAveraged, RotatingOdd, CounterRotating };

TermSelector term_selector_from_string(const std::string& s);
std::string to_string(TermSelector sel);

// Instantaneous values of the pulse filter functions multiplying the sigma_x,
// sigma_y and sigma_z interaction terms.
struct FilterTriple {
  double fx = 1.0;
  double fy = 1.0;
  double fz = 1.0;
};

// Quadrupole term sum_k Q*(I_k^z)^2 in rad/ns. Its spectrum over the register
// is {0, Q, 2Q, 3Q} with multiplicities {2, 12, 24, 16}.
const Mat& quadrupole_term();

// Rotating-frame Hamiltonian at time t in rad/ns.
Mat rotating_hamiltonian(double t_ns, const ModelParams& pm, const FilterTriple& f,
                         TermSelector sel = TermSelector::All, bool quadrupole = false);
// Same, accumulating into a caller-owned buffer (resized as needed).
void rotating_hamiltonian_into(Mat& h, double t_ns, const ModelParams& pm,
                               const FilterTriple& f, TermSelector sel,
                               bool quadrupole);

// Field at which N pulse periods accumulate the collective rotation angle phi:
// B = (4*N*a_perp/phi + D_gs + a_z) / (gamma_e - gamma_n).
double synchronous_field(double phi, int n_periods);

} // namespace vbsim
