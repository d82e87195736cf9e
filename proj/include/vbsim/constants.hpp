#pragma once
#include <array>
#include <numbers>

// Physical constants of the simulated register: one electron qubit spanned by
// the {|0>, |-1>} levels of a spin-1 ground-state triplet, coupled to the
// three nearest spin-1 14N nuclei through their hyperfine tensors.
//
// Unit conventions used throughout the library:
//   - frequencies and couplings are quoted in units of 2*pi*MHz,
//   - magnetic fields in mT,
//   - times in ns,
//   - the engine works internally in rad/ns; kRadPerNs converts a 2*pi*MHz
//     value into rad/ns (1 2*pi*MHz = 2e-3*pi rad/ns).

namespace vbsim {

inline constexpr const char* kVersion = "1.0.0";

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kRadPerNs = 2.0e-3 * kPi;

inline constexpr double kDgs = 3471.0;      // zero-field splitting, 2*pi*MHz
inline constexpr double kGammaE = 28.025;   // electron gyromagnetic ratio, 2*pi*MHz/mT
inline constexpr double kGammaN = 3.077e-3; // 14N gyromagnetic ratio, 2*pi*MHz/mT
inline constexpr double kQuadrupole = 0.383; // 14N quadrupole coupling, 2*pi*MHz

// Hyperfine tensors of the three nearest 14N nuclei, 2*pi*MHz, rows/cols x,y,z.
// Nuclei 1 and 3 are mirror images of each other (opposite xy component).
using Tensor3 = std::array<std::array<double, 3>, 3>;
inline constexpr std::array<Tensor3, 3> kHyperfine = {{
    {{{79.406, 18.391, 0.0}, {18.391, 58.170, 0.0}, {0.0, 0.0, 48.159}}},
    {{{46.944, 0.0, 0.0}, {0.0, 90.025, 0.0}, {0.0, 0.0, 48.158}}},
    {{{79.406, -18.391, 0.0}, {-18.391, 58.170, 0.0}, {0.0, 0.0, 48.159}}},
}};

inline constexpr int kNumNuclei = 3;
inline constexpr int kNuclearDim = 27; // 3^3
inline constexpr int kDim = 54;        // 2 * 27

} // namespace vbsim
