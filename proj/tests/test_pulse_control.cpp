#include <doctest.h>

#include <cmath>
#include <vector>

#include "vbsim/pulse_control.hpp"

using namespace vbsim;

TEST_CASE("CPMG filters form the right-continuous square wave") {
  const Schedule s = Schedule::cpmg(4.0);
  // F_x = F_z: +1 on [0, T/4) and [3T/4, T), -1 on [T/4, 3T/4)
  CHECK(s.filters(0.0).fx == 1.0);
  CHECK(s.filters(0.999).fx == 1.0);
  CHECK(s.filters(1.0).fx == -1.0); // right-continuous at T/4
  CHECK(s.filters(2.0).fx == -1.0);
  CHECK(s.filters(2.999).fx == -1.0);
  CHECK(s.filters(3.0).fx == 1.0); // right-continuous at 3T/4
  CHECK(s.filters(3.999).fx == 1.0);
  CHECK(s.filters(4.0).fx == 1.0); // periodic
  CHECK(s.filters(5.0).fx == -1.0);
  for (double t : {0.0, 0.3, 1.0, 1.7, 3.0, 4.2, 11.5}) {
    const FilterTriple f = s.filters(t);
    CHECK(f.fy == 1.0);
    CHECK(f.fx == f.fz);
  }
}

TEST_CASE("free and constant schedules have flat filters and no breakpoints") {
  const Schedule fr = Schedule::free();
  CHECK(fr.filters(0.0).fx == 1.0);
  CHECK(fr.filters(123.0).fz == 1.0);
  CHECK(fr.breakpoints(100.0).empty());

  const Schedule c = Schedule::constant(0.0, -1.0, 0.5);
  const FilterTriple f = c.filters(9.9);
  CHECK(f.fx == 0.0);
  CHECK(f.fy == -1.0);
  CHECK(f.fz == 0.5);
  CHECK(c.breakpoints(100.0).empty());
}

TEST_CASE("CPMG breakpoints list the switch times strictly before t_max") {
  const Schedule s = Schedule::cpmg(4.0);
  const std::vector<double> bp = s.breakpoints(10.0);
  const std::vector<double> want = {1.0, 3.0, 5.0, 7.0, 9.0};
  REQUIRE(bp.size() == want.size());
  for (std::size_t i = 0; i < bp.size(); ++i) CHECK(bp[i] == doctest::Approx(want[i]).epsilon(1e-12));
  // boundary exactly at a switch time: that switch is excluded
  CHECK(s.breakpoints(9.0).size() == 4);
  CHECK(s.breakpoints(0.5).empty());
}

TEST_CASE("cpmg_period locks the p-th harmonic and rejects even p") {
  const ModelParams pm(345.410521);
  const double T = cpmg_period(pm, 5);
  CHECK(std::abs(T - 2.0 * kPi * 5 / (kRadPerNs * std::abs(pm.delta_mean))) < 1e-12);
  CHECK(std::abs(T - 0.808539774) < 1e-6); // frozen value at the N=50 field
  CHECK(std::abs(cpmg_period(pm, 1) - T / 5.0) < 1e-12);
  CHECK_THROWS_AS(cpmg_period(pm, 2), std::invalid_argument);
  CHECK_THROWS_AS(cpmg_period(pm, 0), std::invalid_argument);
  CHECK_THROWS_AS(cpmg_period(pm, -3), std::invalid_argument);
}

TEST_CASE("realized rotation alternates sign with p mod 4") {
  const ModelParams pm(345.410521);
  // phi = 4 sin(p pi/2) a_perp N / Delta
  const double phi1 = realized_rotation(pm, 50, 1);
  const double phi3 = realized_rotation(pm, 50, 3);
  const double phi5 = realized_rotation(pm, 50, 5);
  CHECK(phi1 > 0.0);
  CHECK(phi3 < 0.0);
  CHECK(std::abs(phi1 + phi3) < 1e-12);
  CHECK(std::abs(phi5 - phi1) < 1e-12);
  // at the synchronous field for (pi/2, 50) the realized angle is pi/2
  CHECK(std::abs(phi5 - kPi / 2) < 1e-6);
  // resolution is the N = 1 angle
  CHECK(std::abs(angular_resolution(pm) - std::abs(realized_rotation(pm, 1, 1))) < 1e-12);
}

TEST_CASE("filter Fourier series converges to the square wave") {
  // F_x(t) = sum_{m>=0} (4/pi(2m+1)) (-1)^m cos(2 pi (2m+1) t / T)
  const double T = 4.0;
  const Schedule s = Schedule::cpmg(T);
  const int n_samples = 4096;
  const int k_max = 2001;
  double err2 = 0.0;
  for (int i = 0; i < n_samples; ++i) {
    const double t = (i + 0.5) * T / n_samples;
    double series = 0.0;
    for (int k = 1; k <= k_max; k += 2) {
      const double amp = 4.0 / (kPi * k) * ((k % 4 == 1) ? 1.0 : -1.0);
      series += amp * std::cos(2.0 * kPi * k * t / T);
    }
    const double diff = series - s.filters(t).fx;
    err2 += diff * diff;
  }
  const double l2 = std::sqrt(err2 / n_samples);
  CHECK(l2 < 0.05);
  CHECK(l2 > 0.0); // truncated series, not exact
}

TEST_CASE("resonance integral matches the closed form at the locked harmonics") {
  const ModelParams pm(345.410521);
  for (int p : {1, 3, 5, 7}) {
    const double T = cpmg_period(pm, p);
    const int N = 50;
    const double delta = kRadPerNs * std::abs(pm.delta_mean); // = 2 pi p / T
    const double got = resonance_integral(delta, T, N);
    const double want = N * T * (2.0 / (p * kPi)) * std::sin(p * kPi / 2.0);
    CHECK(std::abs(got - want) < 1e-9 * std::abs(want));
  }
  // off resonance the integral is tiny compared to the locked value
  const double T = cpmg_period(pm, 5);
  const double on = std::abs(resonance_integral(2.0 * kPi * 5 / T, T, 50));
  const double off = std::abs(resonance_integral(2.0 * kPi * 5 / T * 1.07, T, 50));
  CHECK(off < 0.2 * on);
}

TEST_CASE("gate times for the frozen operating points") {
  // N*T is set by p and Delta only; at the synchronous field it is
  // proportional to p and independent of N.
  const ModelParams x_pm(synchronous_field(kPi / 2, 50));
  CHECK(std::abs(50 * cpmg_period(x_pm, 5) - 40.4269887) < 1e-4);
  const ModelParams h_pm(synchronous_field(kPi / 4, 50));
  CHECK(std::abs(50 * cpmg_period(h_pm, 5) - 20.2134944) < 1e-4);
  const ModelParams x10(synchronous_field(kPi / 2, 10));
  CHECK(std::abs(10 * cpmg_period(x10, 5) - 40.4269887) < 1e-4);
}

TEST_CASE("toggling operator equals filter times Pauli") {
  const Schedule s = Schedule::cpmg(3.1);
  for (int i = 0; i < 500; ++i) {
    const double t = 31.0 * i / 500.0;
    const FilterTriple f = s.filters(t);
    CHECK((toggling_operator('x', t, s) - Mat(f.fx * sigma_op('x'))).norm() < 1e-12);
    CHECK((toggling_operator('y', t, s) - Mat(f.fy * sigma_op('y'))).norm() < 1e-12);
    CHECK((toggling_operator('z', t, s) - Mat(f.fz * sigma_op('z'))).norm() < 1e-12);
  }
  // free evolution leaves the Paulis alone
  const Schedule fr = Schedule::free();
  CHECK((toggling_operator('x', 5.0, fr) - sigma_op('x')).norm() < 1e-15);
}
