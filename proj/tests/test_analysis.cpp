#include <cmath>
#include <random>

#include "doctest.h"
#include "dts/analysis.hpp"
#include "dts/errors.hpp"

using dts::analytic_eigensystem;
using dts::kTwoPi;

TEST_CASE("mixing angle and splitting for the reference detuning") {
  // delta = 15, g = 1: cos(theta) = 15/sqrt(229), splitting sqrt(229).
  const auto es = analytic_eigensystem(15.0, 0.0, 1.0);
  CHECK(std::cos(es.theta) == doctest::Approx(15.0 / std::sqrt(229.0))
                                  .epsilon(1e-14));
  CHECK(es.energies[1] == doctest::Approx(M_PI * std::sqrt(229.0))
                              .epsilon(1e-14));
  CHECK(es.energies[2] == doctest::Approx(-M_PI * std::sqrt(229.0))
                              .epsilon(1e-14));
  // Outer states: (sum of splittings)/2 = 7.5 in f-units.
  CHECK(es.energies[0] == doctest::Approx(kTwoPi * 7.5).epsilon(1e-14));
  CHECK(es.energies[3] == doctest::Approx(-kTwoPi * 7.5).epsilon(1e-14));
}

TEST_CASE("dressed vectors carry the documented half-angle pattern") {
  const auto es = analytic_eigensystem(15.0, 0.0, 1.0);
  const double c = std::cos(es.theta / 2.0);
  const double s = std::sin(es.theta / 2.0);
  // Column order uu, ud, du, dd; rows in the same basis.
  CHECK(std::abs(es.vectors(0, 0) - 1.0) < 1e-14);
  CHECK(std::abs(es.vectors(3, 3) - 1.0) < 1e-14);
  CHECK(std::abs(es.vectors(1, 1) - c) < 1e-14);
  CHECK(std::abs(es.vectors(2, 1) - s) < 1e-14);
  CHECK(std::abs(es.vectors(1, 2) - s) < 1e-14);
  CHECK(std::abs(es.vectors(2, 2) + c) < 1e-14);
  // Columns are orthonormal.
  const dts::ComplexMatrix gram = es.vectors.adjoint() * es.vectors;
  CHECK(dts::max_abs(gram - dts::ComplexMatrix::Identity(4, 4)) < 1e-14);
}

TEST_CASE("limits of the mixing angle") {
  // g -> 0 with positive detuning difference: theta -> 0, E2 state = ud.
  const auto es0 = analytic_eigensystem(15.0, 0.0, 0.0);
  CHECK(es0.theta == doctest::Approx(0.0));
  CHECK(std::abs(es0.vectors(1, 1) - 1.0) < 1e-14);
  // Inverted detunings: theta -> pi, E2 state = du.
  const auto es1 = analytic_eigensystem(0.0, 15.0, 0.0);
  CHECK(es1.theta == doctest::Approx(M_PI));
  CHECK(std::abs(std::abs(es1.vectors(2, 1)) - 1.0) < 1e-12);
  // Resonant pair: theta = pi/2, symmetric/antisymmetric states.
  const auto es2 = analytic_eigensystem(5.0, 5.0, 1.0);
  CHECK(es2.theta == doctest::Approx(M_PI / 2.0));
  CHECK(std::abs(es2.vectors(1, 1) - 1.0 / std::sqrt(2.0)) < 1e-14);
}

TEST_CASE("degenerate and negative-g inputs are rejected") {
  CHECK_THROWS_AS(analytic_eigensystem(3.0, 3.0, 0.0), dts::ContractViolation);
  CHECK_THROWS_AS(analytic_eigensystem(15.0, 0.0, -1.0),
                  dts::ContractViolation);
}

TEST_CASE("closed form matches numeric diagonalization on a random grid") {
  std::mt19937 rng(41);
  std::uniform_real_distribution<double> d_dist(-25.0, 25.0);
  std::uniform_real_distribution<double> g_dist(0.1, 5.0);
  for (int trial = 0; trial < 200; ++trial) {
    const double d1 = d_dist(rng);
    const double d2 = d_dist(rng);
    const double g = g_dist(rng);
    const auto report = dts::verify_against_numeric(d1, d2, g);
    CHECK(report.max_energy_dev < 1e-10);
    CHECK(report.max_vector_dev < 1e-10);
  }
}

TEST_CASE("transition elements obey the selection rules") {
  std::mt19937 rng(43);
  std::uniform_real_distribution<double> d_dist(-25.0, 25.0);
  std::uniform_real_distribution<double> g_dist(0.05, 5.0);
  std::uniform_real_distribution<double> j_dist(-3.0, 3.0);
  for (int trial = 0; trial < 100; ++trial) {
    const double d1 = d_dist(rng);
    const double d2 = d_dist(rng);
    const double g = g_dist(rng);
    const double j1 = j_dist(rng);
    const double j2 = j_dist(rng);
    const auto es = analytic_eigensystem(d1, d2, g);
    const auto tm = dts::transition_elements(es, j1, j2);
    // Forbidden elements vanish identically.
    CHECK(std::abs(tm.m12) <= 1e-14);
    CHECK(std::abs(tm.m34) <= 1e-14);
    // The allowed element has the closed form sin(theta) (J1 - J2).
    const double want = std::sin(es.theta) * kTwoPi * (j1 - j2);
    CHECK(std::abs(tm.m23 - want) <= 1e-12);
  }
}

TEST_CASE("resonance detuning measures distance to the dressed splitting") {
  const auto es = analytic_eigensystem(15.0, 0.0, 1.0);
  const double split = std::sqrt(229.0);
  CHECK(dts::resonance_detuning(es, 15.0) ==
        doctest::Approx(split - 15.0).epsilon(1e-12));
  CHECK(dts::resonance_detuning(es, split) == doctest::Approx(0.0));
  CHECK(dts::resonance_detuning(es, 18.0) ==
        doctest::Approx(18.0 - split).epsilon(1e-12));
}

TEST_CASE("steady transfer probability is cos^2(theta/2)") {
  for (double g : {0.25, 0.5, 1.0, 2.0}) {
    const auto es = analytic_eigensystem(15.0, 0.0, g);
    const double want = 0.5 * (1.0 + 15.0 / std::sqrt(225.0 + 4.0 * g * g));
    CHECK(dts::dressed_transfer_probability(es) ==
          doctest::Approx(want).epsilon(1e-14));
  }
}

TEST_CASE("effective transfer rate follows the Lorentzian filter") {
  const auto es = analytic_eigensystem(15.0, 0.0, 1.0);
  const double j1 = 2.0, j2 = 1.0, omega_c = 15.0, kappa = 3.0;
  const auto tm = dts::transition_elements(es, j1, j2);
  const double mismatch = kTwoPi * dts::resonance_detuning(es, omega_c);
  const double kap = kTwoPi * kappa;
  const double want =
      tm.m23 * tm.m23 * kap / (mismatch * mismatch + 0.25 * kap * kap);
  CHECK(dts::effective_transfer_rate(es, j1, j2, omega_c, kappa) ==
        doctest::Approx(want).epsilon(1e-12));
  CHECK(dts::effective_transfer_rate(es, j1, j2, omega_c, 0.0) == 0.0);
}

TEST_CASE("params overloads take the first pair and validate") {
  dts::ModelParams p;
  p.qubits = 4;
  p.detunings = {15.0, 0.0, 15.0, 0.0};
  p.g = 1.0;
  p.omega_c = 15.0;
  p.couplings = {2.0, 1.0, 2.0, 1.0};
  p.kappa = 3.0;
  const auto es4 = analytic_eigensystem(p);
  const auto es2 = analytic_eigensystem(15.0, 0.0, 1.0);
  CHECK(es4.theta == doctest::Approx(es2.theta));
  CHECK(dts::effective_transfer_rate(p) ==
        doctest::Approx(dts::effective_transfer_rate(es2, 2.0, 1.0, 15.0,
                                                     3.0)));
  p.kappa = -1.0;
  CHECK_THROWS_AS(analytic_eigensystem(p), dts::ContractViolation);
}
