#include <cmath>
#include <random>

#include "doctest.h"
#include "dts/errors.hpp"
#include "dts/observables.hpp"
#include "support/oracles.hpp"

using dts::Complex;
using dts::ComplexMatrix;
using dts::ComplexVector;
using dts::SpaceLayout;

namespace {

ComplexMatrix pure(const ComplexVector& v) {
  return ComplexMatrix(v * v.adjoint());
}

// alpha on qubit 2, beta (optionally phase-rotated) on qubit 4, vacuum.
ComplexMatrix receiver_state(const SpaceLayout& layout, double alpha,
                             Complex beta) {
  ComplexVector v = ComplexVector::Zero(layout.total_dim());
  v(layout.flat_index({1, 0, 1, 1, 0})) = alpha;
  v(layout.flat_index({1, 1, 1, 0, 0})) = beta;
  return pure(v);
}

}  // namespace

TEST_CASE("expectation evaluates Tr(rho op) for Hermitian operators") {
  std::mt19937 rng(61);
  const ComplexMatrix rho = oracle::random_density(rng, 5);
  const ComplexMatrix op = oracle::random_hermitian(rng, 5);
  const Complex direct = oracle::naive_matmul(rho, op).trace();
  CHECK(dts::expectation(rho, op) == doctest::Approx(direct.real())
                                         .epsilon(1e-12));
  CHECK(std::abs(dts::expectation_complex(rho, op) - direct) < 1e-13);
}

TEST_CASE("expectation rejects non-Hermitian operators and noisy input") {
  std::mt19937 rng(67);
  const ComplexMatrix rho = oracle::random_density(rng, 4);
  ComplexMatrix op = ComplexMatrix::Zero(4, 4);
  op(0, 1) = 1.0;  // not Hermitian
  CHECK_THROWS_AS(dts::expectation(rho, op), dts::ContractViolation);
  CHECK_THROWS_AS(dts::expectation(rho, ComplexMatrix::Identity(3, 3)),
                  dts::ShapeError);
  // A non-Hermitian state leaks an imaginary residue that must be flagged.
  ComplexMatrix skew = ComplexMatrix::Zero(2, 2);
  skew(0, 1) = 1.0;
  ComplexMatrix sy = ComplexMatrix::Zero(2, 2);
  sy(0, 1) = Complex(0.0, -1.0);
  sy(1, 0) = Complex(0.0, 1.0);
  CHECK_THROWS_AS(dts::expectation(skew, sy), dts::NumericalError);
}

TEST_CASE("purity separates pure from mixed states") {
  SpaceLayout layout({2, 2});
  const ComplexMatrix p = pure(dts::basis_state(layout, {0, 1}));
  CHECK(dts::purity(p) == doctest::Approx(1.0).epsilon(1e-14));
  const ComplexMatrix mixed = ComplexMatrix::Identity(4, 4) / 4.0;
  CHECK(dts::purity(mixed) == doctest::Approx(0.25).epsilon(1e-14));
}

TEST_CASE("excitation projector and number operator read the right digits") {
  SpaceLayout layout({2, 2, 4});
  const ComplexMatrix rho = pure(dts::basis_state(layout, {0, 1, 2}));
  CHECK(dts::expectation(rho, dts::excitation_projector(layout, 0)) ==
        doctest::Approx(1.0));
  CHECK(dts::expectation(rho, dts::excitation_projector(layout, 1)) ==
        doctest::Approx(0.0));
  CHECK(dts::expectation(rho, dts::number_operator(layout)) ==
        doctest::Approx(2.0));
  CHECK_THROWS_AS(dts::excitation_projector(layout, 2),
                  dts::ContractViolation);
}

TEST_CASE("transfer fidelity is exact on constructed receiver states") {
  SpaceLayout layout({2, 2, 2, 2, 3});
  const double alpha = 0.6, beta = 0.8;

  // Target state itself: both fidelities are 1.
  auto res = dts::transfer_fidelity(receiver_state(layout, alpha, beta),
                                    layout, alpha, beta);
  CHECK(res.fixed_phase == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(res.phase_optimized == doctest::Approx(1.0).epsilon(1e-12));

  // Phase-rotated branch: fixed fidelity drops, optimized recovers.
  const double phi = M_PI / 3.0;
  res = dts::transfer_fidelity(
      receiver_state(layout, alpha, beta * std::polar(1.0, phi)), layout,
      alpha, beta);
  const double a2 = alpha * alpha, b2 = beta * beta;
  const double want_fixed =
      std::norm(Complex(a2 + b2 * std::cos(phi), b2 * std::sin(phi)));
  CHECK(res.fixed_phase == doctest::Approx(want_fixed).epsilon(1e-12));
  CHECK(res.phase_optimized == doctest::Approx(1.0).epsilon(1e-12));

  // Dephased mixture: no coherence, both reduce to the diagonal part.
  const ComplexMatrix mix =
      a2 * receiver_state(layout, 1.0, 0.0) +
      b2 * receiver_state(layout, 0.0, 1.0);
  res = dts::transfer_fidelity(mix, layout, alpha, beta);
  CHECK(res.fixed_phase == doctest::Approx(a2 * a2 + b2 * b2)
                               .epsilon(1e-12));
  CHECK(res.phase_optimized == doctest::Approx(a2 * a2 + b2 * b2)
                                   .epsilon(1e-12));
}

TEST_CASE("transfer fidelity sums over all Fock levels") {
  SpaceLayout layout({2, 2, 2, 2, 3});
  ComplexVector v = ComplexVector::Zero(layout.total_dim());
  const double amp = 1.0 / std::sqrt(2.0);
  v(layout.flat_index({1, 0, 1, 1, 2})) = amp;
  v(layout.flat_index({1, 1, 1, 0, 2})) = amp;
  const auto res = dts::bell_fidelity(pure(v), layout);
  CHECK(res.fixed_phase == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("transfer fidelity enforces its contracts") {
  SpaceLayout layout({2, 2, 2, 2, 3});
  const ComplexMatrix rho =
      receiver_state(layout, 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0));
  CHECK_THROWS_AS(dts::transfer_fidelity(rho, layout, 0.9, 0.9),
                  dts::ContractViolation);
  SpaceLayout small({2, 2, 3});
  CHECK_THROWS_AS(
      dts::transfer_fidelity(ComplexMatrix::Identity(12, 12) / 12.0, small,
                             1.0, 0.0),
      dts::ContractViolation);
}

TEST_CASE("negative amplitudes are honored with their sign") {
  SpaceLayout layout({2, 2, 2, 2, 3});
  const double amp = 1.0 / std::sqrt(2.0);
  const ComplexMatrix rho = receiver_state(layout, amp, -amp);
  CHECK(dts::transfer_fidelity(rho, layout, amp, -amp).fixed_phase ==
        doctest::Approx(1.0).epsilon(1e-12));
  // Against the opposite sign the branches interfere destructively.
  CHECK(dts::transfer_fidelity(rho, layout, amp, amp).fixed_phase ==
        doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("logical populations read a reduced qubit pair") {
  SpaceLayout layout({2, 2, 2, 2, 3});
  const double alpha = std::sqrt(0.3), beta = std::sqrt(0.7);
  // Senders: excitation shared between qubits 1 and 3.
  ComplexVector v = ComplexVector::Zero(layout.total_dim());
  v(layout.flat_index({0, 1, 1, 1, 0})) = alpha;
  v(layout.flat_index({1, 1, 0, 1, 0})) = beta;
  const auto ls = dts::logical_populations(pure(v), layout, 0, 2);
  CHECK(ls.p_first == doctest::Approx(alpha * alpha).epsilon(1e-12));
  CHECK(ls.p_second == doctest::Approx(beta * beta).epsilon(1e-12));
  CHECK(std::abs(ls.coherence - Complex(alpha * beta, 0.0)) < 1e-12);
  CHECK_THROWS_AS(dts::logical_populations(pure(v), layout, 2, 0),
                  dts::ContractViolation);
  CHECK_THROWS_AS(dts::logical_populations(pure(v), layout, 1, 4),
                  dts::ContractViolation);
}
