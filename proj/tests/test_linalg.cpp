#include <cmath>
#include <random>

#include "doctest.h"
#include "dts/errors.hpp"
#include "dts/linalg.hpp"
#include "support/oracles.hpp"

using dts::Complex;
using dts::ComplexMatrix;

namespace {

ComplexMatrix sigma_x() {
  ComplexMatrix m(2, 2);
  m << 0, 1, 1, 0;
  return m;
}

}  // namespace

TEST_CASE("matmul matches the naive triple loop") {
  std::mt19937 rng(7);
  for (int trial = 0; trial < 5; ++trial) {
    const ComplexMatrix a = oracle::random_matrix(rng, 6);
    const ComplexMatrix b = oracle::random_matrix(rng, 6);
    CHECK(dts::max_abs(dts::matmul(a, b) - oracle::naive_matmul(a, b)) < 1e-12);
  }
}

TEST_CASE("matmul rejects mismatched shapes") {
  ComplexMatrix a = ComplexMatrix::Zero(2, 3);
  ComplexMatrix b = ComplexMatrix::Zero(2, 3);
  CHECK_THROWS_AS(dts::matmul(a, b), dts::ShapeError);
}

TEST_CASE("kron uses the left-factor-slowest convention") {
  std::mt19937 rng(11);
  const ComplexMatrix a = oracle::random_matrix(rng, 3);
  const ComplexMatrix b = oracle::random_matrix(rng, 4);
  const ComplexMatrix k = dts::kron(a, b);
  REQUIRE(k.rows() == 12);
  for (Eigen::Index i = 0; i < 3; ++i)
    for (Eigen::Index j = 0; j < 3; ++j)
      for (Eigen::Index p = 0; p < 4; ++p)
        for (Eigen::Index q = 0; q < 4; ++q)
          CHECK(std::abs(k(i * 4 + p, j * 4 + q) - a(i, j) * b(p, q)) < 1e-15);
}

TEST_CASE("kron satisfies the mixed-product identity") {
  std::mt19937 rng(13);
  const ComplexMatrix a = oracle::random_matrix(rng, 2);
  const ComplexMatrix b = oracle::random_matrix(rng, 3);
  const ComplexMatrix c = oracle::random_matrix(rng, 2);
  const ComplexMatrix d = oracle::random_matrix(rng, 3);
  const ComplexMatrix lhs = dts::matmul(dts::kron(a, b), dts::kron(c, d));
  const ComplexMatrix rhs = dts::kron(dts::matmul(a, c), dts::matmul(b, d));
  CHECK(dts::max_abs(lhs - rhs) < 1e-12);
}

TEST_CASE("eigh solves the two-level mixing block in closed form") {
  // H = [[D/2, G], [G, -D/2]] has eigenvalues +-sqrt(D^2 + 4 G^2)/2.
  const double two_pi = 2.0 * M_PI;
  const double d = 15.0 * two_pi;
  const double g = 1.0 * two_pi;
  ComplexMatrix h(2, 2);
  h << d / 2.0, g, g, -d / 2.0;
  const auto res = dts::eigh(h);
  const double split = std::sqrt(229.0) * M_PI;  // sqrt(d^2 + 4 g^2)/2
  CHECK(res.values(0) == doctest::Approx(-split).epsilon(1e-13));
  CHECK(res.values(1) == doctest::Approx(split).epsilon(1e-13));
  // Eigenvectors reconstruct the matrix.
  const ComplexMatrix rebuilt =
      res.vectors * res.values.asDiagonal() * res.vectors.adjoint();
  CHECK(dts::max_abs(rebuilt - h) < 1e-12 * dts::max_abs(h));
}

TEST_CASE("eigh returns ascending values and orthonormal vectors") {
  std::mt19937 rng(17);
  const ComplexMatrix h = oracle::random_hermitian(rng, 8);
  const auto res = dts::eigh(h);
  for (Eigen::Index i = 1; i < 8; ++i) CHECK(res.values(i) >= res.values(i - 1));
  const ComplexMatrix gram = res.vectors.adjoint() * res.vectors;
  CHECK(dts::max_abs(gram - ComplexMatrix::Identity(8, 8)) < 1e-12);
}

TEST_CASE("eigh rejects non-Hermitian input") {
  ComplexMatrix m(2, 2);
  m << 0, 1, 0, 0;
  CHECK_THROWS_AS(dts::eigh(m), dts::ContractViolation);
}

TEST_CASE("expm reproduces a quarter-turn qubit rotation") {
  // exp(i pi/2 sx) = i sx.
  const ComplexMatrix u = dts::expm(sigma_x(), Complex(0.0, M_PI / 2.0));
  ComplexMatrix expected = Complex(0.0, 1.0) * sigma_x();
  CHECK(dts::max_abs(u - expected) < 1e-13);
}

TEST_CASE("expm of zero is the identity") {
  const ComplexMatrix z = ComplexMatrix::Zero(3, 3);
  CHECK(dts::max_abs(dts::expm(z) - ComplexMatrix::Identity(3, 3)) < 1e-15);
}

TEST_CASE("expm agrees with a Taylor oracle on generic matrices") {
  std::mt19937 rng(19);
  for (int trial = 0; trial < 4; ++trial) {
    const ComplexMatrix m = oracle::random_matrix(rng, 5);
    CHECK(dts::max_abs(dts::expm(m) - oracle::taylor_expm(m)) < 1e-10);
  }
}

TEST_CASE("expm anti-Hermitian fast path produces a unitary") {
  std::mt19937 rng(23);
  const ComplexMatrix h = oracle::random_hermitian(rng, 6);
  const ComplexMatrix u = dts::expm(h, Complex(0.0, -0.37));
  const ComplexMatrix gram = u.adjoint() * u;
  CHECK(dts::max_abs(gram - ComplexMatrix::Identity(6, 6)) < 1e-12);
  CHECK(dts::max_abs(u - oracle::taylor_expm(Complex(0.0, -0.37) * h)) < 1e-10);
}

TEST_CASE("dagger, trace, max_abs, hermiticity_defect basics") {
  ComplexMatrix m(2, 2);
  m << Complex(1, 2), Complex(3, -4), Complex(0, 1), Complex(-2, 0);
  CHECK(dts::max_abs(dts::dagger(m) - m.adjoint().eval()) == 0.0);
  CHECK(std::abs(dts::trace(m) - Complex(-1, 2)) < 1e-15);
  CHECK(dts::max_abs(m) == doctest::Approx(5.0));
  std::mt19937 rng(29);
  CHECK(dts::hermiticity_defect(oracle::random_hermitian(rng, 4)) < 1e-15);
  CHECK(dts::hermiticity_defect(m) > 0.1);
}

TEST_CASE("all_finite flags NaN and infinity") {
  ComplexMatrix m = ComplexMatrix::Zero(2, 2);
  CHECK(dts::all_finite(m));
  m(0, 1) = Complex(std::nan(""), 0.0);
  CHECK(!dts::all_finite(m));
  m(0, 1) = Complex(0.0, std::numeric_limits<double>::infinity());
  CHECK(!dts::all_finite(m));
}
