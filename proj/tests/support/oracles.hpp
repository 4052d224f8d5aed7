#pragma once

// Slow reference implementations used only by the tests. Everything here is
// written with plain loops so that agreement with the library is meaningful.

#include <complex>
#include <cstdint>
#include <random>
#include <vector>

#include "dts/linalg.hpp"

namespace oracle {

inline dts::ComplexMatrix naive_matmul(const dts::ComplexMatrix& a,
                                       const dts::ComplexMatrix& b) {
  dts::ComplexMatrix out = dts::ComplexMatrix::Zero(a.rows(), b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index k = 0; k < a.cols(); ++k)
      for (Eigen::Index j = 0; j < b.cols(); ++j)
        out(i, j) += a(i, k) * b(k, j);
  return out;
}

// Scaling-and-squaring Taylor series. Adequate for the small, well-scaled
// matrices the tests feed it; not a general-purpose expm.
inline dts::ComplexMatrix taylor_expm(const dts::ComplexMatrix& m) {
  const Eigen::Index n = m.rows();
  double mx = 0.0;
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) mx = std::max(mx, std::abs(m(i, j)));
  int squarings = 0;
  double scale = mx * static_cast<double>(n);
  while (scale > 0.5 && squarings < 40) {
    scale *= 0.5;
    ++squarings;
  }
  dts::ComplexMatrix t = m / std::pow(2.0, squarings);
  dts::ComplexMatrix term = dts::ComplexMatrix::Identity(n, n);
  dts::ComplexMatrix sum = term;
  for (int k = 1; k <= 30; ++k) {
    term = naive_matmul(term, t) / static_cast<double>(k);
    sum += term;
  }
  for (int s = 0; s < squarings; ++s) sum = naive_matmul(sum, sum);
  return sum;
}

// Mixed-radix flat index with the leftmost digit slowest.
inline std::int64_t flat_index_oracle(const std::vector<std::int64_t>& dims,
                                      const std::vector<std::int64_t>& digits) {
  std::int64_t flat = 0;
  for (std::size_t k = 0; k < dims.size(); ++k) flat = flat * dims[k] + digits[k];
  return flat;
}

inline dts::ComplexMatrix random_matrix(std::mt19937& rng, Eigen::Index n) {
  std::normal_distribution<double> dist(0.0, 1.0);
  dts::ComplexMatrix m(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) m(i, j) = dts::Complex(dist(rng), dist(rng));
  return m;
}

inline dts::ComplexMatrix random_hermitian(std::mt19937& rng, Eigen::Index n) {
  dts::ComplexMatrix m = random_matrix(rng, n);
  return dts::ComplexMatrix(0.5 * (m + m.adjoint()));
}

// Random density matrix: normalized Wishart-like positive matrix.
inline dts::ComplexMatrix random_density(std::mt19937& rng, Eigen::Index n) {
  dts::ComplexMatrix m = random_matrix(rng, n);
  dts::ComplexMatrix rho = m * m.adjoint();
  rho /= rho.trace();
  return rho;
}

// Contraction over the complement of `keep` done with explicit digit loops,
// independent of the library's stride bookkeeping.
inline dts::ComplexMatrix partial_trace_oracle(
    const dts::ComplexMatrix& rho, const std::vector<std::int64_t>& dims,
    const std::vector<std::size_t>& keep) {
  std::vector<bool> kept(dims.size(), false);
  for (std::size_t k : keep) kept[k] = true;
  std::int64_t kept_dim = 1;
  for (std::size_t k = 0; k < dims.size(); ++k)
    if (kept[k]) kept_dim *= dims[k];
  std::int64_t total = 1;
  for (auto d : dims) total *= d;

  auto digits_of = [&](std::int64_t flat) {
    std::vector<std::int64_t> digits(dims.size());
    for (std::size_t k = dims.size(); k-- > 0;) {
      digits[k] = flat % dims[k];
      flat /= dims[k];
    }
    return digits;
  };
  auto kept_index = [&](const std::vector<std::int64_t>& digits) {
    std::int64_t flat = 0;
    for (std::size_t k = 0; k < dims.size(); ++k)
      if (kept[k]) flat = flat * dims[k] + digits[k];
    return flat;
  };

  dts::ComplexMatrix out = dts::ComplexMatrix::Zero(kept_dim, kept_dim);
  for (std::int64_t r = 0; r < total; ++r) {
    const auto dr = digits_of(r);
    for (std::int64_t c = 0; c < total; ++c) {
      const auto dc = digits_of(c);
      bool traced_match = true;
      for (std::size_t k = 0; k < dims.size(); ++k)
        if (!kept[k] && dr[k] != dc[k]) traced_match = false;
      if (traced_match) out(kept_index(dr), kept_index(dc)) += rho(r, c);
    }
  }
  return out;
}

}  // namespace oracle
