#pragma once

#include <vector>

#include "dts/linalg.hpp"

namespace dts {

// Cavity truncation: kept Fock levels are 0..n_max.
struct FockCutoff {
  int n_max = 6;
};

// Ordered tensor-product factors. The leftmost factor is the slowest
// index when labels are flattened; the cavity, when present, is the
// last factor. Qubit levels: index 0 = up, index 1 = down.
class SpaceLayout {
 public:
  explicit SpaceLayout(std::vector<Eigen::Index> dims);

  std::size_t factors() const { return dims_.size(); }
  Eigen::Index dim(std::size_t k) const { return dims_.at(k); }
  Eigen::Index total_dim() const { return total_; }
  const std::vector<Eigen::Index>& dims() const { return dims_; }

  // flat = sum_k digits[k] * stride[k], stride[last] = 1.
  Eigen::Index flat_index(const std::vector<Eigen::Index>& digits) const;
  std::vector<Eigen::Index> unflatten(Eigen::Index flat) const;

 private:
  std::vector<Eigen::Index> dims_;
  std::vector<Eigen::Index> strides_;
  Eigen::Index total_ = 1;
};

// I (x) ... (x) op (x) ... (x) I with op acting on factor `site`.
ComplexMatrix embed(const SpaceLayout& layout, const ComplexMatrix& op,
                    std::size_t site);

// Truncated annihilation operator, a|n> = sqrt(n)|n-1>, dim n_max+1.
ComplexMatrix annihilator(const FockCutoff& cutoff);

// Unit vector for a product basis label.
ComplexVector basis_state(const SpaceLayout& layout,
                          const std::vector<Eigen::Index>& digits);

// Reduce rho to the factors listed in `keep` (strictly increasing),
// tracing out the rest. Kept factors stay in their original order.
ComplexMatrix partial_trace(const ComplexMatrix& rho,
                            const SpaceLayout& layout,
                            const std::vector<std::size_t>& keep);

}  // namespace dts
