#include "dts/hilbert.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace dts {

SpaceLayout::SpaceLayout(std::vector<Eigen::Index> dims)
    : dims_(std::move(dims)) {
  if (dims_.empty()) {
    throw ShapeError("SpaceLayout: no factors");
  }
  for (Eigen::Index d : dims_) {
    if (d < 2) {
      throw ShapeError("SpaceLayout: factor dimension " + std::to_string(d) +
                       " < 2");
    }
  }
  // Every factor except the last (cavity slot) must be a qubit.
  for (std::size_t k = 0; k + 1 < dims_.size(); ++k) {
    if (dims_[k] != 2) {
      throw ShapeError("SpaceLayout: non-qubit factor at position " +
                       std::to_string(k) + "; only the last factor may be "
                       "larger than 2");
    }
  }
  strides_.assign(dims_.size(), 1);
  for (std::size_t k = dims_.size(); k-- > 1;) {
    strides_[k - 1] = strides_[k] * dims_[k];
  }
  total_ = strides_[0] * dims_[0];
}

Eigen::Index SpaceLayout::flat_index(
    const std::vector<Eigen::Index>& digits) const {
  if (digits.size() != dims_.size()) {
    throw ShapeError("flat_index: " + std::to_string(digits.size()) +
                     " digits for " + std::to_string(dims_.size()) +
                     " factors");
  }
  Eigen::Index flat = 0;
  for (std::size_t k = 0; k < dims_.size(); ++k) {
    if (digits[k] < 0 || digits[k] >= dims_[k]) {
      throw ShapeError("flat_index: digit " + std::to_string(digits[k]) +
                       " out of range for factor " + std::to_string(k));
    }
    flat += digits[k] * strides_[k];
  }
  return flat;
}

std::vector<Eigen::Index> SpaceLayout::unflatten(Eigen::Index flat) const {
  if (flat < 0 || flat >= total_) {
    throw ShapeError("unflatten: index " + std::to_string(flat) +
                     " outside space of dim " + std::to_string(total_));
  }
  std::vector<Eigen::Index> digits(dims_.size());
  for (std::size_t k = 0; k < dims_.size(); ++k) {
    digits[k] = flat / strides_[k];
    flat -= digits[k] * strides_[k];
  }
  return digits;
}

ComplexMatrix embed(const SpaceLayout& layout, const ComplexMatrix& op,
                    std::size_t site) {
  if (site >= layout.factors()) {
    throw ShapeError("embed: site " + std::to_string(site) + " of " +
                     std::to_string(layout.factors()) + " factors");
  }
  if (op.rows() != op.cols() || op.rows() != layout.dim(site)) {
    throw ShapeError("embed: operator dim " + std::to_string(op.rows()) +
                     " does not match factor dim " +
                     std::to_string(layout.dim(site)));
  }
  ComplexMatrix out = ComplexMatrix::Identity(1, 1);
  for (std::size_t k = 0; k < layout.factors(); ++k) {
    if (k == site) {
      out = kron(out, op);
    } else {
      const Eigen::Index d = layout.dim(k);
      out = kron(out, ComplexMatrix::Identity(d, d));
    }
  }
  return out;
}

ComplexMatrix annihilator(const FockCutoff& cutoff) {
  if (cutoff.n_max < 1) {
    throw ShapeError("annihilator: n_max must be >= 1");
  }
  const Eigen::Index d = cutoff.n_max + 1;
  ComplexMatrix a = ComplexMatrix::Zero(d, d);
  for (Eigen::Index n = 1; n < d; ++n) {
    a(n - 1, n) = std::sqrt(static_cast<double>(n));
  }
  return a;
}

ComplexVector basis_state(const SpaceLayout& layout,
                          const std::vector<Eigen::Index>& digits) {
  ComplexVector v = ComplexVector::Zero(layout.total_dim());
  v(layout.flat_index(digits)) = Complex(1.0, 0.0);
  return v;
}

ComplexMatrix partial_trace(const ComplexMatrix& rho,
                            const SpaceLayout& layout,
                            const std::vector<std::size_t>& keep) {
  if (rho.rows() != rho.cols() || rho.rows() != layout.total_dim()) {
    throw ShapeError("partial_trace: rho dim " + std::to_string(rho.rows()) +
                     " does not match layout dim " +
                     std::to_string(layout.total_dim()));
  }
  if (!std::is_sorted(keep.begin(), keep.end()) ||
      std::adjacent_find(keep.begin(), keep.end()) != keep.end()) {
    throw ShapeError("partial_trace: keep list must be strictly increasing");
  }
  std::vector<bool> kept(layout.factors(), false);
  for (std::size_t site : keep) {
    if (site >= layout.factors()) {
      throw ShapeError("partial_trace: keep site " + std::to_string(site) +
                       " out of range");
    }
    kept[site] = true;
  }

  std::vector<std::size_t> traced;
  for (std::size_t k = 0; k < layout.factors(); ++k) {
    if (!kept[k]) traced.push_back(k);
  }

  Eigen::Index dim_keep = 1;
  for (std::size_t site : keep) dim_keep *= layout.dim(site);
  Eigen::Index dim_traced = 1;
  for (std::size_t site : traced) dim_traced *= layout.dim(site);

  // Mixed-radix digit expansion of the kept / traced sub-labels.
  auto split_digits = [&](Eigen::Index sub, const std::vector<std::size_t>&
                                                 sites) {
    std::vector<Eigen::Index> digits(sites.size());
    for (std::size_t k = sites.size(); k-- > 0;) {
      digits[k] = sub % layout.dim(sites[k]);
      sub /= layout.dim(sites[k]);
    }
    return digits;
  };

  std::vector<Eigen::Index> full(layout.factors());
  auto flat_of = [&](const std::vector<Eigen::Index>& keep_digits,
                     const std::vector<Eigen::Index>& traced_digits) {
    for (std::size_t k = 0; k < keep.size(); ++k) full[keep[k]] = keep_digits[k];
    for (std::size_t k = 0; k < traced.size(); ++k)
      full[traced[k]] = traced_digits[k];
    return layout.flat_index(full);
  };

  ComplexMatrix out = ComplexMatrix::Zero(dim_keep, dim_keep);
  for (Eigen::Index i = 0; i < dim_keep; ++i) {
    const auto di = split_digits(i, keep);
    for (Eigen::Index j = 0; j < dim_keep; ++j) {
      const auto dj = split_digits(j, keep);
      Complex acc(0.0, 0.0);
      for (Eigen::Index m = 0; m < dim_traced; ++m) {
        const auto dm = split_digits(m, traced);
        acc += rho(flat_of(di, dm), flat_of(dj, dm));
      }
      out(i, j) = acc;
    }
  }
  return out;
}

}  // namespace dts
