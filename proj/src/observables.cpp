#include "dts/observables.hpp"

#include <cmath>
#include <string>

#include "dts/errors.hpp"

namespace dts {

namespace {

void require_square_match(const ComplexMatrix& rho, const ComplexMatrix& op,
                          const char* who) {
  if (rho.rows() != rho.cols() || op.rows() != op.cols() ||
      rho.rows() != op.rows()) {
    throw ShapeError(std::string(who) + ": operand dimensions disagree");
  }
}

void require_state_dims(const ComplexMatrix& rho, const SpaceLayout& layout,
                        const char* who) {
  if (rho.rows() != rho.cols() || rho.rows() != layout.total_dim()) {
    throw ShapeError(std::string(who) + ": rho does not match layout");
  }
}

void require_qubit(const SpaceLayout& layout, std::size_t site,
                   const char* who) {
  if (site >= layout.factors() || layout.dim(site) != 2) {
    throw ContractViolation(std::string(who) + ": site " +
                            std::to_string(site) + " is not a qubit factor");
  }
}

}  // namespace

double expectation(const ComplexMatrix& rho, const ComplexMatrix& op) {
  require_square_match(rho, op, "expectation");
  const double op_scale = std::max(1.0, max_abs(op));
  if (hermiticity_defect(op) > 1e-10 * op_scale) {
    throw ContractViolation("expectation: operator is not Hermitian");
  }
  const Complex val = (rho * op).trace();
  if (std::abs(val.imag()) > 1e-9 * std::max(1.0, std::abs(val.real()))) {
    throw NumericalError("expectation: imaginary residue " +
                         std::to_string(val.imag()) +
                         " exceeds noise threshold");
  }
  return val.real();
}

Complex expectation_complex(const ComplexMatrix& rho,
                            const ComplexMatrix& op) {
  require_square_match(rho, op, "expectation_complex");
  return (rho * op).trace();
}

double purity(const ComplexMatrix& rho) {
  if (rho.rows() != rho.cols()) {
    throw ShapeError("purity: rho must be square");
  }
  return rho.squaredNorm();
}

ComplexMatrix excitation_projector(const SpaceLayout& layout,
                                   std::size_t site) {
  require_qubit(layout, site, "excitation_projector");
  ComplexMatrix p = ComplexMatrix::Zero(2, 2);
  p(0, 0) = 1.0;
  return embed(layout, p, site);
}

ComplexMatrix number_operator(const SpaceLayout& layout) {
  const std::size_t last = layout.factors() - 1;
  const Eigen::Index dim = layout.dim(last);
  if (dim < 2) {
    throw ContractViolation("number_operator: last factor too small");
  }
  const ComplexMatrix a = annihilator(FockCutoff{static_cast<int>(dim) - 1});
  return embed(layout, a.adjoint() * a, last);
}

FidelityResult transfer_fidelity(const ComplexMatrix& rho,
                                 const SpaceLayout& layout, double alpha,
                                 double beta) {
  require_state_dims(rho, layout, "transfer_fidelity");
  if (layout.factors() != 5) {
    throw ContractViolation(
        "transfer_fidelity: layout must be four qubits plus a cavity");
  }
  for (std::size_t q = 0; q < 4; ++q) {
    require_qubit(layout, q, "transfer_fidelity");
  }
  if (!std::isfinite(alpha) || !std::isfinite(beta) ||
      std::abs(alpha * alpha + beta * beta - 1.0) > 1e-9) {
    throw ContractViolation(
        "transfer_fidelity: amplitudes must satisfy a^2 + b^2 = 1");
  }

  // Branch u: excitation on qubit 2. Branch v: excitation on qubit 4.
  // Qubit level 0 = up; the fifth digit runs over Fock levels.
  const Eigen::Index n_levels = layout.dim(4);
  Complex r_uu(0.0, 0.0), r_vv(0.0, 0.0), r_uv(0.0, 0.0);
  for (Eigen::Index n = 0; n < n_levels; ++n) {
    const Eigen::Index u = layout.flat_index({1, 0, 1, 1, n});
    const Eigen::Index v = layout.flat_index({1, 1, 1, 0, n});
    r_uu += rho(u, u);
    r_vv += rho(v, v);
    r_uv += rho(u, v);
  }

  const double diag = alpha * alpha * r_uu.real() +
                      beta * beta * r_vv.real();
  FidelityResult out;
  out.fixed_phase = diag + 2.0 * alpha * beta * r_uv.real();
  out.phase_optimized =
      diag + 2.0 * std::abs(alpha * beta) * std::abs(r_uv);
  return out;
}

FidelityResult bell_fidelity(const ComplexMatrix& rho,
                             const SpaceLayout& layout) {
  const double amp = 1.0 / std::sqrt(2.0);
  return transfer_fidelity(rho, layout, amp, amp);
}

LogicalState logical_populations(const ComplexMatrix& rho,
                                 const SpaceLayout& layout,
                                 std::size_t site_a, std::size_t site_b) {
  require_state_dims(rho, layout, "logical_populations");
  require_qubit(layout, site_a, "logical_populations");
  require_qubit(layout, site_b, "logical_populations");
  if (site_a >= site_b) {
    throw ContractViolation("logical_populations: need site_a < site_b");
  }
  const ComplexMatrix red = partial_trace(rho, layout, {site_a, site_b});
  // Pair basis after the trace: (a, b) digits with level 0 = up, so
  // |up,down> sits at 0*2 + 1 = 1 and |down,up> at 1*2 + 0 = 2.
  LogicalState out;
  out.p_first = red(1, 1).real();
  out.p_second = red(2, 2).real();
  out.coherence = red(1, 2);
  return out;
}

}  // namespace dts
