#include "dts/model.hpp"

#include <cmath>
#include <string>

namespace dts {

namespace {

void check_common(const ModelParams& p) {
  if (p.qubits != 2 && p.qubits != 4) {
    throw ContractViolation("model: qubits must be 2 or 4, got " +
                            std::to_string(p.qubits));
  }
  if (static_cast<int>(p.detunings.size()) != p.qubits) {
    throw ContractViolation("model: expected " + std::to_string(p.qubits) +
                            " detunings, got " +
                            std::to_string(p.detunings.size()));
  }
  if (static_cast<int>(p.couplings.size()) != p.qubits) {
    throw ContractViolation("model: expected " + std::to_string(p.qubits) +
                            " couplings, got " +
                            std::to_string(p.couplings.size()));
  }
  if (p.kappa < 0.0) {
    throw ContractViolation("model: kappa must be >= 0");
  }
  if (p.n_max < 1) {
    throw ContractViolation("model: n_max must be >= 1");
  }
  for (double v : p.detunings) {
    if (!std::isfinite(v)) throw ContractViolation("model: detuning not finite");
  }
  for (double v : p.couplings) {
    if (!std::isfinite(v)) throw ContractViolation("model: coupling not finite");
  }
  if (!std::isfinite(p.g) || !std::isfinite(p.omega_c) ||
      !std::isfinite(p.kappa)) {
    throw ContractViolation("model: scalar parameter not finite");
  }
}

void check_pairing(const ModelParams& p) {
  const bool ok = p.detunings[0] == p.detunings[2] &&
                  p.detunings[1] == p.detunings[3] &&
                  p.couplings[0] == p.couplings[2] &&
                  p.couplings[1] == p.couplings[3];
  if (!ok) {
    throw ContractViolation(
        "model: four-qubit pairing constraints violated "
        "(need d1 = d3, d2 = d4, J1 = J3, J2 = J4)");
  }
}

SystemOperators assemble(const ModelParams& p,
                         const std::vector<std::pair<int, int>>& ff_pairs) {
  std::vector<Eigen::Index> dims(p.qubits, 2);
  dims.push_back(p.n_max + 1);
  SpaceLayout layout(dims);
  const Eigen::Index d = layout.total_dim();
  const std::size_t cavity = layout.factors() - 1;

  ComplexMatrix h = ComplexMatrix::Zero(d, d);

  const ComplexMatrix sz = sigma_z();
  for (int j = 0; j < p.qubits; ++j) {
    h += (kTwoPi * p.detunings[j] / 2.0) * embed(layout, sz, j);
  }

  for (auto [a, b] : ff_pairs) {
    ComplexMatrix hop = embed(layout, sigma_plus(), a) *
                        embed(layout, sigma_minus(), b);
    h += kTwoPi * p.g * (hop + hop.adjoint());
  }

  const ComplexMatrix a_op = embed(layout, annihilator(FockCutoff{p.n_max}),
                                   cavity);
  h += kTwoPi * p.omega_c * (a_op.adjoint() * a_op);

  ComplexMatrix zsum = ComplexMatrix::Zero(d, d);
  for (int j = 0; j < p.qubits; ++j) {
    zsum += kTwoPi * p.couplings[j] * embed(layout, sz, j);
  }
  h += (a_op + a_op.adjoint()) * zsum;

  ComplexMatrix collapse = std::sqrt(kTwoPi * p.kappa) * a_op;
  return SystemOperators{std::move(h), std::move(collapse), std::move(layout)};
}

}  // namespace

void validate(const ModelParams& p) {
  check_common(p);
  if (p.qubits == 4 && p.paired) {
    check_pairing(p);
  }
}

ComplexMatrix sigma_z() {
  ComplexMatrix m(2, 2);
  m << 1.0, 0.0, 0.0, -1.0;
  return m;
}

ComplexMatrix sigma_plus() {
  ComplexMatrix m(2, 2);
  m << 0.0, 1.0, 0.0, 0.0;
  return m;
}

ComplexMatrix sigma_minus() {
  ComplexMatrix m(2, 2);
  m << 0.0, 0.0, 1.0, 0.0;
  return m;
}

SystemOperators build_two_qubit(const ModelParams& p) {
  if (p.qubits != 2) {
    throw ContractViolation("build_two_qubit: params declare " +
                            std::to_string(p.qubits) + " qubits");
  }
  check_common(p);
  return assemble(p, {{0, 1}});
}

SystemOperators build_four_qubit(const ModelParams& p) {
  if (p.qubits != 4) {
    throw ContractViolation("build_four_qubit: params declare " +
                            std::to_string(p.qubits) + " qubits");
  }
  check_common(p);
  if (p.paired) check_pairing(p);
  return assemble(p, {{0, 1}, {2, 3}});
}

SystemOperators build_model(const ModelParams& p) {
  return p.qubits == 2 ? build_two_qubit(p) : build_four_qubit(p);
}

ComplexMatrix total_sigma_z(const SpaceLayout& layout) {
  const Eigen::Index d = layout.total_dim();
  ComplexMatrix out = ComplexMatrix::Zero(d, d);
  const ComplexMatrix sz = sigma_z();
  for (std::size_t k = 0; k + 1 < layout.factors(); ++k) {
    out += embed(layout, sz, k);
  }
  return out;
}

}  // namespace dts
