#pragma once

#include <vector>

#include "dts/hilbert.hpp"
#include "dts/linalg.hpp"

namespace dts {

// All user-facing frequencies are divided by 2*pi ("f-units"); operators
// are assembled in angular units (multiplied by kTwoPi) with hbar = 1.
// Time is measured in inverse f-units.
inline constexpr double kTwoPi = 6.283185307179586476925286766559;

struct ModelParams {
  int qubits = 2;                 // 2 or 4
  std::vector<double> detunings;  // qubit splittings, f-units, one per qubit
  double g = 0.0;                 // flip-flop strength, f-units
  double omega_c = 0.0;           // cavity frequency, f-units
  std::vector<double> couplings;  // longitudinal couplings J_j, f-units
  double kappa = 0.0;             // cavity decay rate, f-units
  int n_max = 6;                  // Fock cutoff (cavity dim n_max + 1)
  bool paired = true;             // enforce the four-qubit pairing constraints
};

// Throws ContractViolation on inconsistent parameters.
void validate(const ModelParams& params);

struct SystemOperators {
  ComplexMatrix hamiltonian;  // angular units, Hermitian
  ComplexMatrix collapse;     // sqrt(2*pi*kappa) * a, embedded in full space
  SpaceLayout layout;
};

// Pauli z in the up/down basis (up = level 0).
ComplexMatrix sigma_z();
ComplexMatrix sigma_plus();
ComplexMatrix sigma_minus();

// Two qubits exchanging one excitation, both coupled longitudinally to a
// lossy cavity. Layout: (2, 2, n_max+1).
SystemOperators build_two_qubit(const ModelParams& params);

// Four qubits with flip-flop on pairs (1,2) and (3,4) and a shared lossy
// cavity. Requires the pairing constraints d1 = d3, d2 = d4, J1 = J3,
// J2 = J4. Layout: (2, 2, 2, 2, n_max+1).
SystemOperators build_four_qubit(const ModelParams& params);

// Dispatch on params.qubits.
SystemOperators build_model(const ModelParams& params);

// Sum_j sigma_z^(j), embedded in the full space of `layout` (qubit
// factors only). Conserved by both model Hamiltonians.
ComplexMatrix total_sigma_z(const SpaceLayout& layout);

}  // namespace dts
