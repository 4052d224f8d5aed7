#pragma once

#include <array>

#include "dts/linalg.hpp"
#include "dts/model.hpp"

namespace dts {

// Closed-form eigensystem of one flip-flop qubit pair (no cavity).
// Basis order for `vectors` columns: uu, ud, du, dd. Energies are in
// angular units and satisfy E1 = -E4 and E2 = -E3.
struct EigenSystem {
  double theta = 0.0;                  // mixing angle in [0, pi)
  std::array<double, 4> energies{};    // E1..E4, angular units
  ComplexMatrix vectors;               // 4x4, column k is |E_{k+1}>
};

// delta1, delta2, g in f-units. Throws ContractViolation when the pair
// is fully degenerate (delta1 == delta2 and g == 0), where the mixing
// angle is undefined.
EigenSystem analytic_eigensystem(double delta1, double delta2, double g);

// Uses the first pair of `params` (identical to the second pair under
// the four-qubit pairing constraints).
EigenSystem analytic_eigensystem(const ModelParams& params);

struct DeviationReport {
  double max_energy_dev = 0.0;  // angular units
  double max_vector_dev = 0.0;  // norm distance to the numeric eigenspace
};

// Compares the closed form against a numeric eigh of the assembled
// 4x4 pair Hamiltonian.
DeviationReport verify_against_numeric(double delta1, double delta2,
                                       double g);

// Matrix elements of the longitudinal coupling sum J1 sz1 + J2 sz2
// between dressed states, angular units. m23 drives the dissipative
// transfer; m12 and m34 vanish, which pins the one-way direction.
struct TransitionElements {
  double m23 = 0.0;
  double m34 = 0.0;
  double m12 = 0.0;
};

TransitionElements transition_elements(const EigenSystem& es, double j1,
                                       double j2);

// |omega_c - (E2 - E3)/2pi| in f-units: mismatch between the cavity and
// the dressed splitting it must absorb.
double resonance_detuning(const EigenSystem& es, double omega_c);

// Steady-state excitation probability of the receiving qubit predicted
// by the dressed-state picture: cos^2(theta/2).
double dressed_transfer_probability(const EigenSystem& es);

// Cavity-mediated decay rate of the bright dressed state, angular
// units: m23^2 * kappa / (mismatch^2 + (kappa/2)^2). Zero when kappa
// or m23 vanishes. Used to size integration horizons.
double effective_transfer_rate(const EigenSystem& es, double j1, double j2,
                               double omega_c, double kappa);
double effective_transfer_rate(const ModelParams& params);

}  // namespace dts
