#pragma once

#include <cstddef>

#include "dts/hilbert.hpp"
#include "dts/linalg.hpp"

namespace dts {

// Tr(rho * op) for Hermitian op; the imaginary residue must be
// numerical noise (< 1e-9 relative) or the call throws.
double expectation(const ComplexMatrix& rho, const ComplexMatrix& op);

// Tr(rho * op) for arbitrary op.
Complex expectation_complex(const ComplexMatrix& rho,
                            const ComplexMatrix& op);

// Tr(rho^2) evaluated as the squared Frobenius norm.
double purity(const ComplexMatrix& rho);

// Projector onto the excited level of one qubit factor, embedded in
// the full space.
ComplexMatrix excitation_projector(const SpaceLayout& layout,
                                   std::size_t site);

// Photon number operator of the cavity (last factor), embedded in the
// full space.
ComplexMatrix number_operator(const SpaceLayout& layout);

// Overlap with the target alpha|down,up,down,down> + beta|down,down,
// down,up> on the four qubit factors, cavity traced out. fixed_phase
// keeps the coherence as delivered; phase_optimized reports the best
// fidelity over a relative phase between the two branches.
struct FidelityResult {
  double fixed_phase = 0.0;
  double phase_optimized = 0.0;
};

FidelityResult transfer_fidelity(const ComplexMatrix& rho,
                                 const SpaceLayout& layout, double alpha,
                                 double beta);

// transfer_fidelity at alpha = beta = 1/sqrt(2).
FidelityResult bell_fidelity(const ComplexMatrix& rho,
                             const SpaceLayout& layout);

// Reduced one-excitation data for a qubit pair: populations of
// |up,down> and |down,up> plus the cross coherence between them.
struct LogicalState {
  double p_first = 0.0;   // site_a excited, site_b down
  double p_second = 0.0;  // site_b excited, site_a down
  Complex coherence{0.0, 0.0};
};

LogicalState logical_populations(const ComplexMatrix& rho,
                                 const SpaceLayout& layout,
                                 std::size_t site_a, std::size_t site_b);

}  // namespace dts
