#pragma once

#include <map>
#include <string>
#include <vector>

#include "dts/linalg.hpp"

namespace dts {

struct IntegratorConfig {
  double rel_tol = 1e-8;
  double abs_tol = 1e-10;
  double max_step = 0.0;       // 0 = no cap
  double record_stride = 0.0;  // 0 = record endpoints only
  double ss_tol = 1e-9;        // steady-state residual threshold (max-norm)
  double horizon = 0.0;        // cap on explicitly integrated time; 0 = 1e4
  // Integrate only the block of basis states reachable from rho0 through
  // the nonzero pattern of H and the collapse operator. Exact: amplitudes
  // outside the block are identically zero under the flow.
  bool exploit_support = true;
  // Finish steady-state chases with L-stable implicit steps on the
  // vectorized generator once the fast transient has been integrated
  // explicitly. The implicit iteration converges to the same invariant
  // state the flow relaxes to and its pseudo-time does not count
  // against the horizon. Trajectories are always explicit RK.
  bool implicit_tail = true;
};

struct Observable {
  std::string name;
  ComplexMatrix op;
};

struct Trajectory {
  std::vector<double> times;
  std::map<std::string, std::vector<double>> records;
  std::vector<ComplexMatrix> states;  // filled when keep_states is set
};

struct SteadyStateResult {
  ComplexMatrix rho;
  double t_reached = 0.0;
  double residual = 0.0;  // max-norm of the generator at rho
  bool converged = false;
};

// drho/dt = -i[H, rho] - (1/2){L^dag L, rho} + L rho L^dag.
// Direct dense evaluation; the integrator uses a sparse equivalent.
ComplexMatrix lindblad_rhs(const ComplexMatrix& h,
                           const ComplexMatrix& collapse,
                           const ComplexMatrix& rho);

// Integrate rho0 to t_final recording `observables` every record_stride
// time units (endpoints always included). Throws IntegrityError when
// trace, Hermiticity, or positivity drift past tolerance at a recorded
// point, IntegrationError on step-size underflow.
Trajectory evolve(const ComplexMatrix& h, const ComplexMatrix& collapse,
                  const ComplexMatrix& rho0, double t_final,
                  const IntegratorConfig& cfg,
                  const std::vector<Observable>& observables = {},
                  bool keep_states = false);

// Relax rho0 until the generator max-norm drops below cfg.ss_tol.
// Explicit integration gives up at the horizon; with the implicit tail
// enabled the chase may conclude beyond it on the tail's own clock, and
// t_reached then reports that extended clock. converged reflects the
// final residual only. Persistent oscillations (possible only without
// dissipation, or from initial coherence between invariant states of
// unequal energy) never settle; the tail is disabled for the first
// case, and for the second it would return the oscillation's average.
SteadyStateResult steady_state(const ComplexMatrix& h,
                               const ComplexMatrix& collapse,
                               const ComplexMatrix& rho0,
                               const IntegratorConfig& cfg);

// One pass covering both needs of the experiment drivers: a recorded
// trajectory on [0, t_record] and the steady state reached afterwards.
struct EvolveToSteadyResult {
  Trajectory trajectory;
  SteadyStateResult steady;
};

EvolveToSteadyResult evolve_to_steady(const ComplexMatrix& h,
                                      const ComplexMatrix& collapse,
                                      const ComplexMatrix& rho0,
                                      double t_record,
                                      const IntegratorConfig& cfg,
                                      const std::vector<Observable>&
                                          observables = {});

}  // namespace dts
