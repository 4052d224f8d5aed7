#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "dts/config.hpp"
#include "dts/dynamics.hpp"
#include "dts/hilbert.hpp"

namespace dts {

// Pure state described by cfg.initial_state (cavity in vacuum).
ComplexVector initial_state_vector(const ExperimentConfig& cfg,
                                   const SpaceLayout& layout);

// First upward crossing of `level`, linearly interpolated between
// samples; t[0] if the series starts at or above the level, NaN if it
// never reaches it.
double first_crossing(const std::vector<double>& times,
                      const std::vector<double>& values, double level);

// Explicit-integration horizon when cfg does not pin one: a few
// relaxation times of the predicted transfer rate, clamped to a
// generic window.
double auto_horizon(const ModelParams& params, const IntegratorConfig& integ,
                    double t_final);

struct ExperimentOutput {
  std::vector<std::string> files;
};

// Two-qubit excitation transfer: timeseries.csv with qubit and cavity
// populations, summary.csv with the steady state versus the dressed
// prediction.
ExperimentOutput run_energy_transfer(const ExperimentConfig& cfg,
                                     const std::string& out_dir);

// Four-qubit superposition transfer: timeseries.csv with branch
// populations, coherence, and fidelity; summary.csv with steady
// fidelities and the pair-resolved logical state.
ExperimentOutput run_state_transfer(const ExperimentConfig& cfg,
                                    const std::string& out_dir);

// One steady-state solve per sweep value; sweep.csv rows keep the
// input order regardless of worker count.
ExperimentOutput run_sweep(const ExperimentConfig& cfg,
                           const std::string& out_dir, int workers);

// Closed-form diagnostics for the configured model, as key = value
// lines.
void run_eigen_report(const ExperimentConfig& cfg, std::ostream& out);

// Self-checks with pinned tolerances; prints one line per check and
// returns true only if all pass.
bool run_validate(std::ostream& out);

}  // namespace dts
