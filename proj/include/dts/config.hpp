#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "dts/dynamics.hpp"
#include "dts/model.hpp"

namespace dts {

// Fully resolved run description. Every field has a concrete value
// after parsing; "auto" choices are resolved at load time so the
// canonical echo below pins the run completely.
struct ExperimentConfig {
  ModelParams model;

  // Initial state: "excited_first" / "excited_second" put the single
  // excitation on that qubit of a two-qubit model; "branch" prepares
  // alpha |q1 excited> + beta |q3 excited> on a four-qubit model. The
  // cavity always starts in vacuum.
  std::string initial_state = "excited_first";
  double alpha = 0.70710678118654752;
  double beta = 0.70710678118654752;

  IntegratorConfig integrator;
  double t_final = 3.0;

  std::string sweep_axis;  // empty: no sweep section
  std::vector<double> sweep_values;
};

// Parse a config file (INI-style: [section], key = value, '#' starts a
// comment, lists are space separated). Unknown sections or keys and
// malformed values raise ConfigError.
ExperimentConfig load_config(const std::string& path);
ExperimentConfig parse_config_text(const std::string& text);

// Canonical echo of a resolved config: fixed section and key order,
// full-precision numbers. Two configs with equal echoes run the same
// experiment.
std::string resolved_text(const ExperimentConfig& cfg);

// FNV-1a (64-bit) over resolved_text, as 16 hex digits.
std::string config_hash(const ExperimentConfig& cfg);

}  // namespace dts
