#include <exception>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "dts/config.hpp"
#include "dts/errors.hpp"
#include "dts/experiments.hpp"

namespace {

void report_files(const dts::ExperimentOutput& out) {
  for (const std::string& f : out.files) std::cout << "wrote " << f << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "sim: dissipative one-way transfer through a lossy cavity.\n"
      "Solves the Lindblad dynamics of two or four qubits coupled to a\n"
      "decaying mode and reports transfer curves, steady states, and\n"
      "closed-form diagnostics."};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir;
  int workers = 1;
  bool print_config = false;

  CLI::App* energy =
      app.add_subcommand("energy", "Two-qubit excitation transfer run");
  CLI::App* state =
      app.add_subcommand("state", "Four-qubit superposition transfer run");
  CLI::App* sweep =
      app.add_subcommand("sweep", "Steady-state sweep over one parameter");
  CLI::App* eigen =
      app.add_subcommand("eigen", "Closed-form diagnostics for a config");
  CLI::App* validate =
      app.add_subcommand("validate", "Built-in self checks (no config)");

  for (CLI::App* sub : {energy, state, sweep, eigen}) {
    sub->add_option("--config", config_path, "Path to a run config file")
        ->required();
    sub->add_flag("--print-config", print_config,
                  "Echo the resolved config and its hash before running");
  }
  energy->add_option("--out", out_dir, "Output directory")
      ->default_val("results/energy");
  state->add_option("--out", out_dir, "Output directory")
      ->default_val("results/state");
  sweep->add_option("--out", out_dir, "Output directory")
      ->default_val("results/sweep");
  sweep->add_option("--workers", workers, "Solver threads for sweep points")
      ->default_val(1)
      ->check(CLI::Range(1, 64));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);  // prints help or the usage error
    return rc == 0 ? 0 : 64;
  }

  try {
    if (validate->parsed()) {
      return dts::run_validate(std::cout) ? 0 : 2;
    }
    const dts::ExperimentConfig cfg = dts::load_config(config_path);
    if (print_config) {
      std::cout << "# config_hash: " << dts::config_hash(cfg) << "\n"
                << dts::resolved_text(cfg);
    }
    if (energy->parsed()) {
      report_files(dts::run_energy_transfer(cfg, out_dir));
    } else if (state->parsed()) {
      report_files(dts::run_state_transfer(cfg, out_dir));
    } else if (sweep->parsed()) {
      report_files(dts::run_sweep(cfg, out_dir, workers));
    } else if (eigen->parsed()) {
      dts::run_eigen_report(cfg, std::cout);
    }
    return 0;
  } catch (const dts::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 64;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
