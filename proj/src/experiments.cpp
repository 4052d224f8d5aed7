#include "dts/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <ostream>
#include <random>
#include <sstream>
#include <thread>
#include <utility>

#include "dts/analysis.hpp"
#include "dts/errors.hpp"
#include "dts/model.hpp"
#include "dts/observables.hpp"

namespace dts {

namespace {

std::string fmt12(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

void write_lines(const std::string& path, const std::string& body) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw Error("cannot open '" + path + "' for writing");
  out << body;
  if (!out.good()) throw Error("failed while writing '" + path + "'");
}

std::string csv_header(const ExperimentConfig& cfg,
                       const std::string& experiment) {
  std::string head;
  head += "# experiment: " + experiment + "\n";
  head += "# config_hash: " + config_hash(cfg) + "\n";
  std::istringstream in(resolved_text(cfg));
  std::string line;
  while (std::getline(in, line)) head += "# config: " + line + "\n";
  head +=
      "# units: time in 1/f, frequencies in f (all rates divided by 2*pi), "
      "populations and fidelities dimensionless\n";
  return head;
}

std::string joined_row(const std::vector<double>& row) {
  std::string out;
  for (std::size_t i = 0; i < row.size(); ++i) {
    if (i) out += ',';
    out += fmt12(row[i]);
  }
  out += '\n';
  return out;
}

std::string csv_table(const std::vector<std::string>& cols,
                      const std::vector<std::vector<double>>& rows) {
  std::string out;
  for (std::size_t i = 0; i < cols.size(); ++i) {
    if (i) out += ',';
    out += cols[i];
  }
  out += '\n';
  for (const auto& row : rows) out += joined_row(row);
  return out;
}

std::string kv_table(
    const std::vector<std::pair<std::string, std::string>>& rows) {
  std::string out = "key,value\n";
  for (const auto& [k, v] : rows) out += k + "," + v + "\n";
  return out;
}

// Branch labels of the four-qubit transfer: the excitation sits on one
// qubit, all others down, cavity at Fock level n. Level 0 = up.
std::vector<Eigen::Index> branch_digits(int excited_qubit, Eigen::Index n) {
  std::vector<Eigen::Index> digits(5, 1);
  digits[excited_qubit] = 0;
  digits[4] = n;
  return digits;
}

struct TargetOps {
  ComplexMatrix fidelity;  // sum_n |t,n><t,n|, t = alpha u + beta v
  ComplexMatrix branch_u;  // sum_n |u,n><u,n|
  ComplexMatrix branch_v;
  ComplexMatrix coh_re;  // expectation = Re <u,n|rho|v,n> summed over n
  ComplexMatrix coh_im;  // expectation = Im of the same
};

TargetOps target_operators(const SpaceLayout& layout, double alpha,
                           double beta) {
  const Eigen::Index d = layout.total_dim();
  const Eigen::Index levels = layout.dim(4);
  TargetOps ops;
  ops.fidelity = ComplexMatrix::Zero(d, d);
  ops.branch_u = ComplexMatrix::Zero(d, d);
  ops.branch_v = ComplexMatrix::Zero(d, d);
  ops.coh_re = ComplexMatrix::Zero(d, d);
  ops.coh_im = ComplexMatrix::Zero(d, d);
  const Complex half(0.5, 0.0);
  const Complex ihalf(0.0, 0.5);
  for (Eigen::Index n = 0; n < levels; ++n) {
    const Eigen::Index u = layout.flat_index(branch_digits(1, n));
    const Eigen::Index v = layout.flat_index(branch_digits(3, n));
    ops.branch_u(u, u) += 1.0;
    ops.branch_v(v, v) += 1.0;
    ops.coh_re(u, v) += half;
    ops.coh_re(v, u) += half;
    ops.coh_im(u, v) += ihalf;
    ops.coh_im(v, u) -= ihalf;
    ops.fidelity(u, u) += alpha * alpha;
    ops.fidelity(v, v) += beta * beta;
    ops.fidelity(u, v) += alpha * beta;
    ops.fidelity(v, u) += alpha * beta;
  }
  return ops;
}

ModelParams apply_sweep_axis(ModelParams p, const std::string& axis,
                             double value) {
  auto set_indexed = [&](std::vector<double>& vec, int index,
                         const char* what) {
    if (p.qubits == 2 && index >= 2) {
      throw ConfigError(std::string("sweep axis ") + what +
                        std::to_string(index + 1) +
                        " needs a four-qubit model");
    }
    if (p.qubits == 4 && p.paired) {
      if (index >= 2) {
        throw ConfigError(std::string("sweep axis ") + what +
                          std::to_string(index + 1) +
                          " is fixed by the pairing constraints; sweep " +
                          what + std::to_string(index - 1) + " instead");
      }
      vec[static_cast<std::size_t>(index)] = value;
      vec[static_cast<std::size_t>(index + 2)] = value;
    } else {
      vec[static_cast<std::size_t>(index)] = value;
    }
  };

  if (axis == "g") {
    p.g = value;
  } else if (axis == "omega_c") {
    p.omega_c = value;
  } else if (axis == "kappa") {
    p.kappa = value;
  } else if (axis == "n_max") {
    const int n = static_cast<int>(value);
    if (static_cast<double>(n) != value || n < 1) {
      throw ConfigError("sweep over n_max needs integer values >= 1");
    }
    p.n_max = n;
  } else if (axis.rfind("J", 0) == 0) {
    set_indexed(p.couplings, axis[1] - '1', "J");
  } else if (axis.rfind("detuning", 0) == 0) {
    set_indexed(p.detunings, axis[8] - '1', "detuning");
  } else {
    throw ConfigError("unknown sweep axis '" + axis + "'");
  }
  validate(p);
  return p;
}

struct SweepRow {
  double value = 0.0;
  double steady_value = 0.0;
  double t_half = std::numeric_limits<double>::quiet_NaN();
  double t_reached = 0.0;
  double residual = 0.0;
  bool converged = false;
};

void ensure_dir(const std::string& out_dir) {
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw Error("cannot create output directory '" + out_dir + "'");
}

bool check(std::ostream& out, const std::string& name, bool ok,
           const std::string& detail) {
  out << (ok ? "[ok] " : "[FAIL] ") << name << ": " << detail << "\n";
  return ok;
}

}  // namespace

ComplexVector initial_state_vector(const ExperimentConfig& cfg,
                                   const SpaceLayout& layout) {
  if (cfg.initial_state == "excited_first") {
    return basis_state(layout, {0, 1, 0});
  }
  if (cfg.initial_state == "excited_second") {
    return basis_state(layout, {1, 0, 0});
  }
  if (cfg.initial_state == "branch") {
    ComplexVector psi = cfg.alpha * basis_state(layout, branch_digits(0, 0));
    psi += cfg.beta * basis_state(layout, branch_digits(2, 0));
    return psi;
  }
  throw ConfigError("unknown initial state '" + cfg.initial_state + "'");
}

double first_crossing(const std::vector<double>& times,
                      const std::vector<double>& values, double level) {
  if (times.size() != values.size()) {
    throw ShapeError("first_crossing: times and values differ in length");
  }
  if (times.empty()) return std::numeric_limits<double>::quiet_NaN();
  if (values.front() >= level) return times.front();
  for (std::size_t i = 1; i < values.size(); ++i) {
    if (values[i] >= level) {
      const double y0 = values[i - 1];
      const double y1 = values[i];
      const double w = y1 > y0 ? (level - y0) / (y1 - y0) : 1.0;
      return times[i - 1] + w * (times[i] - times[i - 1]);
    }
  }
  return std::numeric_limits<double>::quiet_NaN();
}

double auto_horizon(const ModelParams& params, const IntegratorConfig& integ,
                    double t_final) {
  if (integ.horizon > 0.0) return integ.horizon;
  const double rate = effective_transfer_rate(params);
  if (rate > 1e-9) return std::clamp(30.0 / rate, 1e3, 1e6);
  if (params.kappa > 0.0) return 1e3;
  return std::max(10.0 * t_final, 100.0);
}

ExperimentOutput run_energy_transfer(const ExperimentConfig& cfg,
                                     const std::string& out_dir) {
  if (cfg.model.qubits != 2) {
    throw ConfigError("energy transfer runs on the two-qubit model");
  }
  ensure_dir(out_dir);
  const SystemOperators ops = build_model(cfg.model);
  const ComplexVector psi = initial_state_vector(cfg, ops.layout);
  const ComplexMatrix rho0 = psi * psi.adjoint();

  IntegratorConfig integ = cfg.integrator;
  integ.horizon = auto_horizon(cfg.model, integ, cfg.t_final);

  const ComplexMatrix pop1 = excitation_projector(ops.layout, 0);
  const ComplexMatrix pop2 = excitation_projector(ops.layout, 1);
  std::vector<Observable> obs = {
      {"pop_q1", pop1},
      {"pop_q2", pop2},
      {"n_cav", number_operator(ops.layout)},
      {"total_sz", total_sigma_z(ops.layout)},
  };
  const EvolveToSteadyResult res =
      evolve_to_steady(ops.hamiltonian, ops.collapse, rho0, cfg.t_final,
                       integ, obs);

  const Trajectory& traj = res.trajectory;
  std::vector<std::vector<double>> rows(traj.times.size());
  for (std::size_t i = 0; i < traj.times.size(); ++i) {
    rows[i] = {traj.times[i], traj.records.at("pop_q1")[i],
               traj.records.at("pop_q2")[i], traj.records.at("n_cav")[i],
               traj.records.at("total_sz")[i]};
  }

  const EigenSystem es = analytic_eigensystem(cfg.model);
  const double steady_pop = expectation(res.steady.rho, pop2);
  const double predicted = dressed_transfer_probability(es);
  const double t_half =
      first_crossing(traj.times, traj.records.at("pop_q2"), steady_pop / 2.0);

  const std::string ts_path = out_dir + "/timeseries.csv";
  write_lines(ts_path,
              csv_header(cfg, "energy_transfer") +
                  csv_table({"t", "pop_q1", "pop_q2", "n_cav", "total_sz"},
                            rows));

  const std::string sm_path = out_dir + "/summary.csv";
  write_lines(
      sm_path,
      csv_header(cfg, "energy_transfer") +
          kv_table({
              {"steady_pop_q2", fmt12(steady_pop)},
              {"predicted_pop_q2", fmt12(predicted)},
              {"prediction_gap", fmt12(std::abs(steady_pop - predicted))},
              {"steady_pop_q1", fmt12(expectation(res.steady.rho, pop1))},
              {"t_half", fmt12(t_half)},
              {"t_reached", fmt12(res.steady.t_reached)},
              {"residual", fmt12(res.steady.residual)},
              {"converged", res.steady.converged ? "1" : "0"},
              {"purity", fmt12(purity(res.steady.rho))},
          }));
  return ExperimentOutput{{ts_path, sm_path}};
}

ExperimentOutput run_state_transfer(const ExperimentConfig& cfg,
                                    const std::string& out_dir) {
  if (cfg.model.qubits != 4) {
    throw ConfigError("state transfer runs on the four-qubit model");
  }
  ensure_dir(out_dir);
  const SystemOperators ops = build_model(cfg.model);
  const ComplexVector psi = initial_state_vector(cfg, ops.layout);
  const ComplexMatrix rho0 = psi * psi.adjoint();

  IntegratorConfig integ = cfg.integrator;
  integ.horizon = auto_horizon(cfg.model, integ, cfg.t_final);

  const TargetOps tops = target_operators(ops.layout, cfg.alpha, cfg.beta);
  std::vector<Observable> obs = {
      {"fidelity", tops.fidelity},
      {"branch_u", tops.branch_u},
      {"branch_v", tops.branch_v},
      {"coh_re", tops.coh_re},
      {"coh_im", tops.coh_im},
      {"n_cav", number_operator(ops.layout)},
  };
  for (int q = 0; q < 4; ++q) {
    obs.push_back({"pop_q" + std::to_string(q + 1),
                   excitation_projector(ops.layout, q)});
  }
  const EvolveToSteadyResult res =
      evolve_to_steady(ops.hamiltonian, ops.collapse, rho0, cfg.t_final,
                       integ, obs);

  const Trajectory& traj = res.trajectory;
  const double cross = 2.0 * std::abs(cfg.alpha * cfg.beta);
  std::vector<std::vector<double>> rows(traj.times.size());
  for (std::size_t i = 0; i < traj.times.size(); ++i) {
    const double bu = traj.records.at("branch_u")[i];
    const double bv = traj.records.at("branch_v")[i];
    const double cre = traj.records.at("coh_re")[i];
    const double cim = traj.records.at("coh_im")[i];
    const double opt = cfg.alpha * cfg.alpha * bu + cfg.beta * cfg.beta * bv +
                       cross * std::hypot(cre, cim);
    rows[i] = {traj.times[i],
               traj.records.at("fidelity")[i],
               opt,
               bu,
               bv,
               cre,
               cim,
               traj.records.at("pop_q1")[i],
               traj.records.at("pop_q2")[i],
               traj.records.at("pop_q3")[i],
               traj.records.at("pop_q4")[i],
               traj.records.at("n_cav")[i]};
  }

  const EigenSystem es = analytic_eigensystem(cfg.model);
  const FidelityResult fid =
      transfer_fidelity(res.steady.rho, ops.layout, cfg.alpha, cfg.beta);
  const LogicalState senders =
      logical_populations(res.steady.rho, ops.layout, 0, 2);
  const LogicalState receivers =
      logical_populations(res.steady.rho, ops.layout, 1, 3);
  const double predicted = dressed_transfer_probability(es);
  const double t_half = first_crossing(
      traj.times, traj.records.at("fidelity"), fid.fixed_phase / 2.0);

  const std::string ts_path = out_dir + "/timeseries.csv";
  write_lines(ts_path,
              csv_header(cfg, "state_transfer") +
                  csv_table({"t", "fidelity", "fidelity_opt", "branch_u",
                             "branch_v", "coh_re", "coh_im", "pop_q1",
                             "pop_q2", "pop_q3", "pop_q4", "n_cav"},
                            rows));

  const std::string sm_path = out_dir + "/summary.csv";
  write_lines(
      sm_path,
      csv_header(cfg, "state_transfer") +
          kv_table({
              {"alpha", fmt12(cfg.alpha)},
              {"beta", fmt12(cfg.beta)},
              {"steady_fidelity", fmt12(fid.fixed_phase)},
              {"steady_fidelity_opt", fmt12(fid.phase_optimized)},
              {"infidelity", fmt12(1.0 - fid.fixed_phase)},
              {"infidelity_opt", fmt12(1.0 - fid.phase_optimized)},
              {"predicted_fidelity", fmt12(predicted)},
              {"senders_p_q1", fmt12(senders.p_first)},
              {"senders_p_q3", fmt12(senders.p_second)},
              {"senders_coh_re", fmt12(senders.coherence.real())},
              {"senders_coh_im", fmt12(senders.coherence.imag())},
              {"receivers_p_q2", fmt12(receivers.p_first)},
              {"receivers_p_q4", fmt12(receivers.p_second)},
              {"receivers_coh_re", fmt12(receivers.coherence.real())},
              {"receivers_coh_im", fmt12(receivers.coherence.imag())},
              {"t_half_fidelity", fmt12(t_half)},
              {"t_reached", fmt12(res.steady.t_reached)},
              {"residual", fmt12(res.steady.residual)},
              {"converged", res.steady.converged ? "1" : "0"},
              {"purity", fmt12(purity(res.steady.rho))},
          }));
  return ExperimentOutput{{ts_path, sm_path}};
}

ExperimentOutput run_sweep(const ExperimentConfig& cfg,
                           const std::string& out_dir, int workers) {
  if (cfg.sweep_axis.empty() || cfg.sweep_values.empty()) {
    throw ConfigError("sweep requires a [sweep] section with axis and values");
  }
  ensure_dir(out_dir);

  const std::size_t n = cfg.sweep_values.size();
  std::vector<SweepRow> rows(n);
  std::vector<std::exception_ptr> errors(n);

  auto solve_point = [&](std::size_t i) {
    const double value = cfg.sweep_values[i];
    const ModelParams params =
        apply_sweep_axis(cfg.model, cfg.sweep_axis, value);
    const SystemOperators ops = build_model(params);
    const ComplexVector psi = initial_state_vector(cfg, ops.layout);
    const ComplexMatrix rho0 = psi * psi.adjoint();

    const ComplexMatrix target =
        params.qubits == 2
            ? excitation_projector(ops.layout, 1)
            : target_operators(ops.layout, cfg.alpha, cfg.beta).fidelity;

    IntegratorConfig integ = cfg.integrator;
    integ.horizon = auto_horizon(params, integ, cfg.t_final);
    const double rate = effective_transfer_rate(params);
    const double window =
        std::min(integ.horizon,
                 rate > 1e-9 ? std::max(cfg.t_final, 4.62 / rate)
                             : cfg.t_final);
    integ.record_stride = window / 1500.0;

    const EvolveToSteadyResult res =
        evolve_to_steady(ops.hamiltonian, ops.collapse, rho0, window, integ,
                         {{"target", target}});

    SweepRow& row = rows[i];
    row.value = value;
    row.steady_value = expectation(res.steady.rho, target);
    row.t_half =
        first_crossing(res.trajectory.times,
                       res.trajectory.records.at("target"),
                       row.steady_value / 2.0);
    row.t_reached = res.steady.t_reached;
    row.residual = res.steady.residual;
    row.converged = res.steady.converged;
  };

  const int pool = std::clamp(workers, 1, static_cast<int>(n));
  std::atomic<std::size_t> next{0};
  auto drain = [&]() {
    for (std::size_t i = next.fetch_add(1); i < n; i = next.fetch_add(1)) {
      try {
        solve_point(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  if (pool == 1) {
    drain();
  } else {
    std::vector<std::thread> threads;
    threads.reserve(static_cast<std::size_t>(pool));
    for (int w = 0; w < pool; ++w) threads.emplace_back(drain);
    for (auto& th : threads) th.join();
  }
  for (const auto& err : errors) {
    if (err) std::rethrow_exception(err);
  }

  std::vector<std::vector<double>> table(n);
  for (std::size_t i = 0; i < n; ++i) {
    const SweepRow& r = rows[i];
    table[i] = {r.value,     r.steady_value, r.t_half,
                r.t_reached, r.residual,     r.converged ? 1.0 : 0.0};
  }
  const std::string path = out_dir + "/sweep.csv";
  std::string head = csv_header(cfg, "sweep");
  head += "# sweep_axis: " + cfg.sweep_axis + "\n";
  head += std::string("# target: ") +
          (cfg.model.qubits == 2 ? "pop_q2" : "fidelity") + "\n";
  write_lines(path, head + csv_table({"sweep_value", "steady_value",
                                      "t_half", "t_reached", "residual",
                                      "converged"},
                                     table));
  return ExperimentOutput{{path}};
}

void run_eigen_report(const ExperimentConfig& cfg, std::ostream& out) {
  const EigenSystem es = analytic_eigensystem(cfg.model);
  const double j1 = cfg.model.couplings[0];
  const double j2 = cfg.model.couplings[1];
  const TransitionElements tm = transition_elements(es, j1, j2);
  const double rate = effective_transfer_rate(cfg.model);
  out << "config_hash = " << config_hash(cfg) << "\n";
  out << "theta = " << fmt12(es.theta) << "\n";
  out << "cos_theta = " << fmt12(std::cos(es.theta)) << "\n";
  out << "sin_theta = " << fmt12(std::sin(es.theta)) << "\n";
  for (int k = 0; k < 4; ++k) {
    out << "E" << k + 1 << " = " << fmt12(es.energies[k] / kTwoPi) << "\n";
  }
  out << "resonant_omega_c = "
      << fmt12((es.energies[1] - es.energies[2]) / kTwoPi) << "\n";
  out << "mismatch = " << fmt12(resonance_detuning(es, cfg.model.omega_c))
      << "\n";
  out << "m23 = " << fmt12(tm.m23) << "\n";
  out << "m12 = " << fmt12(tm.m12) << "\n";
  out << "m34 = " << fmt12(tm.m34) << "\n";
  out << "predicted_steady = " << fmt12(dressed_transfer_probability(es))
      << "\n";
  out << "transfer_rate = " << fmt12(rate) << "\n";
  out << "t_half_predicted = "
      << fmt12(rate > 0.0 ? std::log(2.0) / rate
                          : std::numeric_limits<double>::infinity())
      << "\n";
}

bool run_validate(std::ostream& out) {
  bool all_ok = true;

  {
    double worst_e = 0.0;
    double worst_v = 0.0;
    for (double d1 : {15.0, 20.0, 7.5}) {
      for (double d2 : {0.0, 5.0}) {
        for (double g : {0.25, 1.0, 2.0, 5.0}) {
          const DeviationReport rep = verify_against_numeric(d1, d2, g);
          worst_e = std::max(worst_e, rep.max_energy_dev);
          worst_v = std::max(worst_v, rep.max_vector_dev);
        }
      }
    }
    all_ok &= check(out, "pair eigensystem closed form",
                    worst_e <= 1e-8 && worst_v <= 1e-8,
                    "max energy dev " + fmt12(worst_e) + ", max vector dev " +
                        fmt12(worst_v) + " (tol 1e-8)");
  }

  {
    std::mt19937 rng(12345);
    std::uniform_real_distribution<double> split(-25.0, 25.0);
    std::uniform_real_distribution<double> gdist(0.05, 5.0);
    std::uniform_real_distribution<double> jdist(-3.0, 3.0);
    double worst_forbidden = 0.0;
    double worst_closed = 0.0;
    for (int k = 0; k < 100; ++k) {
      const double d1 = split(rng);
      const double d2 = split(rng);
      const double g = gdist(rng);
      const double j1 = jdist(rng);
      const double j2 = jdist(rng);
      const EigenSystem es = analytic_eigensystem(d1, d2, g);
      const TransitionElements tm = transition_elements(es, j1, j2);
      const double scale = std::max(1.0, kTwoPi * (std::abs(j1) + std::abs(j2)));
      worst_forbidden = std::max(
          worst_forbidden,
          std::max(std::abs(tm.m12), std::abs(tm.m34)) / scale);
      const double closed = std::sin(es.theta) * kTwoPi * (j1 - j2);
      worst_closed =
          std::max(worst_closed, std::abs(tm.m23 - closed) / scale);
    }
    all_ok &= check(out, "selection rules",
                    worst_forbidden <= 1e-13 && worst_closed <= 1e-12,
                    "forbidden elements " + fmt12(worst_forbidden) +
                        " (tol 1e-13), bright element vs closed form " +
                        fmt12(worst_closed) + " (tol 1e-12)");
  }

  ModelParams base;
  base.qubits = 2;
  base.detunings = {15.0, 0.0};
  base.g = 1.0;
  base.omega_c = 15.0;
  base.couplings = {2.0, 1.0};
  base.kappa = 3.0;

  {
    const SystemOperators ops = build_model(base);
    const ComplexVector psi = basis_state(ops.layout, {0, 1, 0});
    IntegratorConfig integ;
    integ.record_stride = 0.05;
    const ComplexMatrix eye =
        ComplexMatrix::Identity(ops.layout.total_dim(),
                                ops.layout.total_dim());
    const Trajectory traj = evolve(
        ops.hamiltonian, ops.collapse, psi * psi.adjoint(), 3.0, integ,
        {{"trace", eye}, {"total_sz", total_sigma_z(ops.layout)}});
    double trace_drift = 0.0;
    double sz_drift = 0.0;
    const double sz0 = traj.records.at("total_sz").front();
    for (std::size_t i = 0; i < traj.times.size(); ++i) {
      trace_drift = std::max(
          trace_drift, std::abs(traj.records.at("trace")[i] - 1.0));
      sz_drift = std::max(sz_drift,
                          std::abs(traj.records.at("total_sz")[i] - sz0));
    }
    all_ok &= check(out, "conserved quantities",
                    trace_drift <= 1e-7 && sz_drift <= 1e-7,
                    "trace drift " + fmt12(trace_drift) +
                        ", excitation-sum drift " + fmt12(sz_drift) +
                        " (tol 1e-7)");
  }

  {
    ModelParams decayp = base;
    decayp.g = 0.0;
    decayp.couplings = {0.0, 0.0};
    const SystemOperators ops = build_model(decayp);
    const ComplexVector one = basis_state(ops.layout, {1, 1, 1});
    IntegratorConfig integ;
    integ.record_stride = 0.005;
    const Trajectory traj =
        evolve(ops.hamiltonian, ops.collapse, one * one.adjoint(), 0.5,
               integ, {{"n_cav", number_operator(ops.layout)}});
    double worst = 0.0;
    for (std::size_t i = 0; i < traj.times.size(); ++i) {
      const double expect = std::exp(-kTwoPi * decayp.kappa * traj.times[i]);
      worst = std::max(
          worst, std::abs(traj.records.at("n_cav")[i] - expect));
    }
    all_ok &= check(out, "photon decay law", worst <= 1e-6,
                    "max deviation from exp(-2 pi kappa t): " + fmt12(worst) +
                        " (tol 1e-6)");
  }

  {
    const SystemOperators ops = build_model(base);
    const SteadyStateResult ss =
        steady_state(ops.hamiltonian, ops.collapse,
                     basis_state(ops.layout, {0, 1, 0}) *
                         basis_state(ops.layout, {0, 1, 0}).adjoint(),
                     IntegratorConfig{});
    const double pop =
        expectation(ss.rho, excitation_projector(ops.layout, 1));
    const double predicted =
        dressed_transfer_probability(analytic_eigensystem(base));
    const bool ok = ss.converged && ss.residual <= 1e-9 &&
                    std::abs(pop - predicted) <= 0.005 * predicted;
    all_ok &= check(out, "steady transfer vs dressed prediction", ok,
                    "pop " + fmt12(pop) + ", predicted " + fmt12(predicted) +
                        ", residual " + fmt12(ss.residual) +
                        " (rel tol 5e-3)");
  }

  {
    bool rejected_h = false;
    bool rejected_trace = false;
    bool rejected_pairing = false;
    const SystemOperators ops = build_model(base);
    ComplexMatrix bad_h = ops.hamiltonian;
    bad_h(0, 1) += Complex(0.5, 0.5);  // break Hermiticity
    try {
      evolve(bad_h, ops.collapse,
             basis_state(ops.layout, {0, 1, 0}) *
                 basis_state(ops.layout, {0, 1, 0}).adjoint(),
             0.1, IntegratorConfig{});
    } catch (const ContractViolation&) {
      rejected_h = true;
    }
    try {
      evolve(ops.hamiltonian, ops.collapse,
             2.0 * basis_state(ops.layout, {0, 1, 0}) *
                 basis_state(ops.layout, {0, 1, 0}).adjoint(),
             0.1, IntegratorConfig{});
    } catch (const ContractViolation&) {
      rejected_trace = true;
    }
    try {
      ModelParams broken;
      broken.qubits = 4;
      broken.detunings = {15.0, 0.0, 15.0, 0.0};
      broken.g = 1.0;
      broken.omega_c = 15.0;
      broken.couplings = {2.0, 1.0, 1.7, 1.0};  // J3 != J1
      broken.kappa = 3.0;
      build_model(broken);
    } catch (const ContractViolation&) {
      rejected_pairing = true;
    }
    all_ok &= check(out, "contract rejections",
                    rejected_h && rejected_trace && rejected_pairing,
                    std::string("non-Hermitian H ") +
                        (rejected_h ? "rejected" : "ACCEPTED") +
                        ", trace != 1 " +
                        (rejected_trace ? "rejected" : "ACCEPTED") +
                        ", broken pairing " +
                        (rejected_pairing ? "rejected" : "ACCEPTED"));
  }

  out << (all_ok ? "validate: all checks passed\n"
                 : "validate: FAILURES present\n");
  return all_ok;
}

}  // namespace dts
