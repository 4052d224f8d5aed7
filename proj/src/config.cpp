#include "dts/config.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "dts/errors.hpp"

namespace dts {

namespace {

std::string trim(const std::string& s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

double parse_double(const std::string& raw, const std::string& where) {
  const std::string s = trim(raw);
  if (s.empty()) throw ConfigError(where + ": empty number");
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (end != s.c_str() + s.size() || !std::isfinite(v)) {
    throw ConfigError(where + ": bad number '" + s + "'");
  }
  return v;
}

int parse_int(const std::string& raw, const std::string& where) {
  const double v = parse_double(raw, where);
  const int i = static_cast<int>(v);
  if (static_cast<double>(i) != v) {
    throw ConfigError(where + ": expected an integer, got '" + trim(raw) +
                      "'");
  }
  return i;
}

bool parse_bool(const std::string& raw, const std::string& where) {
  const std::string s = trim(raw);
  if (s == "true" || s == "yes" || s == "1") return true;
  if (s == "false" || s == "no" || s == "0") return false;
  throw ConfigError(where + ": expected a boolean, got '" + s + "'");
}

std::vector<double> parse_list(const std::string& raw,
                               const std::string& where) {
  std::istringstream in(raw);
  std::vector<double> out;
  std::string tok;
  while (in >> tok) out.push_back(parse_double(tok, where));
  if (out.empty()) throw ConfigError(where + ": empty list");
  return out;
}

class Sections {
 public:
  void add(const std::string& section, const std::string& key,
           const std::string& value) {
    auto& sec = data_[section];
    if (!sec.emplace(key, value).second) {
      throw ConfigError("duplicate key '" + key + "' in [" + section + "]");
    }
  }

  bool has(const std::string& section, const std::string& key) const {
    auto s = data_.find(section);
    return s != data_.end() && s->second.count(key) > 0;
  }

  std::string take(const std::string& section, const std::string& key) {
    consumed_.insert(section + "." + key);
    return data_.at(section).at(key);
  }

  std::string take_or(const std::string& section, const std::string& key,
                      const std::string& fallback) {
    if (!has(section, key)) return fallback;
    return take(section, key);
  }

  void require(const std::string& section, const std::string& key) const {
    if (!has(section, key)) {
      throw ConfigError("missing required key '" + key + "' in [" + section +
                        "]");
    }
  }

  void reject_unconsumed() const {
    for (const auto& [section, keys] : data_) {
      for (const auto& [key, value] : keys) {
        if (consumed_.count(section + "." + key) == 0) {
          throw ConfigError("unknown key '" + key + "' in [" + section + "]");
        }
      }
    }
  }

 private:
  std::map<std::string, std::map<std::string, std::string>> data_;
  std::set<std::string> consumed_;
};

Sections split_sections(const std::string& text) {
  static const std::set<std::string> known = {"model", "initial", "run",
                                              "sweep"};
  Sections out;
  std::istringstream in(text);
  std::string line;
  std::string section;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') {
        throw ConfigError("line " + std::to_string(lineno) +
                          ": unterminated section header");
      }
      section = trim(line.substr(1, line.size() - 2));
      if (known.count(section) == 0) {
        throw ConfigError("line " + std::to_string(lineno) +
                          ": unknown section [" + section + "]");
      }
      continue;
    }
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("line " + std::to_string(lineno) +
                        ": expected 'key = value'");
    }
    if (section.empty()) {
      throw ConfigError("line " + std::to_string(lineno) +
                        ": key outside any section");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty() || value.empty()) {
      throw ConfigError("line " + std::to_string(lineno) +
                        ": empty key or value");
    }
    out.add(section, key, value);
  }
  return out;
}

const std::set<std::string>& sweep_axes() {
  static const std::set<std::string> axes = {
      "g",  "omega_c",   "kappa",     "n_max",     "J1",        "J2",
      "J3", "J4",        "detuning1", "detuning2", "detuning3", "detuning4"};
  return axes;
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string fmt(const std::vector<double>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ' ';
    out += fmt(v[i]);
  }
  return out;
}

}  // namespace

ExperimentConfig parse_config_text(const std::string& text) {
  Sections sec = split_sections(text);
  ExperimentConfig cfg;

  for (const char* key : {"qubits", "detunings", "g", "omega_c", "couplings",
                          "kappa"}) {
    sec.require("model", key);
  }
  cfg.model.qubits = parse_int(sec.take("model", "qubits"), "model.qubits");
  cfg.model.detunings =
      parse_list(sec.take("model", "detunings"), "model.detunings");
  cfg.model.g = parse_double(sec.take("model", "g"), "model.g");
  cfg.model.omega_c =
      parse_double(sec.take("model", "omega_c"), "model.omega_c");
  cfg.model.couplings =
      parse_list(sec.take("model", "couplings"), "model.couplings");
  cfg.model.kappa = parse_double(sec.take("model", "kappa"), "model.kappa");
  cfg.model.n_max =
      parse_int(sec.take_or("model", "n_max", "6"), "model.n_max");
  cfg.model.paired =
      parse_bool(sec.take_or("model", "paired", "true"), "model.paired");

  const std::string requested = sec.take_or("initial", "state", "auto");
  cfg.alpha = parse_double(sec.take_or("initial", "alpha", fmt(cfg.alpha)),
                           "initial.alpha");
  cfg.beta = parse_double(sec.take_or("initial", "beta", fmt(cfg.beta)),
                          "initial.beta");
  if (requested == "auto") {
    cfg.initial_state =
        cfg.model.qubits == 4 ? "branch" : "excited_first";
  } else {
    cfg.initial_state = requested;
  }
  if (cfg.initial_state == "excited_first" ||
      cfg.initial_state == "excited_second") {
    if (cfg.model.qubits != 2) {
      throw ConfigError("initial.state '" + cfg.initial_state +
                        "' needs a two-qubit model");
    }
  } else if (cfg.initial_state == "branch") {
    if (cfg.model.qubits != 4) {
      throw ConfigError("initial.state 'branch' needs a four-qubit model");
    }
    if (std::abs(cfg.alpha * cfg.alpha + cfg.beta * cfg.beta - 1.0) > 1e-9) {
      throw ConfigError("initial alpha, beta must satisfy a^2 + b^2 = 1");
    }
  } else {
    throw ConfigError("unknown initial.state '" + cfg.initial_state + "'");
  }

  cfg.t_final =
      parse_double(sec.take_or("run", "t_final", "3"), "run.t_final");
  if (cfg.t_final < 0.0) throw ConfigError("run.t_final must be >= 0");
  IntegratorConfig& integ = cfg.integrator;
  integ.record_stride = parse_double(
      sec.take_or("run", "record_stride", "0.01"), "run.record_stride");
  integ.rel_tol =
      parse_double(sec.take_or("run", "rel_tol", "1e-8"), "run.rel_tol");
  integ.abs_tol =
      parse_double(sec.take_or("run", "abs_tol", "1e-10"), "run.abs_tol");
  integ.ss_tol =
      parse_double(sec.take_or("run", "ss_tol", "1e-9"), "run.ss_tol");
  integ.horizon =
      parse_double(sec.take_or("run", "horizon", "0"), "run.horizon");
  integ.max_step =
      parse_double(sec.take_or("run", "max_step", "0"), "run.max_step");
  integ.exploit_support = parse_bool(
      sec.take_or("run", "exploit_support", "true"), "run.exploit_support");
  integ.implicit_tail = parse_bool(
      sec.take_or("run", "implicit_tail", "true"), "run.implicit_tail");
  if (integ.record_stride < 0.0 || integ.horizon < 0.0 ||
      integ.max_step < 0.0) {
    throw ConfigError("run strides and horizons must be >= 0");
  }
  if (integ.rel_tol <= 0.0 || integ.abs_tol < 0.0 || integ.ss_tol <= 0.0) {
    throw ConfigError("run tolerances must be positive");
  }

  if (sec.has("sweep", "axis")) {
    cfg.sweep_axis = trim(sec.take("sweep", "axis"));
    if (sweep_axes().count(cfg.sweep_axis) == 0) {
      throw ConfigError("unknown sweep.axis '" + cfg.sweep_axis + "'");
    }
    sec.require("sweep", "values");
    cfg.sweep_values =
        parse_list(sec.take("sweep", "values"), "sweep.values");
  } else if (sec.has("sweep", "values")) {
    throw ConfigError("sweep.values given without sweep.axis");
  }

  sec.reject_unconsumed();
  try {
    validate(cfg.model);
  } catch (const ContractViolation& e) {
    throw ConfigError(e.what());
  }
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str());
}

std::string resolved_text(const ExperimentConfig& cfg) {
  std::ostringstream out;
  out << "[model]\n";
  out << "qubits = " << cfg.model.qubits << "\n";
  out << "detunings = " << fmt(cfg.model.detunings) << "\n";
  out << "g = " << fmt(cfg.model.g) << "\n";
  out << "omega_c = " << fmt(cfg.model.omega_c) << "\n";
  out << "couplings = " << fmt(cfg.model.couplings) << "\n";
  out << "kappa = " << fmt(cfg.model.kappa) << "\n";
  out << "n_max = " << cfg.model.n_max << "\n";
  out << "paired = " << (cfg.model.paired ? "true" : "false") << "\n";
  out << "[initial]\n";
  out << "state = " << cfg.initial_state << "\n";
  out << "alpha = " << fmt(cfg.alpha) << "\n";
  out << "beta = " << fmt(cfg.beta) << "\n";
  out << "[run]\n";
  out << "t_final = " << fmt(cfg.t_final) << "\n";
  out << "record_stride = " << fmt(cfg.integrator.record_stride) << "\n";
  out << "rel_tol = " << fmt(cfg.integrator.rel_tol) << "\n";
  out << "abs_tol = " << fmt(cfg.integrator.abs_tol) << "\n";
  out << "ss_tol = " << fmt(cfg.integrator.ss_tol) << "\n";
  out << "horizon = " << fmt(cfg.integrator.horizon) << "\n";
  out << "max_step = " << fmt(cfg.integrator.max_step) << "\n";
  out << "exploit_support = "
      << (cfg.integrator.exploit_support ? "true" : "false") << "\n";
  out << "implicit_tail = "
      << (cfg.integrator.implicit_tail ? "true" : "false") << "\n";
  if (!cfg.sweep_axis.empty()) {
    out << "[sweep]\n";
    out << "axis = " << cfg.sweep_axis << "\n";
    out << "values = " << fmt(cfg.sweep_values) << "\n";
  }
  return out.str();
}

std::string config_hash(const ExperimentConfig& cfg) {
  const std::string text = resolved_text(cfg);
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace dts
