#include "dts/analysis.hpp"

#include <cmath>
#include <string>
#include <vector>

namespace dts {

namespace {

// 4x4 pair Hamiltonian in the uu, ud, du, dd basis, angular units.
ComplexMatrix pair_hamiltonian(double delta1, double delta2, double g) {
  const double d1 = kTwoPi * delta1;
  const double d2 = kTwoPi * delta2;
  const double gg = kTwoPi * g;
  ComplexMatrix h = ComplexMatrix::Zero(4, 4);
  h(0, 0) = 0.5 * (d1 + d2);
  h(1, 1) = 0.5 * (d1 - d2);
  h(2, 2) = 0.5 * (d2 - d1);
  h(3, 3) = -0.5 * (d1 + d2);
  h(1, 2) = gg;
  h(2, 1) = gg;
  return h;
}

}  // namespace

EigenSystem analytic_eigensystem(double delta1, double delta2, double g) {
  const double delta = kTwoPi * (delta1 - delta2);
  const double gg = kTwoPi * g;
  if (delta == 0.0 && gg == 0.0) {
    throw ContractViolation(
        "analytic_eigensystem: mixing angle undefined for a fully "
        "degenerate pair (delta1 == delta2, g == 0)");
  }
  // atan2 maps g > 0 to theta in (0, pi); g = 0 gives 0 (delta > 0) or
  // pi (delta < 0). sin(theta) >= 0 throughout.
  const double theta = std::atan2(2.0 * gg, delta);
  if (theta < 0.0) {
    throw ContractViolation("analytic_eigensystem: g must be >= 0");
  }
  const double split = std::hypot(delta, 2.0 * gg);  // E2 - E3
  const double sum = kTwoPi * (delta1 + delta2);

  EigenSystem es;
  es.theta = theta;
  es.energies = {0.5 * sum, 0.5 * split, -0.5 * split, -0.5 * sum};

  const double c = std::cos(0.5 * theta);
  const double s = std::sin(0.5 * theta);
  es.vectors = ComplexMatrix::Zero(4, 4);
  es.vectors(0, 0) = 1.0;             // |E1> = |uu>
  es.vectors(1, 1) = c;               // |E2> = c|ud> + s|du>
  es.vectors(2, 1) = s;
  es.vectors(1, 2) = s;               // |E3> = s|ud> - c|du>
  es.vectors(2, 2) = -c;
  es.vectors(3, 3) = 1.0;             // |E4> = |dd>
  return es;
}

EigenSystem analytic_eigensystem(const ModelParams& params) {
  validate(params);
  return analytic_eigensystem(params.detunings.at(0), params.detunings.at(1),
                              params.g);
}

DeviationReport verify_against_numeric(double delta1, double delta2,
                                       double g) {
  const EigenSystem es = analytic_eigensystem(delta1, delta2, g);
  const ComplexMatrix h = pair_hamiltonian(delta1, delta2, g);
  const EighResult num = eigh(h);

  const double scale = std::max(1.0, num.values.cwiseAbs().maxCoeff());
  DeviationReport report;
  for (int k = 0; k < 4; ++k) {
    const double target = es.energies[k];
    double best = std::abs(num.values(0) - target);
    for (int l = 1; l < 4; ++l) {
      best = std::min(best, std::abs(num.values(l) - target));
    }
    report.max_energy_dev = std::max(report.max_energy_dev, best);

    // Project onto the numeric eigenspace near the analytic energy so
    // that near-degenerate pairs are compared subspace to subspace.
    const double window = std::max(1e-7 * scale, 10.0 * best);
    ComplexVector v = es.vectors.col(k);
    ComplexVector proj = ComplexVector::Zero(4);
    for (int l = 0; l < 4; ++l) {
      if (std::abs(num.values(l) - target) <= window) {
        proj += num.vectors.col(l) * (num.vectors.col(l).adjoint() * v);
      }
    }
    report.max_vector_dev =
        std::max(report.max_vector_dev, (v - proj).norm());
  }
  return report;
}

TransitionElements transition_elements(const EigenSystem& es, double j1,
                                       double j2) {
  ComplexMatrix m = ComplexMatrix::Zero(4, 4);
  const double a = kTwoPi * j1;
  const double b = kTwoPi * j2;
  m(0, 0) = a + b;    // uu
  m(1, 1) = a - b;    // ud
  m(2, 2) = b - a;    // du
  m(3, 3) = -a - b;   // dd

  auto element = [&](int row, int col) {
    const Complex val =
        (es.vectors.col(row).adjoint() * m * es.vectors.col(col))(0, 0);
    return val.real();
  };
  TransitionElements t;
  t.m23 = element(1, 2);
  t.m34 = element(2, 3);
  t.m12 = element(0, 1);
  return t;
}

double resonance_detuning(const EigenSystem& es, double omega_c) {
  const double split = (es.energies[1] - es.energies[2]) / kTwoPi;
  return std::abs(omega_c - split);
}

double dressed_transfer_probability(const EigenSystem& es) {
  const double c = std::cos(0.5 * es.theta);
  return c * c;
}

double effective_transfer_rate(const EigenSystem& es, double j1, double j2,
                               double omega_c, double kappa) {
  if (kappa <= 0.0) return 0.0;
  const TransitionElements t = transition_elements(es, j1, j2);
  const double mismatch =
      kTwoPi * omega_c - (es.energies[1] - es.energies[2]);
  const double half_kappa = 0.5 * kTwoPi * kappa;
  return t.m23 * t.m23 * (kTwoPi * kappa) /
         (mismatch * mismatch + half_kappa * half_kappa);
}

double effective_transfer_rate(const ModelParams& params) {
  const EigenSystem es = analytic_eigensystem(params);
  return effective_transfer_rate(es, params.couplings.at(0),
                                 params.couplings.at(1), params.omega_c,
                                 params.kappa);
}

}  // namespace dts
