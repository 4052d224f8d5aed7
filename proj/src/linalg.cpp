#include "dts/linalg.hpp"

#include <cmath>
#include <string>

#include <unsupported/Eigen/MatrixFunctions>

namespace dts {

namespace {

std::string dims(const ComplexMatrix& m) {
  return std::to_string(m.rows()) + "x" + std::to_string(m.cols());
}

}  // namespace

ComplexMatrix matmul(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.cols() != b.rows()) {
    throw ShapeError("matmul: inner dimensions differ, " + dims(a) + " * " +
                     dims(b));
  }
  return a * b;
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.size() == 0 || b.size() == 0) {
    throw ShapeError("kron: empty operand, " + dims(a) + " kron " + dims(b));
  }
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

EighResult eigh(const ComplexMatrix& m, double herm_tol) {
  if (m.rows() != m.cols()) {
    throw ShapeError("eigh: matrix not square, " + dims(m));
  }
  const double defect = hermiticity_defect(m);
  const double scale = std::max(1.0, max_abs(m));
  if (defect > herm_tol * scale) {
    throw ContractViolation("eigh: input not Hermitian, defect " +
                            std::to_string(defect));
  }
  ComplexMatrix sym = 0.5 * (m + m.adjoint());
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(sym);
  if (solver.info() != Eigen::Success) {
    throw NumericalError("eigh: eigensolver did not converge");
  }
  return EighResult{solver.eigenvalues(), solver.eigenvectors()};
}

ComplexMatrix expm(const ComplexMatrix& m, Complex scale) {
  if (m.rows() != m.cols()) {
    throw ShapeError("expm: matrix not square, " + dims(m));
  }
  const double norm = max_abs(m);
  const double tol = 1e-12 * std::max(1.0, norm);
  if (hermiticity_defect(m) <= tol) {
    // m Hermitian: exp(scale*m) = V exp(scale*lambda) V^dag
    EighResult es = eigh(m, 1e-9);
    ComplexVector phases(es.values.size());
    for (Eigen::Index k = 0; k < es.values.size(); ++k) {
      phases(k) = std::exp(scale * es.values(k));
    }
    return es.vectors * phases.asDiagonal() * es.vectors.adjoint();
  }
  ComplexMatrix im = Complex(0.0, 1.0) * m;
  if (hermiticity_defect(im) <= tol) {
    // m anti-Hermitian: i*m Hermitian, exp(scale*m) = exp(-i*scale*(i*m))
    return expm(im, Complex(0.0, -1.0) * scale);
  }
  ComplexMatrix scaled = scale * m;
  return scaled.exp();
}

ComplexMatrix dagger(const ComplexMatrix& m) { return m.adjoint(); }

Complex trace(const ComplexMatrix& m) {
  if (m.rows() != m.cols()) {
    throw ShapeError("trace: matrix not square, " + dims(m));
  }
  return m.trace();
}

double max_abs(const ComplexMatrix& m) {
  if (m.size() == 0) return 0.0;
  return m.cwiseAbs().maxCoeff();
}

double hermiticity_defect(const ComplexMatrix& m) {
  if (m.rows() != m.cols()) {
    throw ShapeError("hermiticity_defect: matrix not square, " + dims(m));
  }
  return max_abs(m - m.adjoint());
}

bool all_finite(const ComplexMatrix& m) {
  return m.allFinite();
}

}  // namespace dts
