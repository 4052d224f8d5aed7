#pragma once

#include <Eigen/Dense>
#include <complex>

#include "dts/errors.hpp"

namespace dts {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;
using Index = Eigen::Index;

// Shape-checked matrix product.
ComplexMatrix matmul(const ComplexMatrix& a, const ComplexMatrix& b);

// Kronecker product with the left factor as the slow index:
// (A kron B)(i*rb + k, j*cb + l) = A(i,j) * B(k,l).
ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);

struct EighResult {
  RealVector values;      // ascending
  ComplexMatrix vectors;  // orthonormal columns, vectors.col(k) <-> values(k)
};

// Hermitian eigendecomposition. The input must be Hermitian within
// herm_tol (max entry deviation); it is symmetrized before the solve.
EighResult eigh(const ComplexMatrix& m, double herm_tol = 1e-10);

// exp(scale * m). Uses a spectral decomposition when m is Hermitian or
// anti-Hermitian (the only cases the simulator hits), and
// scaling-and-squaring Pade otherwise.
ComplexMatrix expm(const ComplexMatrix& m, Complex scale = Complex(1.0, 0.0));

ComplexMatrix dagger(const ComplexMatrix& m);
Complex trace(const ComplexMatrix& m);

// max_ij |m(i,j)|
double max_abs(const ComplexMatrix& m);

// max_ij |m(i,j) - conj(m(j,i))|
double hermiticity_defect(const ComplexMatrix& m);

bool all_finite(const ComplexMatrix& m);

}  // namespace dts
