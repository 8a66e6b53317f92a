#pragma once

#include <Eigen/Dense>

namespace hqr {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using ComplexVector = Eigen::VectorXcd;

struct EigenSystem {
    Vector values;   // ascending
    Matrix vectors;  // columns are orthonormal eigenvectors
};

/// Symmetric eigendecomposition through LAPACK dsyevd. Only the upper triangle
/// of `a` is read. The result is spot-checked (trace, Frobenius norm, sampled
/// residuals); on a mismatch the Eigen solver recomputes it and a one-time
/// warning goes to stderr. Throws NumericalError on solver failure.
EigenSystem eigh(const Matrix& a);
Vector eigvalsh(const Matrix& a);

/// max |a - a^T|
double asymmetry(const Matrix& a);

}  // namespace hqr
