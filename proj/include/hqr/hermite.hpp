#pragma once

#include <vector>

#include "hqr/linalg.hpp"

namespace hqr {

/// Normalized Hermite functions phi_k(x) = (2^k k! sqrt(pi))^(-1/2) H_k(x) exp(-x^2/2)
/// for k < n, evaluated by the stable three-term recurrence. Row k, column j
/// holds phi_k(x_j).
Matrix hermite_functions(int n, const std::vector<double>& x);

/// Overlaps <k | phi> of the oscillator eigenstates |k> (mass, omega, centered
/// at 0) with the normalized Gaussian ground state of an oscillator of frequency
/// omega_0 centered at q_0. Computed by quadrature of the recurrence on a grid
/// fine enough to be exact to machine precision.
Vector gaussian_overlaps(int n, double mass, double omega, double omega_0, double q_0);

}  // namespace hqr
