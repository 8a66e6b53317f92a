#include "hqr/hermite.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace hqr {

Matrix hermite_functions(int n, const std::vector<double>& x) {
    const auto m = static_cast<Eigen::Index>(x.size());
    Matrix out = Matrix::Zero(n, m);
    if (n == 0) return out;
    const double c0 = std::pow(std::numbers::pi, -0.25);
    for (Eigen::Index j = 0; j < m; ++j) {
        const double xj = x[static_cast<std::size_t>(j)];
        double prev = 0.0;
        double cur = c0 * std::exp(-0.5 * xj * xj);
        out(0, j) = cur;
        for (int k = 1; k < n; ++k) {
            const double next = std::sqrt(2.0 / k) * xj * cur - std::sqrt((k - 1.0) / k) * prev;
            prev = cur;
            cur = next;
            out(k, j) = cur;
        }
    }
    return out;
}

Vector gaussian_overlaps(int n, double mass, double omega, double omega_0, double q_0) {
    // Dimensionless coordinate of the target oscillator: x = q sqrt(M omega).
    const double scale = std::sqrt(mass * omega);
    const double x0 = q_0 * scale;
    const double ratio = omega_0 / omega;
    // The Hermite functions reach to |x| ~ sqrt(2n + 1); the Gaussian to a few
    // widths around x0.
    const double reach = std::sqrt(2.0 * n + 1.0) + 12.0;
    const double packet = 12.0 / std::sqrt(ratio);
    const double lo = std::min(-reach, x0 - packet);
    const double hi = std::max(reach, x0 + packet);
    const int points = std::max(4001, static_cast<int>((hi - lo) / 0.01) + 1);
    const double h = (hi - lo) / (points - 1);
    std::vector<double> x(static_cast<std::size_t>(points));
    for (int j = 0; j < points; ++j) x[static_cast<std::size_t>(j)] = lo + j * h;

    const Matrix phi = hermite_functions(n, x);
    Vector gauss(points);
    const double norm = std::pow(ratio / std::numbers::pi, 0.25);
    for (int j = 0; j < points; ++j) {
        const double d = x[static_cast<std::size_t>(j)] - x0;
        gauss(j) = norm * std::exp(-0.5 * ratio * d * d);
    }
    // Trapezoid rule on a rapidly decaying integrand is spectrally accurate.
    return h * (phi * gauss);
}

}  // namespace hqr
