#include "hqr/linalg.hpp"

#include <lapacke.h>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <string>

#include "hqr/error.hpp"

namespace hqr {

namespace {

std::atomic<bool> fallback_warned{false};

void run_dsyevd(char jobz, Matrix& a, Vector& w) {
    const auto n = static_cast<lapack_int>(a.rows());
    w.resize(n);
    if (n == 0) return;
    const lapack_int info = LAPACKE_dsyevd(LAPACK_COL_MAJOR, jobz, 'U', n, a.data(), n, w.data());
    if (info != 0) throw NumericalError("dsyevd failed with info = " + std::to_string(info));
}

Matrix symmetrized_upper(const Matrix& a) {
    Matrix s = a.triangularView<Eigen::Upper>();
    s.triangularView<Eigen::StrictlyLower>() = a.transpose().triangularView<Eigen::StrictlyLower>();
    return s;
}

// Trace and Frobenius norm are invariants of the spectrum; both are O(n^2).
bool invariants_hold(const Matrix& s, const Vector& w) {
    const double scale = std::max(1.0, s.cwiseAbs().maxCoeff());
    const double n = static_cast<double>(s.rows());
    const double tol = 1e-9 * scale * n;
    if (std::abs(s.trace() - w.sum()) > tol) return false;
    const double fro2 = s.squaredNorm();
    return std::abs(fro2 - w.squaredNorm()) <= 1e-9 * std::max(1.0, fro2) * n;
}

// Residual and orthogonality on a few evenly spaced columns.
bool sampled_columns_hold(const Matrix& s, const EigenSystem& es) {
    const Eigen::Index n = s.rows();
    const double scale = std::max(1.0, s.cwiseAbs().maxCoeff());
    const Eigen::Index samples = std::min<Eigen::Index>(n, 9);
    for (Eigen::Index i = 0; i < samples; ++i) {
        const Eigen::Index k = samples == 1 ? 0 : i * (n - 1) / (samples - 1);
        const Vector v = es.vectors.col(k);
        if (std::abs(v.norm() - 1.0) > 1e-9) return false;
        const double res = (s * v - es.values(k) * v).cwiseAbs().maxCoeff();
        if (res > 1e-8 * scale) return false;
        const Eigen::Index j = (k + n / 2 + 1) % n;
        if (j != k && std::abs(es.vectors.col(j).dot(v)) > 1e-9) return false;
    }
    return true;
}

void warn_fallback() {
    if (!fallback_warned.exchange(true))
        std::fprintf(stderr,
                     "hqr: LAPACK eigensolver failed validation, using the Eigen solver instead "
                     "(some OpenBLAS builds pick a faulty kernel; try OPENBLAS_CORETYPE)\n");
}

}  // namespace

EigenSystem eigh(const Matrix& a) {
    if (a.rows() != a.cols()) throw NumericalError("eigh: matrix is not square");
    EigenSystem es;
    es.vectors = a;
    run_dsyevd('V', es.vectors, es.values);
    const Matrix s = symmetrized_upper(a);
    if (invariants_hold(s, es.values) && sampled_columns_hold(s, es)) return es;

    warn_fallback();
    Eigen::SelfAdjointEigenSolver<Matrix> solver(s);
    if (solver.info() != Eigen::Success) throw NumericalError("eigh: Eigen solver did not converge");
    es.values = solver.eigenvalues();
    es.vectors = solver.eigenvectors();
    return es;
}

Vector eigvalsh(const Matrix& a) {
    if (a.rows() != a.cols()) throw NumericalError("eigvalsh: matrix is not square");
    Matrix work = a;
    Vector w;
    run_dsyevd('N', work, w);
    const Matrix s = symmetrized_upper(a);
    if (invariants_hold(s, w)) return w;

    warn_fallback();
    Eigen::SelfAdjointEigenSolver<Matrix> solver(s, Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success) throw NumericalError("eigvalsh: Eigen solver did not converge");
    return solver.eigenvalues();
}

double asymmetry(const Matrix& a) {
    if (a.size() == 0) return 0.0;
    return (a - a.transpose()).cwiseAbs().maxCoeff();
}

}  // namespace hqr
