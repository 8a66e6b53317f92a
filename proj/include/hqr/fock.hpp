#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <utility>

#include "hqr/linalg.hpp"
#include "hqr/model.hpp"

namespace hqr {

/// Tensor basis |n_c; s, n> with n_c photons, electronic state s (0 = g, 1 = e)
/// and n vibrational quanta of the g oscillator.
/// Flat index = (n_c * 2 + s) * n_vib + n.
struct BasisSpec {
    int n_vib = 110;
    int n_fock = 11;

    int dim() const { return 2 * n_vib * n_fock; }
    int index(int n_c, int s, int n) const { return (n_c * 2 + s) * n_vib + n; }
    int block_offset(int n_c, int s) const { return index(n_c, s, 0); }
    void validate() const;
};

/// Real matrix with a label. Every operator used by the model is real in the
/// number basis, so real storage is exact.
struct OperatorMatrix {
    Matrix entries;
    std::string label;

    int dim() const { return static_cast<int>(entries.rows()); }
};

struct LadderPair {
    OperatorMatrix lower;  // b,   lower(i-1, i) = sqrt(i)
    OperatorMatrix raise;  // b^dagger
};

LadderPair ladder_matrices(int n);

/// Smallest n for which the displaced vacuum leaks less than `tol` into the
/// last basis state: exp(-lambda^2) lambda^(2(n-1)) / (n-1)! < tol.
int displacement_min_size(double lambda, double tol = 1e-12);
int squeeze_min_size(double r, double tol = 1e-12);

/// exp(lambda (b^dagger - b)) on the truncated space. Throws TruncationError if
/// n is too small for the leakage bound.
OperatorMatrix displacement_matrix(double lambda, int n);

/// exp(r (b^2 - b^dagger^2) / 2) on the truncated space.
OperatorMatrix squeeze_matrix(double r, int n);

/// D(lambda) S(r) b^dagger b S(r)^dagger D(lambda)^dagger: the number operator of
/// the displaced, squeezed oscillator written in the unshifted basis.
OperatorMatrix shifted_number_operator(double lambda, double r, int n);

/// q = sqrt(1 / (2 M omega)) (b^dagger + b) + shift
OperatorMatrix position_operator(int n, double mass, double omega, double shift = 0.0);

/// profile(q) for the position operator above, through q = W diag(x) W^T
/// (the eigenvalues x are Gauss-Hermite nodes).
OperatorMatrix profile_operator(const GaussianProfile& profile, int n, double mass, double omega,
                                double shift = 0.0);

struct AssemblyOptions {
    bool include_counter_rotating = true;
    /// Replace the Gaussian dipole envelope by its peak value (d(q) = d0).
    bool constant_dipole = false;
    /// Permanent dipoles d_gg(q), d_ee(q) coupling to (a^dagger + a) without
    /// changing the electronic state.
    std::optional<std::pair<GaussianProfile, GaussianProfile>> diagonal_dipoles;
};

/// H = omega_g (N + 1/2)|g><g| + [omega_ge + omega_e (N_e + 1/2)]|e><e|
///   + V_D(q)(s+ + s-) + omega_c a^dagger a + g f(q)(s+ + s-)(a^dagger + a)
OperatorMatrix assemble_hamiltonian(const HqrModel& model, const CavitySpec& cavity,
                                    const BasisSpec& basis, const AssemblyOptions& options = {});

/// The same Hamiltonian after U = |g><g| + |e><e| S^dagger D^dagger, so both
/// electronic states share the plain number basis:
///   omega_c a^dagger a + omega_ge s+s- + (omega_g s-s+ + omega_e s+s-)(N + 1/2)
///   + [V(q_e') S^dagger D^dagger s+ + h.c.] + [g(q_e') S^dagger D^dagger s+ + h.c.](a^dagger + a)
/// where q_e' = sqrt(1/(2 M omega_e))(b^dagger + b) + q_e is the lab coordinate
/// seen from the e frame.
OperatorMatrix assemble_transformed_hamiltonian(const HqrModel& model, const CavitySpec& cavity,
                                                const BasisSpec& basis);

/// Diagonal a^dagger a + s+ s- on the tensor basis.
Vector excitation_number_diagonal(const BasisSpec& basis);
/// Diagonal a^dagger a on the tensor basis.
Vector photon_number_diagonal(const BasisSpec& basis);

/// Text dump: a header with the dimension and ordering contract, then one row
/// per line of "re im" pairs.
void write_matrix(std::ostream& out, const OperatorMatrix& op, const BasisSpec& basis);

}  // namespace hqr
