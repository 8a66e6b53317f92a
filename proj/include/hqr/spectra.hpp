#pragma once

#include <array>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "hqr/fock.hpp"

namespace hqr {

/// Ascending eigenvalues and orthonormal eigenvectors of a symmetric operator.
/// Rejects input whose asymmetry exceeds 1e-12 (absolute).
EigenSystem diagonalize(const OperatorMatrix& h);

/// max_k ||H v_k - E_k v_k|| / ||H||_max over the supplied pairs.
double eigen_residual(const OperatorMatrix& h, const EigenSystem& es);

enum class SweepCoupling {
    /// d(q) = d0 everywhere and no diabatic coupling.
    constant_dipole_no_dc,
    /// Gaussian d(q) and V_D(q) centered at q_c(r, lambda) of each point.
    full,
};

struct SweepOptions {
    SweepCoupling coupling = SweepCoupling::full;
    bool store_vectors = false;
    int workers = 0;  // 0: hardware concurrency
};

/// Eigenvalues at each point of a one-parameter sweep.
struct EigenTable {
    std::string parameter;
    std::vector<double> values;
    std::vector<Vector> energies;  // full sorted spectrum per point (hartree)
    std::vector<Matrix> vectors;   // empty unless requested
    HqrModel template_model;
    BasisSpec basis;

    /// Energies of point i restricted to [lo, hi].
    Vector window(std::size_t i, double lo, double hi) const;
};

EigenTable lambda_sweep(const HqrModel& model, const std::vector<double>& lambdas, const CavitySpec& cavity,
                        const BasisSpec& basis, const SweepOptions& options = {});

/// Builds the model used at one sweep point (q_e from lambda, couplings per mode).
HqrModel sweep_point_model(const HqrModel& model, double lambda, SweepCoupling coupling);

/// Gap of the polariton doublet formed from |1; g, n> and |0; e, n~> at
/// lambda = 0 (n~ the n-th level of the e oscillator). The doublet is the pair
/// of eigenstates carrying the largest weight on those two bare states.
/// Requires stored eigenvectors. Throws NumericalError when the two selected
/// eigenstates carry less than half of the bare-pair weight (no doublet).
double rabi_splitting(const EigenTable& table, int pair_index);

/// Per step, the index in point i+1 matched to each level of point i by nearest
/// energy (ties broken by eigenvector overlap when stored).
std::vector<std::vector<int>> match_levels(const EigenTable& table, int n_levels);

/// CSV: first column the sweep value, then energies in eV inside [lo, hi].
/// Rows with fewer levels are padded with empty fields.
void write_eigen_table_csv(std::ostream& out, const EigenTable& table, double lo, double hi);

struct Crossing {
    int n_c = 0;
    double q = 0.0;
    double energy = 0.0;
    bool inside_grid = true;
};

/// DC at q_c; LIC_R for pairs {|n_c+1; g>, |n_c; e>} where V_e = V_g + omega_c;
/// LIC_CR for pairs {|n_c; g>, |n_c+1; e>} where V_e + omega_c = V_g. The LIC
/// root is the one on the same branch as q_c (nearest to it).
struct CrossingGeometry {
    double dc_position = 0.0;
    std::vector<Crossing> dc;
    std::vector<Crossing> lic_r;
    std::vector<Crossing> lic_cr;
    /// Names of crossings that do not exist or fall outside the q grid.
    std::vector<std::string> missing;
};

struct DressedCurves {
    std::vector<double> q;
    int n_c_max = 0;
    /// curves[n_c][s][i] = V_s(q_i) + n_c omega_c
    std::vector<std::array<std::vector<double>, 2>> curves;
    CrossingGeometry crossings;
};

DressedCurves dressed_curves(const HqrModel& model, const CavitySpec& cavity, int n_c_max,
                             const std::vector<double>& q_grid);

struct DressedState {
    int n_c;
    int s;
    double minimum;
};

/// Dressed states |n_c; s> (n_c <= n_c_max) whose potential minimum lies below e0.
std::vector<DressedState> open_channels(const HqrModel& model, const CavitySpec& cavity, int n_c_max,
                                        double e0);

}  // namespace hqr
