#pragma once

#include <complex>
#include <functional>
#include <iosfwd>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "hqr/dynamics.hpp"
#include "hqr/model.hpp"

namespace hqr {

/// Uniform product grid over the molecular coordinate q (bohr) and the
/// dimensionless photon coordinate x, with a = (x + i p_x) / sqrt(2).
struct GridSpec {
    double q_min = -6.0;
    double q_max = 9.0;
    int n_q = 451;
    double x_min = -60.0;
    double x_max = 60.0;
    int n_x = 181;
    double dt_fs = 0.01;

    double dq() const { return (q_max - q_min) / (n_q - 1); }
    double dx() const { return (x_max - x_min) / (n_x - 1); }
    std::vector<double> q_points() const;
    std::vector<double> x_points() const;
    void validate() const;
};

/// Reference grid: q in [-6, 9] bohr with 451 points and x in [-60, 60]
/// with 181 points.
GridSpec reference_grid();

/// Samples on a strictly increasing q axis with a natural cubic spline through
/// them. Evaluation outside the sampled range throws.
class TabulatedCurve {
public:
    TabulatedCurve(std::vector<double> q, std::vector<double> values);

    double operator()(double q) const;
    const std::vector<double>& q() const { return q_; }
    const std::vector<double>& values() const { return values_; }
    bool covers(double lo, double hi) const { return lo >= q_.front() && hi <= q_.back(); }

private:
    struct Spline;
    std::vector<double> q_;
    std::vector<double> values_;
    std::shared_ptr<const Spline> spline_;
};

/// Named curves in atomic units. Recognized names: V_X, V_g, V_e, V_D (energies)
/// and d_gg, d_ee, d_ge (dipoles).
using CurveSet = std::map<std::string, TabulatedCurve>;

/// Reads the whitespace-separated curve format: a header of name:unit tokens,
/// the first being q:bohr, then one row per sample. '#' starts a comment.
CurveSet load_curves(std::istream& in);
CurveSet load_curves_file(const std::string& path);

/// Writes q:bohr followed by the named curves (energies in eV, dipoles in au),
/// sampled at the q points of the first curve.
void write_curves(std::ostream& out, const CurveSet& curves);

/// Curves sampled from the analytic model at `q`.
CurveSet curves_from_model(const HqrModel& model, const std::vector<double>& q);

/// Everything the grid propagator needs as functions of q, sampled on the grid.
struct GridTables {
    std::vector<double> q;
    double mass = 0.0;
    std::vector<double> V_g;
    std::vector<double> V_e;
    std::vector<double> V_D;
    std::vector<double> d_ge;
    std::optional<std::vector<double>> d_gg;
    std::optional<std::vector<double>> d_ee;
    std::optional<std::vector<double>> V_X;
};

GridTables map_model_to_grid(const HqrModel& model, const GridSpec& grid,
                             const std::optional<std::pair<GaussianProfile, GaussianProfile>>& diagonal_dipoles = {});

/// Requires V_g and V_e covering the q grid; absent V_D and d_ge are zero.
GridTables tables_from_curves(const CurveSet& curves, const GridSpec& grid, double mass);

/// Two-surface field Psi_s(q, x), row-major with x fastest.
struct GridWavefunction {
    GridSpec grid;
    std::vector<std::complex<double>> g;
    std::vector<std::complex<double>> e;
    double time_fs = 0.0;

    std::size_t at(int iq, int ix) const { return static_cast<std::size_t>(iq) * grid.n_x + ix; }
    double population(int s) const;
    double norm() const { return std::sqrt(population(0) + population(1)); }
};

/// Lowest eigenfunction of -(1/2M) d^2/dq^2 + V(q) on the q grid (sinc DVR),
/// normalized on the grid, positive at its maximum.
std::vector<double> ground_state_1d(const std::vector<double>& potential, double dq, double mass);

/// |0; e> times the ground state of V_X. Needs V_X in the tables.
GridWavefunction franck_condon_grid(const GridTables& tables, const GridSpec& grid);

/// H Psi, with the kinetic terms applied spectrally.
GridWavefunction grid_hamiltonian_apply(const GridWavefunction& wf, const GridTables& tables,
                                        const CavitySpec& cavity);

/// <Psi|H|Psi> in hartree.
double grid_energy(const GridWavefunction& wf, const GridTables& tables, const CavitySpec& cavity);

/// Probability of n_c photons on surface s: int dq |int dx phi_n(x) Psi_s(q, x)|^2.
double photon_projection_grid(const GridWavefunction& wf, int n_c, int s);

/// <a^dagger a> from <x^2 + p_x^2>/2 - 1/2.
double grid_mean_photons(const GridWavefunction& wf);

/// <q> on surface s (normalized by the surface population).
double grid_q_expectation(const GridWavefunction& wf, int s);

/// rho_s(x) = int dq |Psi_s(q, x)|^2 at x_min + j dx / refine. With refine > 1
/// each q row is band-limited (Fourier) interpolated before squaring, so nodes
/// finer than dx stay visible.
std::vector<double> x_marginal(const GridWavefunction& wf, int s, int refine = 1);

/// Interior nodes of a sampled density: local minima between two maxima that
/// exceed `floor` times the global maximum, counted when the minimum is below
/// `depth` times the smaller of the two maxima.
int count_nodes(const std::vector<double>& rho, double floor = 0.01, double depth = 0.5);

/// Complex absorbing potential -i eta (d / width)^2 inside `width` bohr of
/// either q edge (d the depth into the layer).
struct CapSpec {
    double width = 1.0;
    double strength = 0.0;
};

struct DensitySnapshot {
    double time_fs = 0.0;
    GridSpec grid;
    std::vector<double> density_g;
    std::vector<double> density_e;
};

/// Text matrix: a '#' header with n_q, n_x, ranges, time and surface, then n_q
/// rows of n_x values.
void write_snapshot(std::ostream& out, const DensitySnapshot& snap, int s);

struct GridRunOptions {
    double t_final_fs = 35.0;
    double sample_fs = 0.1;
    /// Highest photon number with its own proj_<n>_<s> channel.
    int n_photon_max = 12;
    std::vector<double> snapshot_times;
    std::optional<CapSpec> cap;
    /// Called at every sample time.
    std::function<void(const GridWavefunction&)> observer;
};

struct GridRunResult {
    TimeSeries series;
    std::vector<DensitySnapshot> snapshots;
    GridWavefunction final_state;
};

/// Strang split-operator propagation: half potential step (exact 2 x 2 exponential
/// per grid point), full kinetic step in momentum space, half potential step.
/// Channels match the spectral ones: P_g, P_e, proj_<n>_<g|e>, mean_photons,
/// excitations, energy_eV, norm, q_mean, q_g, q_e.
GridRunResult grid_propagate(const GridWavefunction& wf0, const GridTables& tables, const CavitySpec& cavity,
                             const GridRunOptions& options);

/// |P_g(t_final; dt) - P_g(t_final; dt/2)|. Above 1e-4 the step is too coarse.
double dt_halving_change(const GridWavefunction& wf0, const GridTables& tables, const CavitySpec& cavity,
                         const GridRunOptions& options);

/// Psi(q, x) -> Psi(-q, x). The q grid must be symmetric about 0.
GridWavefunction reflect_q(const GridWavefunction& wf);

}  // namespace hqr
