#pragma once

#include <array>
#include <complex>
#include <deque>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "hqr/fock.hpp"

namespace hqr {

/// Amplitudes over the tensor basis |n_c; s, n> at a time in fs.
struct PolaritonState {
    ComplexVector amplitudes;
    BasisSpec basis;
    double time_fs = 0.0;

    double norm() const { return amplitudes.norm(); }
    std::complex<double> amplitude(int n_c, int s, int n) const { return amplitudes(basis.index(n_c, s, n)); }
};

/// One-norm shortfall of the Franck-Condon vibrational amplitudes captured by
/// n_vib basis states, 1 - sum_{n < n_vib} |<n|X, 0>|^2, from exact overlaps.
double franck_condon_deficit(const HqrModel& model, int n_vib);

/// |0; e> times the ground vibrational state of the X surface, expanded in the
/// g-oscillator basis as D(lambda_X) S(r_X)|0>. Throws TruncationError when the
/// basis misses more than `max_deficit` of the norm.
PolaritonState franck_condon_state(const HqrModel& model, const BasisSpec& basis, double max_deficit = 1e-6);

/// Coherent packet D(lambda_0)|0> on surface s with n_c photons, centered at
/// q_0 in the g-oscillator basis.
PolaritonState coherent_packet(const HqrModel& model, const BasisSpec& basis, int n_c, int s, double q_0);

struct Observables {
    double P_g = 0.0;
    double P_e = 0.0;
    /// proj[n_c][s] = sum_n |<n_c; s, n|psi>|^2
    std::vector<std::array<double, 2>> proj;
    double mean_photons = 0.0;
    /// <H> in hartree; NaN unless a Hamiltonian was supplied.
    double energy = 0.0;
};

Observables observables(const PolaritonState& state, const OperatorMatrix* h = nullptr);

/// Real channels sampled on a common time grid (fs).
struct TimeSeries {
    std::vector<double> times;
    std::vector<std::string> names;
    std::deque<std::vector<double>> columns;  // deque: add() references stay valid

    std::vector<double>& add(const std::string& name);
    bool has(std::string_view name) const;
    const std::vector<double>& channel(std::string_view name) const;
    std::size_t size() const { return times.size(); }
};

/// CSV with a time_fs column then one column per channel, 12 significant digits.
void write_time_series_csv(std::ostream& out, const TimeSeries& series);

/// Uniform grid t0, t0 + dt, ... up to and including t1 (fs).
std::vector<double> time_grid(double t0, double t1, double dt);

/// Exact evolution psi(t) = W exp(-i Lambda t) W^T psi(0) from one
/// diagonalization of a time-independent Hamiltonian.
class SpectralPropagator {
public:
    explicit SpectralPropagator(const OperatorMatrix& h);

    const OperatorMatrix& hamiltonian() const { return h_; }
    const EigenSystem& eigensystem() const { return eig_; }
    double ground_energy() const { return eig_.values(0); }

    PolaritonState evolve(const PolaritonState& psi0, double t_fs) const;

private:
    OperatorMatrix h_;
    EigenSystem eig_;
};

struct PropagationOptions {
    bool store_states = false;
    /// n_vib x n_vib position matrix; adds q_mean, q_g and q_e channels (bohr).
    std::optional<Matrix> position;
};

struct PropagationResult {
    TimeSeries series;
    std::vector<PolaritonState> states;
};

/// Channels: P_g, P_e, proj_<n_c>_<g|e>, mean_photons, excitations
/// (<a^dagger a + s+ s->), energy_eV, norm, and the position channels if asked.
PropagationResult propagate(const SpectralPropagator& propagator, const PolaritonState& psi0,
                            const std::vector<double>& times_fs, const PropagationOptions& options = {});

PropagationResult propagate(const OperatorMatrix& h, const PolaritonState& psi0, const std::vector<double>& times_fs,
                            const PropagationOptions& options = {});

struct PeriodEstimate {
    std::optional<double> period_fs;
    /// Normalized autocorrelation at the selected lag (0 when undefined).
    double strength = 0.0;
};

/// Dominant revival period of a channel from the first autocorrelation maximum
/// after its first zero crossing. Undefined for flat channels or when the peak
/// correlation is below `min_strength`.
PeriodEstimate wavepacket_period(const TimeSeries& series, std::string_view channel, double min_strength = 0.5);

/// Largest mean_photons value with t in [t0, t1]. Throws ConfigError when no
/// sample falls inside the window.
double max_mean_photons(const TimeSeries& series, double t0, double t1);

/// Time of that maximum.
double argmax_mean_photons(const TimeSeries& series, double t0, double t1);

}  // namespace hqr
