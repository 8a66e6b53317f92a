#pragma once

#include <optional>

namespace hqr {

/// Gaussian amplitude * exp(-(q - center)^2 / (2 width^2)).
struct GaussianProfile {
    double amplitude = 0.0;
    double center = 0.0;
    double width = 1.0;

    double operator()(double q) const;
    void validate() const;
};

/// Profile whose center defaults to the diabatic crossing point of the model
/// it belongs to. Setting `center` pins it instead.
struct CouplingShape {
    double amplitude = 0.0;
    double width = 1.0;
    std::optional<double> center;
};

/// Two diabatic harmonic surfaces g and e along one coordinate q, the ground
/// surface X the Franck-Condon state is taken from, and the Gaussian-shaped
/// diabatic and transition-dipole couplings. Atomic units throughout.
///
///   V_g(q) = M omega_g^2 q^2 / 2
///   V_e(q) = omega_ge + M omega_e^2 (q - q_e)^2 / 2
///   V_X(q) = M omega_X^2 (q - q_X)^2 / 2
struct HqrModel {
    double omega_g = 0.0;
    double omega_e = 0.0;
    double omega_ge = 0.0;
    double mass = 0.0;
    double q_e = 0.0;
    double q_X = 0.0;
    std::optional<double> omega_X;  // unset: same as omega_g

    CouplingShape dc;      // V_D(q), amplitude in hartree
    CouplingShape dipole;  // d(q), amplitude d0 in atomic units

    static constexpr double q_g = 0.0;

    double huang_rhys() const;
    double squeeze() const;
    double ground_frequency() const { return omega_X.value_or(omega_g); }

    double V_g(double q) const;
    double V_e(double q) const;
    double V_X(double q) const;

    /// Profiles with their centers resolved (explicit center, or the crossing).
    GaussianProfile dc_profile() const;
    GaussianProfile dipole_profile() const;

    /// Throws ConfigError if any invariant is broken.
    void validate() const;
};

/// Cavity mode frequency and dimensionless coupling strength chi.
struct CavitySpec {
    double omega_c = 0.0;
    double chi = 0.0;

    /// g = chi * d0 * sqrt(omega_c / 2)
    double coupling(double d0) const;
    void validate() const;
};

/// chi that produces coupling `g` for dipole peak `d0`.
double chi_for_coupling(double g, double d0, double omega_c);

double huang_rhys(double q_e, double mass, double omega_g);
double displacement_for_huang_rhys(double lambda, double mass, double omega_g);
double squeeze_factor(double omega_g, double omega_e);

/// Diabatic crossing q_c of V_g and V_e. Throws NoCrossingError when the
/// curves do not cross. For q_e = 0 with unequal frequencies the curves cross
/// symmetrically at +-q*; the positive root (the q_e -> 0+ limit) is returned.
double crossing_point(const HqrModel& model);

/// V_c = M omega_g^2 q_c^2 / 2.
double crossing_energy(const HqrModel& model);

/// Reflects the excited surface through q = 0 (q_e -> -q_e) and moves q_X with
/// it so that the signed offset q_e - q_X is unchanged; the Franck-Condon packet
/// still starts on the same side and moves the same way. Explicit profile
/// centers keep their offset from the crossing. Involution.
HqrModel mirror_model(const HqrModel& model);

/// Copy of `model` with q_e set from a Huang-Rhys factor.
HqrModel with_huang_rhys(const HqrModel& model, double lambda);

/// Model at Huang-Rhys factor `lambda` whose Franck-Condon packet starts at
/// the left turning point, |q_e - q_X| kept from `model`: q_e = |lambda|
/// scale, q_X to its left, and negative lambda through mirror_model.
HqrModel launch_model(const HqrModel& model, double lambda);

namespace presets {

/// Reduced mass of 40Ca-1H from the standard atomic masses, in electron masses.
double cah_reduced_mass();

/// DC amplitude giving 20% transfer to |g> at t = 10 fs for the CaH-fit model
/// without cavity (one-dimensional search, see tools/calibrate.cpp).
inline constexpr double cah_dc_amplitude_ev = 0.2535398862;

/// Transition-dipole peak for the CaH-fit model (atomic units), chosen so the
/// chi = 0.16 photon maximum falls near 9-10 fs (tools/calibrate.cpp).
extern const double cah_dipole_peak;

/// omega_g = 0.2 eV, omega_e = 0.1 eV, omega_ge = 1 eV, q_e = 1.7 bohr,
/// DC width 0.21 bohr, dipole width 0.95 bohr.
HqrModel two_level_demo();

/// omega_g = 1350, omega_e = 950, omega_ge = 2500 cm-1, q_e = 1.4, q_X = -1.1 bohr,
/// DC width 0.21 bohr, dipole width 0.95 bohr.
HqrModel cah_fit();

}  // namespace presets

}  // namespace hqr
