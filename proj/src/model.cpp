#include "hqr/model.hpp"

#include <cmath>
#include <string>

#include "hqr/error.hpp"
#include "hqr/units.hpp"

namespace hqr {

namespace {

bool positive_finite(double x) { return std::isfinite(x) && x > 0.0; }

double resolve_center(const CouplingShape& shape, const HqrModel& model) {
    if (shape.center) return *shape.center;
    if (shape.amplitude == 0.0) {
        // A zero profile never needs a crossing to exist.
        try {
            return crossing_point(model);
        } catch (const NoCrossingError&) {
            return 0.0;
        }
    }
    return crossing_point(model);
}

}  // namespace

double GaussianProfile::operator()(double q) const {
    if (q == center) return amplitude;
    const double d = (q - center) / width;
    return amplitude * std::exp(-0.5 * d * d);
}

void GaussianProfile::validate() const {
    if (!(width > 0.0) || !std::isfinite(width))
        throw ConfigError("Gaussian profile width must be positive");
    if (!std::isfinite(amplitude) || !std::isfinite(center))
        throw ConfigError("Gaussian profile amplitude and center must be finite");
}

double HqrModel::huang_rhys() const { return hqr::huang_rhys(q_e, mass, omega_g); }

double HqrModel::squeeze() const { return squeeze_factor(omega_g, omega_e); }

double HqrModel::V_g(double q) const { return 0.5 * mass * omega_g * omega_g * q * q; }

double HqrModel::V_e(double q) const {
    const double d = q - q_e;
    return omega_ge + 0.5 * mass * omega_e * omega_e * d * d;
}

double HqrModel::V_X(double q) const {
    const double w = ground_frequency();
    const double d = q - q_X;
    return 0.5 * mass * w * w * d * d;
}

GaussianProfile HqrModel::dc_profile() const {
    return {dc.amplitude, resolve_center(dc, *this), dc.width};
}

GaussianProfile HqrModel::dipole_profile() const {
    return {dipole.amplitude, resolve_center(dipole, *this), dipole.width};
}

void HqrModel::validate() const {
    if (!positive_finite(omega_g)) throw ConfigError("omega_g must be positive");
    if (!positive_finite(omega_e)) throw ConfigError("omega_e must be positive");
    if (!positive_finite(mass)) throw ConfigError("mass must be positive");
    if (!(omega_ge >= 0.0) || !std::isfinite(omega_ge))
        throw ConfigError("omega_ge must be non-negative");
    if (omega_X && !positive_finite(*omega_X)) throw ConfigError("omega_X must be positive");
    if (!std::isfinite(q_e) || !std::isfinite(q_X)) throw ConfigError("q_e and q_X must be finite");
    GaussianProfile{dc.amplitude, dc.center.value_or(0.0), dc.width}.validate();
    GaussianProfile{dipole.amplitude, dipole.center.value_or(0.0), dipole.width}.validate();
}

double CavitySpec::coupling(double d0) const { return chi * d0 * std::sqrt(0.5 * omega_c); }

void CavitySpec::validate() const {
    if (!positive_finite(omega_c)) throw ConfigError("omega_c must be positive");
    if (!(chi >= 0.0) || !std::isfinite(chi)) throw ConfigError("chi must be non-negative");
}

double chi_for_coupling(double g, double d0, double omega_c) {
    return g / (d0 * std::sqrt(0.5 * omega_c));
}

double huang_rhys(double q_e, double mass, double omega_g) {
    return q_e * std::sqrt(0.5 * mass * omega_g);
}

double displacement_for_huang_rhys(double lambda, double mass, double omega_g) {
    return lambda * std::sqrt(2.0 / (mass * omega_g));
}

double squeeze_factor(double omega_g, double omega_e) { return 0.5 * std::log(omega_e / omega_g); }

double crossing_point(const HqrModel& m) {
    const double r = m.squeeze();
    const double M = m.mass;
    double q_c = 0.0;
    if (std::abs(r) < 1e-10) {
        if (m.q_e == 0.0) throw NoCrossingError("no crossing: parallel surfaces (q_e = 0, equal frequencies)");
        q_c = 0.5 * m.q_e + m.omega_ge / (M * m.q_e * m.omega_g * m.omega_g);
    } else if (m.q_e == 0.0) {
        const double d = m.omega_g * m.omega_g - m.omega_e * m.omega_e;
        const double x = 2.0 * m.omega_ge / (M * d);
        if (x < 0.0) throw NoCrossingError("no crossing: negative discriminant");
        q_c = std::sqrt(x);
    } else {
        // q_c = q_e/(1-e) [1 - sqrt(A)], A = e + 2 omega_ge (e-1)/(M omega_e^2 q_e^2),
        // e = exp(-4r). Rationalized as q_e (1-A)/((1-e)(1+sqrt A)) to stay finite as r -> 0.
        const double e = std::exp(-4.0 * r);
        const double s = 2.0 * m.omega_ge / (M * m.omega_e * m.omega_e * m.q_e * m.q_e);
        const double A = e + s * (e - 1.0);
        if (A < 0.0) throw NoCrossingError("no crossing: negative discriminant");
        q_c = m.q_e * (1.0 + s) / (1.0 + std::sqrt(A));
    }
    const double residual = std::abs(m.V_g(q_c) - m.V_e(q_c));
    if (!(residual < 1e-10))
        throw NumericalError("crossing residual " + std::to_string(residual) + " hartree exceeds 1e-10");
    return q_c;
}

double crossing_energy(const HqrModel& m) {
    const double q_c = crossing_point(m);
    return 0.5 * m.mass * m.omega_g * m.omega_g * q_c * q_c;
}

HqrModel mirror_model(const HqrModel& m) {
    HqrModel out = m;
    out.q_e = -m.q_e;
    out.q_X = out.q_e - (m.q_e - m.q_X);
    if (m.dc.center || m.dipole.center) {
        double shift = 0.0;
        try {
            shift = crossing_point(out) - crossing_point(m);
        } catch (const NoCrossingError&) {
            shift = 0.0;
        }
        if (m.dc.center) out.dc.center = *m.dc.center + shift;
        if (m.dipole.center) out.dipole.center = *m.dipole.center + shift;
    }
    return out;
}

HqrModel with_huang_rhys(const HqrModel& m, double lambda) {
    HqrModel out = m;
    out.q_e = displacement_for_huang_rhys(lambda, m.mass, m.omega_g);
    return out;
}

HqrModel launch_model(const HqrModel& m, double lambda) {
    HqrModel out = m;
    const double offset = m.q_e - m.q_X;
    out.q_e = displacement_for_huang_rhys(std::abs(lambda), m.mass, m.omega_g);
    out.q_X = out.q_e - std::abs(offset);
    return lambda < 0.0 ? mirror_model(out) : out;
}

namespace presets {

double cah_reduced_mass() {
    constexpr double m_ca = 40.078;
    constexpr double m_h = 1.00784;
    return units::amu(m_ca * m_h / (m_ca + m_h));
}

const double cah_dipole_peak = 1.25;

HqrModel two_level_demo() {
    HqrModel m;
    m.omega_g = units::ev(0.2);
    m.omega_e = units::ev(0.1);
    m.omega_ge = units::ev(1.0);
    m.mass = cah_reduced_mass();
    m.q_e = 1.7;
    m.q_X = 0.0;
    m.dc = {units::ev(0.05), 0.21, std::nullopt};
    m.dipole = {1.0, 0.95, std::nullopt};
    return m;
}

HqrModel cah_fit() {
    HqrModel m;
    m.omega_g = units::wavenumber(1350.0);
    m.omega_e = units::wavenumber(950.0);
    m.omega_ge = units::wavenumber(2500.0);
    m.mass = cah_reduced_mass();
    m.q_e = 1.4;
    m.q_X = -1.1;
    m.dc = {units::ev(cah_dc_amplitude_ev), 0.21, std::nullopt};
    m.dipole = {cah_dipole_peak, 0.95, std::nullopt};
    return m;
}

}  // namespace presets

}  // namespace hqr
