#pragma once

#include <string_view>

namespace hqr {

// Everything inside the library is in atomic units (hbar = m_e = e = 1).
// User-facing values carry one of these units.
enum class Unit {
    hartree,
    eV,
    wavenumber,
    bohr,
    amu,
    electron_mass,
    femtosecond,
    atomic_time,
    dimensionless,
};

namespace units {
inline constexpr double hartree_per_ev = 0.036749322176;
inline constexpr double hartree_per_wavenumber = 4.556335253e-6;
inline constexpr double electron_mass_per_amu = 1822.888486209;
inline constexpr double atomic_time_per_fs = 41.341373336;

inline constexpr double ev(double x) { return x * hartree_per_ev; }
inline constexpr double wavenumber(double x) { return x * hartree_per_wavenumber; }
inline constexpr double amu(double x) { return x * electron_mass_per_amu; }
inline constexpr double fs(double x) { return x * atomic_time_per_fs; }

inline constexpr double to_ev(double hartree) { return hartree / hartree_per_ev; }
inline constexpr double to_fs(double atomic_time) { return atomic_time / atomic_time_per_fs; }
}  // namespace units

struct Quantity {
    double value = 0.0;
    Unit unit = Unit::dimensionless;
};

// Multiplier taking a value in `u` to atomic units.
double atomic_scale(Unit u);

double to_atomic(const Quantity& q);
Quantity from_atomic(double value, Unit u);

// Accepts "hartree"/"Eh"/"au", "eV", "cm-1"/"wavenumber", "bohr"/"a0", "amu"/"u",
// "me"/"electron-mass", "fs", "atu"/"atomic-time", "" / "1" / "dimensionless".
// Throws ConfigError on anything else.
Unit parse_unit(std::string_view text);
std::string_view unit_name(Unit u);

// Physical dimension of a unit, used to check that e.g. a length key was not
// given in eV.
enum class Dimension { energy, length, mass, time, none };
Dimension dimension_of(Unit u);

}  // namespace hqr
