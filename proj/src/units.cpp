#include "hqr/units.hpp"

#include <string>

#include "hqr/error.hpp"

namespace hqr {

double atomic_scale(Unit u) {
    switch (u) {
        case Unit::hartree: return 1.0;
        case Unit::eV: return units::hartree_per_ev;
        case Unit::wavenumber: return units::hartree_per_wavenumber;
        case Unit::bohr: return 1.0;
        case Unit::amu: return units::electron_mass_per_amu;
        case Unit::electron_mass: return 1.0;
        case Unit::femtosecond: return units::atomic_time_per_fs;
        case Unit::atomic_time: return 1.0;
        case Unit::dimensionless: return 1.0;
    }
    throw ConfigError("unknown unit");
}

double to_atomic(const Quantity& q) { return q.value * atomic_scale(q.unit); }

Quantity from_atomic(double value, Unit u) { return {value / atomic_scale(u), u}; }

Unit parse_unit(std::string_view text) {
    const std::string t(text);
    if (t == "hartree" || t == "Eh" || t == "au" || t == "a.u.") return Unit::hartree;
    if (t == "eV" || t == "ev") return Unit::eV;
    if (t == "cm-1" || t == "cm^-1" || t == "wavenumber") return Unit::wavenumber;
    if (t == "bohr" || t == "a0") return Unit::bohr;
    if (t == "amu" || t == "u" || t == "Da") return Unit::amu;
    if (t == "me" || t == "electron-mass") return Unit::electron_mass;
    if (t == "fs") return Unit::femtosecond;
    if (t == "atu" || t == "atomic-time") return Unit::atomic_time;
    if (t.empty() || t == "1" || t == "dimensionless") return Unit::dimensionless;
    throw ConfigError("unknown unit '" + t + "'");
}

std::string_view unit_name(Unit u) {
    switch (u) {
        case Unit::hartree: return "hartree";
        case Unit::eV: return "eV";
        case Unit::wavenumber: return "cm-1";
        case Unit::bohr: return "bohr";
        case Unit::amu: return "amu";
        case Unit::electron_mass: return "me";
        case Unit::femtosecond: return "fs";
        case Unit::atomic_time: return "atu";
        case Unit::dimensionless: return "dimensionless";
    }
    return "?";
}

Dimension dimension_of(Unit u) {
    switch (u) {
        case Unit::hartree:
        case Unit::eV:
        case Unit::wavenumber: return Dimension::energy;
        case Unit::bohr: return Dimension::length;
        case Unit::amu:
        case Unit::electron_mass: return Dimension::mass;
        case Unit::femtosecond:
        case Unit::atomic_time: return Dimension::time;
        case Unit::dimensionless: return Dimension::none;
    }
    return Dimension::none;
}

}  // namespace hqr
