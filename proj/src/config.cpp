#include "hqr/config.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

#include "hqr/error.hpp"

namespace hqr {

std::string_view mode_name(RunMode m) {
    switch (m) {
        case RunMode::spectrum: return "spectrum";
        case RunMode::dynamics: return "dynamics";
        case RunMode::grid_dynamics: return "grid-dynamics";
        case RunMode::compare: return "compare";
        case RunMode::sweep: return "sweep";
    }
    return "?";
}

RunMode parse_mode(std::string_view t) {
    if (t == "spectrum") return RunMode::spectrum;
    if (t == "dynamics") return RunMode::dynamics;
    if (t == "grid-dynamics") return RunMode::grid_dynamics;
    if (t == "compare") return RunMode::compare;
    if (t == "sweep") return RunMode::sweep;
    throw ConfigError("unknown mode '" + std::string(t) + "'");
}

namespace {

std::string trim(std::string_view s) {
    std::size_t a = 0;
    std::size_t b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return std::string(s.substr(a, b - a));
}

std::optional<double> to_number(const std::string& s) {
    if (s.empty()) return std::nullopt;
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (end != s.c_str() + s.size() || !std::isfinite(v)) return std::nullopt;
    return v;
}

struct Entry {
    std::string value;
    int line = 0;
    bool used = false;
};

using Section = std::map<std::string, Entry>;

const std::map<std::string, std::set<std::string>>& known_keys() {
    static const std::map<std::string, std::set<std::string>> k = {
        {"model",
         {"preset", "omega_g", "omega_e", "omega_ge", "mass", "q_e", "lambda", "q_X", "omega_X", "dc_amplitude",
          "dc_width", "dc_center", "dipole_peak", "dipole_width", "dipole_center", "curves", "dgg_peak",
          "dgg_center", "dgg_width", "dee_peak", "dee_center", "dee_width"}},
        {"cavity", {"omega_c", "chi"}},
        {"basis", {"n_vib", "n_fock", "counter_rotating"}},
        {"grid",
         {"q_min", "q_max", "n_q", "x_min", "x_max", "n_x", "x_unit", "dt", "photon_max", "cap_width",
          "cap_strength", "check_dt"}},
        {"run", {"mode", "t_final", "sample", "window_lo", "window_hi", "compare_tolerance", "workers"}},
        {"sweep", {"kind", "coupling", "late_window", "lambda", "q_e", "chi", "omega_c", "omega_ge", "omega_g",
                   "omega_e", "dc_amplitude", "dipole_peak"}},
        {"output", {"directory", "snapshots", "channels"}},
    };
    return k;
}

class Reader {
public:
    explicit Reader(std::string_view text) {
        std::istringstream in{std::string(text)};
        std::string raw;
        int line = 0;
        std::string section;
        while (std::getline(in, raw)) {
            ++line;
            if (const auto c = raw.find_first_of("#;"); c != std::string::npos) raw.erase(c);
            const std::string t = trim(raw);
            if (t.empty()) continue;
            if (t.front() == '[') {
                if (t.back() != ']') fail(line, "malformed section header");
                section = trim(std::string_view(t).substr(1, t.size() - 2));
                if (!known_keys().count(section)) fail(line, "unknown section [" + section + "]");
                if (seen_.count(section)) fail(line, "section [" + section + "] appears twice");
                seen_.insert(section);
                sections_[section];
                continue;
            }
            const auto eq = t.find('=');
            if (eq == std::string::npos) fail(line, "expected key = value");
            if (section.empty()) fail(line, "key outside any section");
            const std::string key = trim(std::string_view(t).substr(0, eq));
            const std::string value = trim(std::string_view(t).substr(eq + 1));
            if (!known_keys().at(section).count(key)) fail(line, "unknown key '" + key + "' in [" + section + "]");
            if (value.empty()) fail(line, "empty value for '" + key + "'");
            auto& sec = sections_[section];
            if (sec.count(key)) fail(line, "duplicate key '" + key + "'");
            sec[key] = {value, line, false};
        }
    }

    [[noreturn]] static void fail(int line, const std::string& msg) {
        throw ConfigError("line " + std::to_string(line) + ": " + msg);
    }

    bool has_section(const std::string& s) const { return sections_.count(s) > 0; }

    const Entry* find(const std::string& s, const std::string& k) {
        auto it = sections_.find(s);
        if (it == sections_.end()) return nullptr;
        auto e = it->second.find(k);
        if (e == it->second.end()) return nullptr;
        e->second.used = true;
        return &e->second;
    }

    // Splits "numbers... unit" into the numeric part and an optional unit.
    static std::pair<std::string, std::optional<Unit>> split_unit(const Entry& e) {
        const auto sp = e.value.find_last_of(" \t");
        if (sp != std::string::npos) {
            const std::string tail = trim(std::string_view(e.value).substr(sp + 1));
            if (!to_number(tail) && tail.back() != ',') {
                try {
                    return {trim(std::string_view(e.value).substr(0, sp)), parse_unit(tail)};
                } catch (const ConfigError& err) {
                    fail(e.line, err.what());
                }
            }
        }
        return {e.value, std::nullopt};
    }

    static void check_dimension(const Entry& e, const std::optional<Unit>& u, Dimension want, const std::string& key) {
        if (want == Dimension::none) {
            if (u && dimension_of(*u) != Dimension::none) fail(e.line, key + " is dimensionless");
            return;
        }
        if (!u) fail(e.line, key + " needs a unit");
        if (dimension_of(*u) != want) fail(e.line, "unit " + std::string(unit_name(*u)) + " does not fit " + key);
    }

    std::optional<double> quantity(const std::string& s, const std::string& k, Dimension want) {
        const Entry* e = find(s, k);
        if (!e) return std::nullopt;
        auto [num, unit] = split_unit(*e);
        check_dimension(*e, unit, want, k);
        const auto v = to_number(num);
        if (!v) fail(e->line, "cannot read number '" + num + "' for " + k);
        return *v * (unit ? atomic_scale(*unit) : 1.0);
    }

    std::optional<std::vector<double>> list(const std::string& s, const std::string& k, Dimension want) {
        const Entry* e = find(s, k);
        if (!e) return std::nullopt;
        auto [num, unit] = split_unit(*e);
        check_dimension(*e, unit, want, k);
        const double scale = unit ? atomic_scale(*unit) : 1.0;
        std::vector<double> out;
        if (num.find(':') != std::string::npos) {
            std::vector<double> parts;
            std::stringstream ss(num);
            for (std::string p; std::getline(ss, p, ':');) {
                const auto v = to_number(trim(p));
                if (!v) fail(e->line, "range for " + k + " must be start : stop : step");
                parts.push_back(*v);
            }
            if (parts.size() != 3 || !(parts[2] > 0.0) || parts[1] < parts[0])
                fail(e->line, "range for " + k + " must be start : stop : step with step > 0");
            const auto count = static_cast<long>(std::floor((parts[1] - parts[0]) / parts[2] + 1e-9));
            for (long i = 0; i <= count; ++i) out.push_back((parts[0] + static_cast<double>(i) * parts[2]) * scale);
        } else {
            std::stringstream ss(num);
            for (std::string p; std::getline(ss, p, ',');) {
                const auto v = to_number(trim(p));
                if (!v) fail(e->line, "cannot read list entry '" + trim(p) + "' for " + k);
                out.push_back(*v * scale);
            }
        }
        if (out.empty()) fail(e->line, "empty list for " + k);
        return out;
    }

    std::optional<long> integer(const std::string& s, const std::string& k) {
        const Entry* e = find(s, k);
        if (!e) return std::nullopt;
        char* end = nullptr;
        const long v = std::strtol(e->value.c_str(), &end, 10);
        if (end != e->value.c_str() + e->value.size()) fail(e->line, k + " must be an integer");
        return v;
    }

    std::optional<bool> boolean(const std::string& s, const std::string& k) {
        const Entry* e = find(s, k);
        if (!e) return std::nullopt;
        if (e->value == "true" || e->value == "yes" || e->value == "1") return true;
        if (e->value == "false" || e->value == "no" || e->value == "0") return false;
        fail(e->line, k + " must be true or false");
    }

    std::optional<std::string> text(const std::string& s, const std::string& k) {
        const Entry* e = find(s, k);
        if (!e) return std::nullopt;
        return e->value;
    }

    int line_of(const std::string& s, const std::string& k) {
        const Entry* e = find(s, k);
        return e ? e->line : 0;
    }

private:
    std::map<std::string, Section> sections_;
    std::set<std::string> seen_;
};

template <typename Fn>
void at(Reader& r, const std::string& section, const std::string& key, Fn&& fn) {
    try {
        fn();
    } catch (const ConfigError& e) {
        const int line = r.line_of(section, key);
        const std::string msg = e.what();
        if (line > 0 && msg.rfind("line ", 0) != 0) Reader::fail(line, msg);
        throw;
    }
}

}  // namespace

void RunSpec::validate() const {
    model.validate();
    cavity.validate();
    basis.validate();
    if (grid) grid->validate();
    if (photon_max < 0) throw ConfigError("photon_max must be non-negative");
    if (!(t_final_fs > 0.0)) throw ConfigError("t_final must be positive");
    if (!(sample_fs > 0.0)) throw ConfigError("sample interval must be positive");
    if (!(window_hi > window_lo)) throw ConfigError("energy window must be increasing");
    if (!(compare_tolerance > 0.0)) throw ConfigError("compare_tolerance must be positive");
    if (workers < 0) throw ConfigError("workers must be non-negative");
    if ((mode == RunMode::sweep) != !axes.empty())
        throw ConfigError(mode == RunMode::sweep ? "sweep mode needs at least one axis in [sweep]"
                                                 : "sweep axes are only allowed in sweep mode");
    if (mode == RunMode::sweep && sweep_kind == RunMode::sweep) throw ConfigError("sweep kind cannot be sweep");
    const RunMode effective = mode == RunMode::sweep ? sweep_kind : mode;
    if ((effective == RunMode::grid_dynamics || effective == RunMode::compare) && !grid)
        throw ConfigError(std::string(mode_name(effective)) + " mode needs a [grid] section");
    if (curve_file && effective != RunMode::grid_dynamics)
        throw ConfigError("tabulated curves are only used by grid-dynamics");
    if (cap && !(cap->width > 0.0)) throw ConfigError("cap_width must be positive");
    if (cap && !(cap->strength >= 0.0)) throw ConfigError("cap_strength must be non-negative");
}

GridSpec effective_grid(const RunSpec& spec) {
    if (!spec.grid) throw ConfigError("no grid configured");
    GridSpec g = *spec.grid;
    if (spec.x_mass_weighted) {
        const double s = std::sqrt(spec.cavity.omega_c);
        g.x_min *= s;
        g.x_max *= s;
    }
    return g;
}

RunSpec parse_config(std::string_view text) {
    Reader r(text);
    RunSpec spec;
    using D = Dimension;

    // [run] first: the mode decides which sections are needed.
    if (auto m = r.text("run", "mode")) at(r, "run", "mode", [&] { spec.mode = parse_mode(*m); });
    if (auto v = r.quantity("run", "t_final", D::time)) spec.t_final_fs = units::to_fs(*v);
    if (auto v = r.quantity("run", "sample", D::time)) spec.sample_fs = units::to_fs(*v);
    if (auto v = r.quantity("run", "window_lo", D::energy)) spec.window_lo = *v;
    if (auto v = r.quantity("run", "window_hi", D::energy)) spec.window_hi = *v;
    if (auto v = r.quantity("run", "compare_tolerance", D::none)) spec.compare_tolerance = *v;
    if (auto v = r.integer("run", "workers")) spec.workers = static_cast<int>(*v);

    // [model]
    if (!r.has_section("model")) throw ConfigError("missing section [model]");
    std::string preset = "none";
    if (auto p = r.text("model", "preset")) preset = *p;
    if (preset == "cah-fit") {
        spec.model = presets::cah_fit();
    } else if (preset == "two-level-demo") {
        spec.model = presets::two_level_demo();
    } else if (preset != "none") {
        Reader::fail(r.line_of("model", "preset"), "unknown preset '" + preset + "'");
    }
    const bool from_preset = preset != "none";
    auto require = [&](const char* key, std::optional<double> v, double& field) {
        if (v) {
            field = *v;
        } else if (!from_preset) {
            throw ConfigError(std::string("[model] missing required key ") + key);
        }
    };
    require("omega_g", r.quantity("model", "omega_g", D::energy), spec.model.omega_g);
    require("omega_e", r.quantity("model", "omega_e", D::energy), spec.model.omega_e);
    require("omega_ge", r.quantity("model", "omega_ge", D::energy), spec.model.omega_ge);
    if (auto e = r.text("model", "mass"); e && *e == "cah") {
        spec.model.mass = presets::cah_reduced_mass();
    } else {
        require("mass", r.quantity("model", "mass", D::mass), spec.model.mass);
    }
    const auto q_e = r.quantity("model", "q_e", D::length);
    const auto lambda = r.quantity("model", "lambda", D::none);
    if (q_e && lambda) Reader::fail(r.line_of("model", "lambda"), "give either q_e or lambda, not both");
    if (lambda) {
        at(r, "model", "lambda", [&] {
            if (!(spec.model.mass > 0.0 && spec.model.omega_g > 0.0))
                throw ConfigError("lambda needs positive mass and omega_g");
            spec.model.q_e = displacement_for_huang_rhys(*lambda, spec.model.mass, spec.model.omega_g);
        });
    } else {
        require("q_e", q_e, spec.model.q_e);
    }
    require("q_X", r.quantity("model", "q_X", D::length), spec.model.q_X);
    if (auto v = r.quantity("model", "omega_X", D::energy)) spec.model.omega_X = *v;
    require("dc_amplitude", r.quantity("model", "dc_amplitude", D::energy), spec.model.dc.amplitude);
    require("dc_width", r.quantity("model", "dc_width", D::length), spec.model.dc.width);
    if (auto v = r.quantity("model", "dc_center", D::length)) spec.model.dc.center = *v;
    require("dipole_peak", r.quantity("model", "dipole_peak", D::none), spec.model.dipole.amplitude);
    require("dipole_width", r.quantity("model", "dipole_width", D::length), spec.model.dipole.width);
    if (auto v = r.quantity("model", "dipole_center", D::length)) spec.model.dipole.center = *v;
    if (auto c = r.text("model", "curves")) spec.curve_file = *c;

    const auto gg_peak = r.quantity("model", "dgg_peak", D::none);
    const auto ee_peak = r.quantity("model", "dee_peak", D::none);
    const auto gg_c = r.quantity("model", "dgg_center", D::length);
    const auto ee_c = r.quantity("model", "dee_center", D::length);
    const auto gg_w = r.quantity("model", "dgg_width", D::length);
    const auto ee_w = r.quantity("model", "dee_width", D::length);
    if (gg_peak || ee_peak || gg_c || ee_c || gg_w || ee_w) {
        if (!(gg_peak && ee_peak && gg_c && ee_c && gg_w && ee_w))
            throw ConfigError("[model] diagonal dipoles need dgg_/dee_ peak, center and width");
        spec.diagonal_dipoles = std::make_pair(GaussianProfile{*gg_peak, *gg_c, *gg_w},
                                               GaussianProfile{*ee_peak, *ee_c, *ee_w});
    }
    at(r, "model", "omega_g", [&] { spec.model.validate(); });

    // [cavity]
    if (!r.has_section("cavity")) throw ConfigError("missing section [cavity]");
    const auto wc = r.quantity("cavity", "omega_c", D::energy);
    if (!wc) throw ConfigError("[cavity] missing required key omega_c");
    spec.cavity.omega_c = *wc;
    const auto chi = r.quantity("cavity", "chi", D::none);
    if (!chi) throw ConfigError("[cavity] missing required key chi");
    spec.cavity.chi = *chi;
    if (spec.cavity.chi < 0.0) Reader::fail(r.line_of("cavity", "chi"), "chi must be non-negative (negative coupling)");
    at(r, "cavity", "omega_c", [&] { spec.cavity.validate(); });

    // [basis]
    if (auto v = r.integer("basis", "n_vib")) spec.basis.n_vib = static_cast<int>(*v);
    if (auto v = r.integer("basis", "n_fock")) spec.basis.n_fock = static_cast<int>(*v);
    if (auto v = r.boolean("basis", "counter_rotating")) spec.counter_rotating = *v;
    at(r, "basis", "n_vib", [&] { spec.basis.validate(); });

    // [grid]
    if (r.has_section("grid")) {
        GridSpec g;
        g.x_min = -60.0;
        g.x_max = 60.0;
        if (auto v = r.quantity("grid", "q_min", D::length)) g.q_min = *v;
        if (auto v = r.quantity("grid", "q_max", D::length)) g.q_max = *v;
        if (auto v = r.integer("grid", "n_q")) g.n_q = static_cast<int>(*v);
        if (auto v = r.quantity("grid", "x_min", D::none)) g.x_min = *v;
        if (auto v = r.quantity("grid", "x_max", D::none)) g.x_max = *v;
        if (auto v = r.integer("grid", "n_x")) g.n_x = static_cast<int>(*v);
        if (auto v = r.quantity("grid", "dt", D::time)) g.dt_fs = units::to_fs(*v);
        if (auto u = r.text("grid", "x_unit")) {
            if (*u == "mass-weighted") {
                spec.x_mass_weighted = true;
            } else if (*u == "dimensionless") {
                spec.x_mass_weighted = false;
            } else {
                Reader::fail(r.line_of("grid", "x_unit"), "x_unit must be mass-weighted or dimensionless");
            }
        }
        if (auto v = r.integer("grid", "photon_max")) spec.photon_max = static_cast<int>(*v);
        const auto cw = r.quantity("grid", "cap_width", D::length);
        const auto cs = r.quantity("grid", "cap_strength", D::energy);
        if (cw || cs) spec.cap = CapSpec{cw.value_or(1.0), cs.value_or(0.0)};
        if (auto v = r.boolean("grid", "check_dt")) spec.check_dt = *v;
        at(r, "grid", "n_q", [&] { g.validate(); });
        spec.grid = g;
    }

    // [sweep]
    if (auto k = r.text("sweep", "kind")) at(r, "sweep", "kind", [&] { spec.sweep_kind = parse_mode(*k); });
    if (auto c = r.text("sweep", "coupling")) {
        if (*c == "full") {
            spec.sweep_coupling = SweepCoupling::full;
        } else if (*c == "constant-dipole-no-dc") {
            spec.sweep_coupling = SweepCoupling::constant_dipole_no_dc;
        } else {
            Reader::fail(r.line_of("sweep", "coupling"), "coupling must be full or constant-dipole-no-dc");
        }
    }
    if (auto v = r.quantity("sweep", "late_window", D::time)) spec.late_window_fs = units::to_fs(*v);
    for (const auto& name : sweep_axis_names()) {
        const Unit u = axis_display_unit(name);
        if (auto values = r.list("sweep", name, dimension_of(u))) spec.axes.push_back({name, *values});
    }

    // [output]
    if (auto d = r.text("output", "directory")) spec.output_dir = *d;
    if (auto v = r.list("output", "snapshots", D::time)) {
        for (double t : *v) spec.snapshot_times.push_back(units::to_fs(t));
    }
    if (auto c = r.text("output", "channels")) {
        std::stringstream ss(*c);
        for (std::string p; std::getline(ss, p, ',');) spec.channels.push_back(trim(p));
    }

    spec.validate();
    return spec;
}

RunSpec load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    try {
        return parse_config(ss.str());
    } catch (const ConfigError& e) {
        throw ConfigError(path + ": " + e.what());
    }
}

namespace {

std::string num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string join(const std::vector<double>& v, double scale = 1.0) {
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) out += (i ? ", " : "") + num(v[i] / scale);
    return out;
}

}  // namespace

std::string canonical_config(const RunSpec& s) {
    std::ostringstream o;
    const HqrModel& m = s.model;
    o << "[run]\n";
    o << "mode = " << mode_name(s.mode) << '\n';
    o << "t_final = " << num(s.t_final_fs) << " fs\n";
    o << "sample = " << num(s.sample_fs) << " fs\n";
    o << "window_lo = " << num(s.window_lo) << " hartree\n";
    o << "window_hi = " << num(s.window_hi) << " hartree\n";
    o << "compare_tolerance = " << num(s.compare_tolerance) << '\n';
    o << "workers = " << s.workers << '\n';
    o << "\n[model]\n";
    o << "omega_g = " << num(m.omega_g) << " hartree\n";
    o << "omega_e = " << num(m.omega_e) << " hartree\n";
    o << "omega_ge = " << num(m.omega_ge) << " hartree\n";
    o << "mass = " << num(m.mass) << " me\n";
    o << "q_e = " << num(m.q_e) << " bohr\n";
    o << "q_X = " << num(m.q_X) << " bohr\n";
    if (m.omega_X) o << "omega_X = " << num(*m.omega_X) << " hartree\n";
    o << "dc_amplitude = " << num(m.dc.amplitude) << " hartree\n";
    o << "dc_width = " << num(m.dc.width) << " bohr\n";
    if (m.dc.center) o << "dc_center = " << num(*m.dc.center) << " bohr\n";
    o << "dipole_peak = " << num(m.dipole.amplitude) << '\n';
    o << "dipole_width = " << num(m.dipole.width) << " bohr\n";
    if (m.dipole.center) o << "dipole_center = " << num(*m.dipole.center) << " bohr\n";
    if (s.curve_file) o << "curves = " << *s.curve_file << '\n';
    if (s.diagonal_dipoles) {
        const auto& [gg, ee] = *s.diagonal_dipoles;
        o << "dgg_peak = " << num(gg.amplitude) << "\ndgg_center = " << num(gg.center)
          << " bohr\ndgg_width = " << num(gg.width) << " bohr\n";
        o << "dee_peak = " << num(ee.amplitude) << "\ndee_center = " << num(ee.center)
          << " bohr\ndee_width = " << num(ee.width) << " bohr\n";
    }
    o << "\n[cavity]\n";
    o << "omega_c = " << num(s.cavity.omega_c) << " hartree\n";
    o << "chi = " << num(s.cavity.chi) << '\n';
    o << "\n[basis]\n";
    o << "n_vib = " << s.basis.n_vib << "\nn_fock = " << s.basis.n_fock << '\n';
    o << "counter_rotating = " << (s.counter_rotating ? "true" : "false") << '\n';
    if (s.grid) {
        const GridSpec& g = *s.grid;
        o << "\n[grid]\n";
        o << "q_min = " << num(g.q_min) << " bohr\nq_max = " << num(g.q_max) << " bohr\nn_q = " << g.n_q << '\n';
        o << "x_min = " << num(g.x_min) << "\nx_max = " << num(g.x_max) << "\nn_x = " << g.n_x << '\n';
        o << "x_unit = " << (s.x_mass_weighted ? "mass-weighted" : "dimensionless") << '\n';
        o << "dt = " << num(g.dt_fs) << " fs\n";
        o << "photon_max = " << s.photon_max << '\n';
        if (s.cap)
            o << "cap_width = " << num(s.cap->width) << " bohr\ncap_strength = " << num(s.cap->strength)
              << " hartree\n";
        o << "check_dt = " << (s.check_dt ? "true" : "false") << '\n';
    }
    o << "\n[sweep]\n";
    o << "kind = " << mode_name(s.sweep_kind) << '\n';
    o << "coupling = " << (s.sweep_coupling == SweepCoupling::full ? "full" : "constant-dipole-no-dc") << '\n';
    o << "late_window = " << num(s.late_window_fs) << " fs\n";
    for (const auto& a : s.axes) {
        const Unit u = axis_display_unit(a.name);
        const bool energy = dimension_of(u) == Dimension::energy;
        const bool length = dimension_of(u) == Dimension::length;
        o << a.name << " = " << join(a.values) << (energy ? " hartree" : length ? " bohr" : "") << '\n';
    }
    o << "\n[output]\n";
    o << "directory = " << s.output_dir << '\n';
    if (!s.snapshot_times.empty()) o << "snapshots = " << join(s.snapshot_times) << " fs\n";
    if (!s.channels.empty()) {
        o << "channels = ";
        for (std::size_t i = 0; i < s.channels.size(); ++i) o << (i ? ", " : "") << s.channels[i];
        o << '\n';
    }
    return o.str();
}

const std::vector<std::string>& sweep_axis_names() {
    static const std::vector<std::string> names = {"lambda",   "q_e",     "chi",          "omega_c",    "omega_ge",
                                                   "omega_g",  "omega_e", "dc_amplitude", "dipole_peak"};
    return names;
}

Unit axis_display_unit(const std::string& axis) {
    if (axis == "lambda" || axis == "chi" || axis == "dipole_peak") return Unit::dimensionless;
    if (axis == "q_e") return Unit::bohr;
    if (axis == "omega_c" || axis == "omega_g" || axis == "omega_e" || axis == "omega_ge") return Unit::wavenumber;
    if (axis == "dc_amplitude") return Unit::eV;
    throw ConfigError("unknown sweep axis " + axis);
}

RunSpec apply_axis(const RunSpec& spec, const std::string& axis, double value) {
    RunSpec out = spec;
    HqrModel& m = out.model;
    if (axis == "lambda") {
        // Spectra follow the crossing with the couplings; dynamics keep the
        // left-turning-point launch.
        m = spec.sweep_kind == RunMode::spectrum ? sweep_point_model(m, value, spec.sweep_coupling)
                                                 : launch_model(m, value);
    } else if (axis == "q_e") {
        m.q_e = value;
    } else if (axis == "chi") {
        out.cavity.chi = value;
    } else if (axis == "omega_c") {
        out.cavity.omega_c = value;
    } else if (axis == "omega_ge") {
        m.omega_ge = value;
    } else if (axis == "omega_g") {
        m.omega_g = value;
    } else if (axis == "omega_e") {
        m.omega_e = value;
    } else if (axis == "dc_amplitude") {
        m.dc.amplitude = value;
    } else if (axis == "dipole_peak") {
        m.dipole.amplitude = value;
    } else {
        throw ConfigError("unknown sweep axis " + axis);
    }
    return out;
}

}  // namespace hqr
