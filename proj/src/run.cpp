#include "hqr/run.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "hqr/error.hpp"
#include "hqr/parallel.hpp"
#include "hqr/spectra.hpp"

namespace hqr {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace {

std::string sci(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.11e", v);
    return buf;
}

AssemblyOptions assembly_options(const RunSpec& spec) {
    AssemblyOptions o;
    o.include_counter_rotating = spec.counter_rotating;
    o.diagonal_dipoles = spec.diagonal_dipoles;
    return o;
}

TimeSeries select_channels(const TimeSeries& ts, const std::vector<std::string>& keep) {
    if (keep.empty()) return ts;
    TimeSeries out;
    out.times = ts.times;
    for (const auto& name : keep) {
        if (!ts.has(name)) throw ConfigError("unknown output channel " + name);
        out.add(name) = ts.channel(name);
    }
    return out;
}

void write_text(const fs::path& path, const std::string& text, RunOutcome& outcome) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot write " + path.string());
    out << text;
    outcome.files.push_back(path);
}

template <typename Writer>
void write_file(const fs::path& path, RunOutcome& outcome, Writer&& writer) {
    std::ostringstream ss;
    writer(ss);
    write_text(path, ss.str(), outcome);
}

double max_drift(const std::vector<double>& v) {
    double d = 0.0;
    for (double x : v) d = std::max(d, std::abs(x - v.front()));
    return d;
}

json model_json(const HqrModel& m) {
    json j;
    j["omega_g_hartree"] = m.omega_g;
    j["omega_e_hartree"] = m.omega_e;
    j["omega_ge_hartree"] = m.omega_ge;
    j["mass_me"] = m.mass;
    j["q_e_bohr"] = m.q_e;
    j["q_X_bohr"] = m.q_X;
    j["omega_X_hartree"] = m.ground_frequency();
    j["huang_rhys"] = m.huang_rhys();
    j["squeeze"] = m.squeeze();
    try {
        j["crossing_bohr"] = crossing_point(m);
        j["crossing_energy_eV"] = units::to_ev(crossing_energy(m));
    } catch (const Error&) {
        j["crossing_bohr"] = nullptr;
    }
    j["dc_amplitude_hartree"] = m.dc.amplitude;
    j["dc_width_bohr"] = m.dc.width;
    j["dipole_peak_au"] = m.dipole.amplitude;
    j["dipole_width_bohr"] = m.dipole.width;
    return j;
}

void write_sidecar(const fs::path& dir, const RunSpec& spec, const json& results, RunOutcome& outcome) {
    json j;
    j["program"] = "hqr";
    j["mode"] = std::string(mode_name(spec.mode));
    j["config"] = canonical_config(spec);
    j["model"] = model_json(spec.model);
    j["cavity"] = {{"omega_c_hartree", spec.cavity.omega_c},
                   {"chi", spec.cavity.chi},
                   {"g_hartree", spec.cavity.coupling(spec.model.dipole.amplitude)}};
    j["basis"] = {{"n_vib", spec.basis.n_vib}, {"n_fock", spec.basis.n_fock}, {"dim", spec.basis.dim()}};
    if (spec.grid) {
        const GridSpec g = effective_grid(spec);
        j["grid"] = {{"q_min_bohr", g.q_min}, {"q_max_bohr", g.q_max}, {"n_q", g.n_q}, {"x_min", g.x_min},
                     {"x_max", g.x_max},      {"n_x", g.n_x},          {"dt_fs", g.dt_fs}};
    }
    j["results"] = results;
    write_text(dir / "run.json", j.dump(2) + "\n", outcome);
}

// ---------------------------------------------------------------- modes

json do_spectrum(const RunSpec& spec, const fs::path& dir, RunOutcome& outcome, Vector* energies) {
    const OperatorMatrix h = spec_hamiltonian(spec);
    EigenTable table;
    table.parameter = "lambda";
    table.values = {spec.model.huang_rhys()};
    table.energies = {eigvalsh(h.entries)};
    if (energies) *energies = table.energies[0];
    table.template_model = spec.model;
    table.basis = spec.basis;
    write_file(dir / "spectrum.csv", outcome,
               [&](std::ostream& o) { write_eigen_table_csv(o, table, spec.window_lo, spec.window_hi); });

    json r;
    r["ground_energy_eV"] = units::to_ev(table.energies[0](0));
    r["levels_in_window"] = table.window(0, spec.window_lo, spec.window_hi).size();
    r["hermiticity_residual"] = asymmetry(h.entries);

    GridSpec g = spec.grid ? effective_grid(spec) : GridSpec{};
    try {
        const DressedCurves dc = dressed_curves(spec.model, spec.cavity, spec.basis.n_fock - 1, g.q_points());
        write_file(dir / "dressed_curves.csv", outcome, [&](std::ostream& o) {
            o << "q_bohr";
            for (int nc = 0; nc <= dc.n_c_max; ++nc) o << ",V_" << nc << "_g_eV,V_" << nc << "_e_eV";
            o << '\n';
            for (std::size_t i = 0; i < dc.q.size(); ++i) {
                o << sci(dc.q[i]);
                for (const auto& c : dc.curves) o << ',' << sci(units::to_ev(c[0][i])) << ',' << sci(units::to_ev(c[1][i]));
                o << '\n';
            }
        });
        write_file(dir / "crossings.csv", outcome, [&](std::ostream& o) {
            o << "type,n_c,q_bohr,energy_eV,inside_grid\n";
            auto put = [&](const char* type, const std::vector<Crossing>& v) {
                for (const auto& c : v)
                    o << type << ',' << c.n_c << ',' << sci(c.q) << ',' << sci(units::to_ev(c.energy)) << ','
                      << (c.inside_grid ? 1 : 0) << '\n';
            };
            put("DC", dc.crossings.dc);
            put("LIC_R", dc.crossings.lic_r);
            put("LIC_CR", dc.crossings.lic_cr);
        });
        r["missing_crossings"] = dc.crossings.missing;
    } catch (const NoCrossingError& e) {
        r["missing_crossings"] = {std::string("DC: ") + e.what()};
    }
    return r;
}

json dynamics_summary(const TimeSeries& ts, double late_window) {
    json r;
    r["max_mean_photons"] = max_mean_photons(ts, ts.times.front(), ts.times.back());
    r["time_of_max_fs"] = argmax_mean_photons(ts, ts.times.front(), ts.times.back());
    r["late_mean_photons"] = late_mean_photons(ts, late_window);
    r["P_g_final"] = ts.channel("P_g").back();
    r["energy_eV"] = ts.channel("energy_eV").front();
    r["norm_drift"] = max_drift(ts.channel("norm"));
    r["energy_drift_hartree"] = units::ev(max_drift(ts.channel("energy_eV")));
    return r;
}

json do_dynamics(const RunSpec& spec, const fs::path& dir, RunOutcome& outcome) {
    const PropagationResult res = spec_spectral_dynamics(spec);
    write_file(dir / "dynamics.csv", outcome,
               [&](std::ostream& o) { write_time_series_csv(o, select_channels(res.series, spec.channels)); });
    json r = dynamics_summary(res.series, spec.late_window_fs);
    r["franck_condon_deficit"] = franck_condon_deficit(spec.model, spec.basis.n_vib);
    const double norm_drift = r["norm_drift"];
    const double e_drift = r["energy_drift_hartree"];
    if (norm_drift > 1e-9) {
        outcome.exit_code = std::max<int>(outcome.exit_code, exit_numerical);
        outcome.messages.push_back("spectral norm drift " + sci(norm_drift) + " exceeds 1e-9");
    }
    if (e_drift > 1e-9) {
        outcome.exit_code = std::max<int>(outcome.exit_code, exit_numerical);
        outcome.messages.push_back("spectral energy drift " + sci(e_drift) + " hartree exceeds 1e-9");
    }
    return r;
}

json do_grid(const RunSpec& spec, const fs::path& dir, RunOutcome& outcome) {
    const GridRunResult res = spec_grid_dynamics(spec);
    write_file(dir / "grid_dynamics.csv", outcome,
               [&](std::ostream& o) { write_time_series_csv(o, select_channels(res.series, spec.channels)); });
    for (const auto& snap : res.snapshots) {
        for (int s = 0; s < 2; ++s) {
            char name[64];
            std::snprintf(name, sizeof name, "snapshot_%c_%08.3ffs.dat", s == 0 ? 'g' : 'e', snap.time_fs);
            write_file(dir / name, outcome, [&](std::ostream& o) { write_snapshot(o, snap, s); });
        }
    }
    json r = dynamics_summary(res.series, spec.late_window_fs);
    const double norm_drift = r["norm_drift"];
    const double e_drift = r["energy_drift_hartree"];
    if (!spec.cap) {
        if (norm_drift > 1e-8) {
            outcome.exit_code = std::max<int>(outcome.exit_code, exit_numerical);
            outcome.messages.push_back("grid norm drift " + sci(norm_drift) + " exceeds 1e-8");
        }
        if (e_drift > 1e-6) {
            outcome.exit_code = std::max<int>(outcome.exit_code, exit_numerical);
            outcome.messages.push_back("grid energy drift " + sci(e_drift) + " hartree exceeds 1e-6");
        }
    }
    if (spec.check_dt) {
        GridRunOptions o;
        o.t_final_fs = spec.t_final_fs;
        o.sample_fs = spec.sample_fs;
        o.cap = spec.cap;
        const GridTables tables = spec_grid_tables(spec);
        const double change =
            dt_halving_change(franck_condon_grid(tables, effective_grid(spec)), tables, spec.cavity, o);
        r["dt_halving_change"] = change;
        if (change >= 1e-4) {
            r["advisory"] = "halving dt changes P_g(t_final) by " + sci(change) + "; refine dt";
            outcome.messages.push_back(r["advisory"]);
        }
    }
    return r;
}

json do_compare(const RunSpec& spec, const fs::path& dir, RunOutcome& outcome) {
    const PropagationResult a = spec_spectral_dynamics(spec);
    const GridRunResult b = spec_grid_dynamics(spec);
    write_file(dir / "spectral.csv", outcome,
               [&](std::ostream& o) { write_time_series_csv(o, select_channels(a.series, spec.channels)); });
    write_file(dir / "grid.csv", outcome,
               [&](std::ostream& o) { write_time_series_csv(o, select_channels(b.series, spec.channels)); });
    const auto dev = compare_series(a.series, b.series);
    double worst = 0.0;
    json r;
    write_file(dir / "compare.csv", outcome, [&](std::ostream& o) {
        o << "channel,max_abs_deviation,time_fs\n";
        for (const auto& d : dev) {
            o << d.channel << ',' << sci(d.max_abs) << ',' << sci(d.time_fs) << '\n';
            worst = std::max(worst, d.max_abs);
        }
    });
    r["max_deviation"] = worst;
    r["tolerance"] = spec.compare_tolerance;
    if (!(worst < spec.compare_tolerance)) {
        outcome.exit_code = std::max<int>(outcome.exit_code, exit_numerical);
        outcome.messages.push_back("spectral and grid results differ by " + sci(worst));
    }
    return r;
}

json run_single(const RunSpec& spec, RunMode mode, const fs::path& dir, RunOutcome& outcome,
                Vector* energies = nullptr) {
    fs::create_directories(dir);
    switch (mode) {
        case RunMode::spectrum: return do_spectrum(spec, dir, outcome, energies);
        case RunMode::dynamics: return do_dynamics(spec, dir, outcome);
        case RunMode::grid_dynamics: return do_grid(spec, dir, outcome);
        case RunMode::compare: return do_compare(spec, dir, outcome);
        case RunMode::sweep: break;
    }
    throw ConfigError("nested sweep");
}

std::string csv_field(std::string s) {
    std::replace(s.begin(), s.end(), '"', '\'');
    std::replace(s.begin(), s.end(), '\n', ' ');
    return '"' + s + '"';
}

RunOutcome do_sweep(const RunSpec& spec) {
    // Cartesian product, last axis fastest.
    std::vector<std::vector<double>> points{{}};
    for (const auto& axis : spec.axes) {
        std::vector<std::vector<double>> next;
        for (const auto& p : points)
            for (double v : axis.values) {
                auto q = p;
                q.push_back(v);
                next.push_back(std::move(q));
            }
        points = std::move(next);
    }

    struct PointResult {
        RunOutcome outcome;
        json results;
        std::string error;
        int code = exit_ok;
        Vector energies;
    };
    std::vector<PointResult> results(points.size());
    const fs::path root = spec.output_dir;
    fs::create_directories(root);

    parallel_for(points.size(), spec.workers, [&](std::size_t i) {
        PointResult& pr = results[i];
        char name[32];
        std::snprintf(name, sizeof name, "point_%04zu", i);
        try {
            RunSpec point = spec;
            for (std::size_t k = 0; k < spec.axes.size(); ++k) point = apply_axis(point, spec.axes[k].name, points[i][k]);
            point.mode = spec.sweep_kind;
            point.axes.clear();
            point.output_dir = (root / name).string();
            point.validate();
            pr.results = run_single(point, point.mode, root / name, pr.outcome, &pr.energies);
            write_sidecar(root / name, point, pr.results, pr.outcome);
            pr.code = pr.outcome.exit_code;
        } catch (const std::exception& e) {
            pr.error = e.what();
            pr.code = exit_partial_sweep;
        }
    });

    RunOutcome outcome;
    int failed = 0;
    std::ostringstream agg;
    for (const auto& axis : spec.axes) agg << axis.name << (axis_display_unit(axis.name) == Unit::dimensionless ? "" : "_" + std::string(unit_name(axis_display_unit(axis.name)))) << ',';
    std::vector<std::string> keys;
    for (const auto& pr : results)
        if (pr.error.empty()) {
            for (const auto& [k, v] : pr.results.items())
                if (v.is_number() && std::find(keys.begin(), keys.end(), k) == keys.end()) keys.push_back(k);
        }
    agg << "index,status";
    for (const auto& k : keys) agg << ',' << k;
    agg << '\n';
    for (std::size_t i = 0; i < points.size(); ++i) {
        const PointResult& pr = results[i];
        for (std::size_t k = 0; k < spec.axes.size(); ++k)
            agg << sci(points[i][k] / atomic_scale(axis_display_unit(spec.axes[k].name))) << ',';
        agg << i << ',';
        if (!pr.error.empty()) {
            ++failed;
            agg << csv_field("error: " + pr.error);
            outcome.messages.push_back("point " + std::to_string(i) + ": " + pr.error);
        } else {
            agg << (pr.code == exit_ok ? "ok" : "contract");
            for (const auto& m : pr.outcome.messages) outcome.messages.push_back("point " + std::to_string(i) + ": " + m);
            if (pr.code != exit_ok) ++failed;
        }
        for (const auto& k : keys) {
            agg << ',';
            if (pr.error.empty() && pr.results.contains(k) && pr.results[k].is_number())
                agg << sci(pr.results[k].get<double>());
        }
        agg << '\n';
    }
    write_text(root / "sweep.csv", agg.str(), outcome);

    if (spec.sweep_kind == RunMode::spectrum && spec.axes.size() == 1) {
        EigenTable table;
        table.parameter = spec.axes[0].name;
        const double scale = atomic_scale(axis_display_unit(spec.axes[0].name));
        for (std::size_t i = 0; i < points.size(); ++i)
            if (results[i].error.empty()) {
                table.values.push_back(points[i][0] / scale);
                table.energies.push_back(results[i].energies);
            }
        write_file(root / "eigen_table.csv", outcome,
                   [&](std::ostream& o) { write_eigen_table_csv(o, table, spec.window_lo, spec.window_hi); });
    }
    json summary;
    summary["points"] = points.size();
    summary["failed"] = failed;
    write_sidecar(root, spec, summary, outcome);
    if (failed > 0) outcome.exit_code = exit_partial_sweep;
    return outcome;
}

}  // namespace

OperatorMatrix spec_hamiltonian(const RunSpec& spec) {
    return assemble_hamiltonian(spec.model, spec.cavity, spec.basis, assembly_options(spec));
}

PropagationResult spec_spectral_dynamics(const RunSpec& spec) {
    const PolaritonState psi0 = franck_condon_state(spec.model, spec.basis);
    PropagationOptions o;
    o.position = position_operator(spec.basis.n_vib, spec.model.mass, spec.model.omega_g).entries;
    return propagate(spec_hamiltonian(spec), psi0, time_grid(0.0, spec.t_final_fs, spec.sample_fs), o);
}

GridTables spec_grid_tables(const RunSpec& spec) {
    const GridSpec g = effective_grid(spec);
    if (spec.curve_file) return tables_from_curves(load_curves_file(*spec.curve_file), g, spec.model.mass);
    return map_model_to_grid(spec.model, g, spec.diagonal_dipoles);
}

GridRunResult spec_grid_dynamics(const RunSpec& spec, std::function<void(const GridWavefunction&)> observer) {
    const GridSpec g = effective_grid(spec);
    const GridTables tables = spec_grid_tables(spec);
    GridRunOptions o;
    o.t_final_fs = spec.t_final_fs;
    o.sample_fs = spec.sample_fs;
    o.n_photon_max = spec.photon_max;
    o.snapshot_times = spec.snapshot_times;
    o.cap = spec.cap;
    o.observer = std::move(observer);
    return grid_propagate(franck_condon_grid(tables, g), tables, spec.cavity, o);
}

std::vector<ChannelDeviation> compare_series(const TimeSeries& a, const TimeSeries& b) {
    std::vector<ChannelDeviation> out;
    const std::size_t n = std::min(a.size(), b.size());
    for (const auto& name : a.names) {
        const bool wanted = name == "P_g" || name == "P_e" || name == "mean_photons" || name.rfind("proj_", 0) == 0;
        if (!wanted || !b.has(name)) continue;
        const auto& x = a.channel(name);
        const auto& y = b.channel(name);
        ChannelDeviation d{name, 0.0, 0.0};
        for (std::size_t i = 0; i < n; ++i) {
            const double diff = std::abs(x[i] - y[i]);
            if (diff > d.max_abs) {
                d.max_abs = diff;
                d.time_fs = a.times[i];
            }
        }
        out.push_back(d);
    }
    return out;
}

double late_mean_photons(const TimeSeries& series, double window_fs) {
    const auto& n = series.channel("mean_photons");
    const double t_end = series.times.back();
    double sum = 0.0;
    int count = 0;
    for (std::size_t i = 0; i < series.size(); ++i)
        if (series.times[i] >= t_end - window_fs - 1e-9) {
            sum += n[i];
            ++count;
        }
    return count ? sum / count : 0.0;
}

RunOutcome run(const RunSpec& spec) {
    spec.validate();
    if (spec.mode == RunMode::sweep) return do_sweep(spec);
    RunOutcome outcome;
    const fs::path dir = spec.output_dir;
    const json r = run_single(spec, spec.mode, dir, outcome);
    write_sidecar(dir, spec, r, outcome);
    return outcome;
}

}  // namespace hqr
