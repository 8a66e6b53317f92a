#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "hqr/fock.hpp"
#include "hqr/grid.hpp"
#include "hqr/model.hpp"
#include "hqr/spectra.hpp"
#include "hqr/units.hpp"

namespace hqr {

enum class RunMode { spectrum, dynamics, grid_dynamics, compare, sweep };

std::string_view mode_name(RunMode m);
/// Accepts spectrum, dynamics, grid-dynamics, compare, sweep.
RunMode parse_mode(std::string_view text);

/// One sweep axis; values in atomic units.
struct SweepAxis {
    std::string name;
    std::vector<double> values;
};

/// Fully resolved run description. Every field has a concrete value after
/// parsing, so the canonical text form reproduces the run exactly.
struct RunSpec {
    RunMode mode = RunMode::dynamics;

    HqrModel model;
    std::optional<std::string> curve_file;
    std::optional<std::pair<GaussianProfile, GaussianProfile>> diagonal_dipoles;

    CavitySpec cavity;
    BasisSpec basis;
    bool counter_rotating = true;

    /// Grid as written; x range in mass-weighted units (sqrt(m_e) bohr) when
    /// x_mass_weighted, otherwise in the dimensionless x.
    std::optional<GridSpec> grid;
    bool x_mass_weighted = false;
    int photon_max = 12;
    std::optional<CapSpec> cap;
    bool check_dt = false;

    double t_final_fs = 35.0;
    double sample_fs = 0.1;
    double window_lo = units::ev(1.0);
    double window_hi = units::ev(1.8);
    double compare_tolerance = 1e-3;

    RunMode sweep_kind = RunMode::dynamics;
    SweepCoupling sweep_coupling = SweepCoupling::full;
    std::vector<SweepAxis> axes;
    /// Averaging window for the late-time photon number (fs before t_final).
    double late_window_fs = 50.0;

    std::string output_dir = "out";
    std::vector<double> snapshot_times;
    /// Channels written to time-series CSVs; empty means all.
    std::vector<std::string> channels;
    int workers = 0;

    void validate() const;
};

/// Parses the sectioned key = value format. Sections: model, cavity, basis,
/// grid, run, sweep, output. Quantities are "number unit". Errors name the
/// offending line.
RunSpec parse_config(std::string_view text);
RunSpec load_config_file(const std::string& path);

/// Canonical config text (atomic units, 17 significant digits) that parses back
/// to the same RunSpec.
std::string canonical_config(const RunSpec& spec);

/// Grid with the photon range converted to the dimensionless coordinate.
GridSpec effective_grid(const RunSpec& spec);

/// Names accepted as sweep axes.
const std::vector<std::string>& sweep_axis_names();

/// Applies one sweep value to a copy of the spec (model or cavity field). A
/// lambda value goes through sweep_point_model for spectrum sweeps and through
/// launch_model otherwise.
RunSpec apply_axis(const RunSpec& spec, const std::string& axis, double value);

/// Unit used when printing a sweep axis value.
Unit axis_display_unit(const std::string& axis);

}  // namespace hqr
