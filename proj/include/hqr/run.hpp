#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "hqr/config.hpp"
#include "hqr/dynamics.hpp"
#include "hqr/grid.hpp"

namespace hqr {

enum ExitCode : int {
    exit_ok = 0,
    exit_config = 2,
    exit_numerical = 3,
    exit_partial_sweep = 4,
};

struct RunOutcome {
    int exit_code = exit_ok;
    std::vector<std::string> messages;
    std::vector<std::filesystem::path> files;
};

/// Executes the spec and writes its outputs under spec.output_dir.
RunOutcome run(const RunSpec& spec);

/// The Hamiltonian a spec describes.
OperatorMatrix spec_hamiltonian(const RunSpec& spec);

/// Spectral dynamics from the Franck-Condon state on the spec's time grid.
PropagationResult spec_spectral_dynamics(const RunSpec& spec);

/// Grid tables for the spec: tabulated curves when configured, else the model.
GridTables spec_grid_tables(const RunSpec& spec);

/// Grid dynamics from the Franck-Condon state on the spec's grid.
GridRunResult spec_grid_dynamics(const RunSpec& spec, std::function<void(const GridWavefunction&)> observer = {});

struct ChannelDeviation {
    std::string channel;
    double max_abs = 0.0;
    double time_fs = 0.0;
};

/// Per-channel max |a - b| over samples shared by index. Channels present in
/// both series are compared: P_g, P_e, mean_photons and proj_<n>_<s>.
std::vector<ChannelDeviation> compare_series(const TimeSeries& a, const TimeSeries& b);

/// Mean of mean_photons over the last `window_fs` of the series.
double late_mean_photons(const TimeSeries& series, double window_fs);

}  // namespace hqr
