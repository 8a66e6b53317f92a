#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <sstream>
#include <string>

#include "hqr/config.hpp"
#include "hqr/run.hpp"

using namespace hqr;
namespace fs = std::filesystem;

namespace {

const std::string base = R"(
[model]
preset = cah-fit
[cavity]
omega_c = 5600 cm-1
chi = 0.16
[basis]
n_vib = 80
n_fock = 4
)";

fs::path scratch(const std::string& name) {
    const fs::path p = fs::temp_directory_path() / ("hqr_test_" + name);
    fs::remove_all(p);
    return p;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

RunSpec spec_in(const std::string& extra, const fs::path& dir) {
    RunSpec s = parse_config(base + extra);
    s.output_dir = dir.string();
    return s;
}

}  // namespace

TEST_CASE("spectrum run writes its table and a sidecar that replays") {
    const fs::path dir = scratch("spectrum");
    const RunOutcome out = run(spec_in("[run]\nmode = spectrum\n", dir));
    CHECK(out.exit_code == exit_ok);
    CHECK(fs::exists(dir / "spectrum.csv"));
    CHECK(fs::exists(dir / "dressed_curves.csv"));
    REQUIRE(fs::exists(dir / "run.json"));
    const auto j = nlohmann::json::parse(slurp(dir / "run.json"));
    CHECK(j["mode"] == "spectrum");
    const RunSpec back = parse_config(j["config"].get<std::string>());
    CHECK(back.basis.n_vib == 80);
    CHECK(back.cavity.chi == 0.16);
    fs::remove_all(dir);
}

TEST_CASE("dynamics run reports conservation and keeps chosen channels") {
    const fs::path dir = scratch("dynamics");
    const RunOutcome out = run(spec_in("[run]\nt_final = 5 fs\nsample = 0.5 fs\n[output]\nchannels = P_g, mean_photons\n", dir));
    CHECK(out.exit_code == exit_ok);
    const std::string csv = slurp(dir / "dynamics.csv");
    CHECK(csv.rfind("time_fs,P_g,mean_photons\n", 0) == 0);
    const auto j = nlohmann::json::parse(slurp(dir / "run.json"));
    CHECK(j["results"]["norm_drift"].get<double>() < 1e-9);
    fs::remove_all(dir);
}

TEST_CASE("sweep output does not depend on the worker count") {
    const std::string sweep = "[run]\nmode = sweep\nt_final = 4 fs\nsample = 0.5 fs\n[sweep]\nchi = 0, 0.08, 0.16\n";
    const fs::path a = scratch("sweep_1");
    const fs::path b = scratch("sweep_3");
    RunSpec sa = spec_in(sweep, a);
    sa.workers = 1;
    RunSpec sb = spec_in(sweep, b);
    sb.workers = 3;
    CHECK(run(sa).exit_code == exit_ok);
    CHECK(run(sb).exit_code == exit_ok);
    CHECK(slurp(a / "sweep.csv") == slurp(b / "sweep.csv"));
    for (const char* p : {"point_0000", "point_0001", "point_0002"})
        CHECK(slurp(a / p / "dynamics.csv") == slurp(b / p / "dynamics.csv"));
    fs::remove_all(a);
    fs::remove_all(b);
}

TEST_CASE("a failing sweep point is reported and the rest completes") {
    // lambda = 9 needs far more than 80 vibrational states for the launch packet.
    const fs::path dir = scratch("partial");
    const RunOutcome out =
        run(spec_in("[run]\nmode = sweep\nt_final = 2 fs\nsample = 0.5 fs\n[sweep]\nlambda = 1, 9\n", dir));
    CHECK(out.exit_code == exit_partial_sweep);
    const std::string csv = slurp(dir / "sweep.csv");
    CHECK(csv.find(",0,ok,") != std::string::npos);
    CHECK(csv.find(",1,\"error: ") != std::string::npos);
    CHECK(fs::exists(dir / "point_0000" / "dynamics.csv"));
    fs::remove_all(dir);
}

TEST_CASE("compare mode flags deviations above its tolerance") {
    const std::string grid = "[grid]\nn_q = 301\nx_min = -9.6\nx_max = 9.6\nn_x = 64\n";
    const fs::path dir = scratch("compare");
    RunSpec loose = spec_in("[run]\nmode = compare\nt_final = 2 fs\nsample = 0.5 fs\ncompare_tolerance = 1\n" + grid, dir);
    const RunOutcome ok = run(loose);
    CHECK(ok.exit_code == exit_ok);
    CHECK(fs::exists(dir / "compare.csv"));
    RunSpec tight = loose;
    tight.compare_tolerance = 1e-14;
    const RunOutcome bad = run(tight);
    CHECK(bad.exit_code == exit_numerical);
    CHECK_FALSE(bad.messages.empty());
    fs::remove_all(dir);
}

TEST_CASE("late photon mean averages the final window") {
    TimeSeries s;
    s.times = {0.0, 10.0, 20.0, 30.0};
    s.add("mean_photons") = {5.0, 1.0, 2.0, 4.0};
    CHECK(late_mean_photons(s, 10.0) == 3.0);
    CHECK(late_mean_photons(s, 100.0) == 3.0);
}
