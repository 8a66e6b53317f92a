#include <doctest.h>

#include <filesystem>
#include <string>

#include "hqr/config.hpp"
#include "hqr/error.hpp"
#include "hqr/units.hpp"

using namespace hqr;

namespace {

const char* minimal = R"(
[model]
preset = cah-fit

[cavity]
omega_c = 5600 cm-1
chi = 0.16
)";

std::string error_of(const std::string& text) {
    try {
        parse_config(text);
    } catch (const ConfigError& e) {
        return e.what();
    }
    return "";
}

}  // namespace

TEST_CASE("minimal config resolves to the preset and defaults") {
    const RunSpec s = parse_config(minimal);
    CHECK(s.mode == RunMode::dynamics);
    CHECK(s.cavity.omega_c == doctest::Approx(units::wavenumber(5600.0)));
    CHECK(s.cavity.chi == 0.16);
    CHECK(s.model.q_e == presets::cah_fit().q_e);
    CHECK(s.basis.n_vib == 110);
    CHECK(s.basis.n_fock == 11);
    CHECK_FALSE(s.grid);
}

TEST_CASE("negative coupling is refused with its line") {
    const std::string msg = error_of("[model]\npreset = cah-fit\n[cavity]\nomega_c = 1 eV\nchi = -0.1\n");
    CHECK(msg.find("line 5") != std::string::npos);
    CHECK(msg.find("negative") != std::string::npos);
}

TEST_CASE("unknown keys and sections name the line") {
    CHECK(error_of(std::string(minimal) + "colour = red\n").find("line 8") != std::string::npos);
    CHECK(error_of("[modle]\n").find("unknown section") != std::string::npos);
    CHECK(error_of(std::string(minimal) + "chi = 0.2\n").find("duplicate") != std::string::npos);
}

TEST_CASE("quantities need units of the right dimension") {
    CHECK(error_of("[model]\npreset = cah-fit\n[cavity]\nomega_c = 5600\nchi = 0.1\n").find("needs a unit") !=
          std::string::npos);
    CHECK(error_of("[model]\npreset = cah-fit\n[cavity]\nomega_c = 5600 fs\nchi = 0.1\n").find("does not fit") !=
          std::string::npos);
    CHECK(error_of("[model]\npreset = cah-fit\n[cavity]\nomega_c = 5600 furlong\nchi = 0.1\n").find("line 4") !=
          std::string::npos);
    CHECK(error_of("[model]\npreset = cah-fit\n[cavity]\nomega_c = 1 eV\nchi = 0.1 eV\n").find("dimensionless") !=
          std::string::npos);
}

TEST_CASE("missing required keys without a preset") {
    CHECK(error_of("[model]\nomega_g = 1350 cm-1\n[cavity]\nomega_c = 1 eV\nchi = 0\n").find("missing required") !=
          std::string::npos);
    CHECK(error_of("[model]\npreset = cah-fit\n").find("[cavity]") != std::string::npos);
}

TEST_CASE("q_e and lambda are exclusive; lambda sets q_e") {
    const std::string both = "[model]\npreset = cah-fit\nq_e = 1 bohr\nlambda = 2\n[cavity]\nomega_c = 1 eV\nchi = 0\n";
    CHECK(error_of(both).find("line 4") != std::string::npos);
    const RunSpec s = parse_config("[model]\npreset = cah-fit\nlambda = 2.5\n[cavity]\nomega_c = 1 eV\nchi = 0\n");
    CHECK(s.model.huang_rhys() == doctest::Approx(2.5).epsilon(1e-12));
}

TEST_CASE("sweep ranges expand start : stop : step inclusively") {
    const RunSpec s = parse_config(std::string(minimal) +
                                   "[run]\nmode = sweep\n[sweep]\nkind = spectrum\nlambda = -6 : 6 : 0.25\nchi = 0, 0.08, 0.16\n");
    REQUIRE(s.axes.size() == 2);
    CHECK(s.axes[0].name == "lambda");
    CHECK(s.axes[0].values.size() == 49);
    CHECK(s.axes[0].values.front() == -6.0);
    CHECK(s.axes[0].values.back() == doctest::Approx(6.0));
    CHECK(s.axes[1].values.size() == 3);
    CHECK(error_of(std::string(minimal) + "[run]\nmode = sweep\n[sweep]\nlambda = 1 : 0 : 0.1\n").find("step") !=
          std::string::npos);
    // An axis outside sweep mode, and sweep mode without axes.
    CHECK_THROWS_AS(parse_config(std::string(minimal) + "[sweep]\nchi = 0.1\n"), ConfigError);
    CHECK_THROWS_AS(parse_config(std::string(minimal) + "[run]\nmode = sweep\n"), ConfigError);
}

TEST_CASE("energy axes carry their unit") {
    const RunSpec s =
        parse_config(std::string(minimal) + "[run]\nmode = sweep\n[sweep]\nomega_c = 2500, 5600 cm-1\n");
    CHECK(s.axes[0].values[1] == doctest::Approx(units::wavenumber(5600.0)));
}

TEST_CASE("canonical text parses back to itself") {
    const RunSpec s = parse_config(std::string(minimal) + R"(
[run]
mode = sweep
t_final = 50 fs
sample = 0.25 fs
workers = 2
[basis]
n_vib = 90
n_fock = 6
counter_rotating = false
[grid]
n_q = 301
cap_width = 1.5 bohr
cap_strength = 0.01 hartree
[sweep]
kind = compare
omega_c = 2500, 3500 cm-1
[output]
directory = results
snapshots = 5, 10 fs
channels = P_g, mean_photons
)");
    const std::string text = canonical_config(s);
    const RunSpec back = parse_config(text);
    CHECK(canonical_config(back) == text);
    CHECK(back.t_final_fs == 50.0);
    CHECK(back.grid->n_q == 301);
    CHECK(back.cap->strength == 0.01);
    CHECK(back.axes[0].values == s.axes[0].values);
    CHECK(back.model.q_X == s.model.q_X);
    CHECK_FALSE(back.counter_rotating);
}

TEST_CASE("grid x range defaults and its unit") {
    const RunSpec d = parse_config(std::string(minimal) + "[grid]\n");
    REQUIRE(d.grid);
    CHECK(d.grid->x_min == -60.0);
    CHECK(d.grid->x_max == 60.0);
    CHECK_FALSE(d.x_mass_weighted);
    CHECK(effective_grid(d).x_max == 60.0);

    const RunSpec mw = parse_config(std::string(minimal) + "[grid]\nx_unit = mass-weighted\n");
    CHECK(mw.x_mass_weighted);
    // Mass-weighted x is divided by the photon length scale 1/sqrt(omega_c).
    CHECK(effective_grid(mw).x_max == doctest::Approx(60.0 * std::sqrt(units::wavenumber(5600.0))));
    CHECK(error_of(std::string(minimal) + "[grid]\nx_unit = metres\n").find("line 9") != std::string::npos);
}

TEST_CASE("grid modes need a grid section") {
    CHECK_THROWS_AS(parse_config(std::string(minimal) + "[run]\nmode = compare\n"), ConfigError);
    CHECK_NOTHROW(parse_config(std::string(minimal) + "[run]\nmode = compare\n[grid]\n"));
}

TEST_CASE("apply_axis touches only its field") {
    const RunSpec s = parse_config(minimal);
    const RunSpec c = apply_axis(s, "chi", 0.04);
    CHECK(c.cavity.chi == 0.04);
    CHECK(c.model.q_e == s.model.q_e);
    const RunSpec l = apply_axis(s, "lambda", -3.0);
    CHECK(l.model.huang_rhys() == doctest::Approx(-3.0).epsilon(1e-12));
    CHECK(l.model.q_X < l.model.q_e);
    CHECK_THROWS_AS(apply_axis(s, "colour", 1.0), ConfigError);
}

TEST_CASE("shipped example configs parse") {
    int count = 0;
    for (const auto& entry : std::filesystem::directory_iterator(HQR_SOURCE_DIR "/configs")) {
        if (entry.path().extension() != ".ini") continue;
        CAPTURE(entry.path().string());
        CHECK_NOTHROW(load_config_file(entry.path().string()));
        ++count;
    }
    CHECK(count >= 5);
}
