#include <doctest.h>

#include <cmath>
#include <numbers>
#include <sstream>

#include "hqr/error.hpp"
#include "hqr/grid.hpp"
#include "hqr/units.hpp"

using namespace hqr;

namespace {

GridSpec small_grid() {
    GridSpec g;
    g.q_min = -6.0;
    g.q_max = 9.0;
    g.n_q = 151;
    g.x_min = -9.6;
    g.x_max = 9.6;
    g.n_x = 64;
    g.dt_fs = 0.01;
    return g;
}

double max_drift(const std::vector<double>& v) {
    double d = 0.0;
    for (double x : v) d = std::max(d, std::abs(x - v.front()));
    return d;
}

// Product state chi(q) phi_n(x) on surface s, with chi a normalized Gaussian.
GridWavefunction product_state(const GridSpec& g, double q0, double width, int n_photon, int s) {
    GridWavefunction wf;
    wf.grid = g;
    const std::size_t size = static_cast<std::size_t>(g.n_q) * g.n_x;
    wf.g.assign(size, {});
    wf.e.assign(size, {});
    const auto q = g.q_points();
    const auto x = g.x_points();
    for (int iq = 0; iq < g.n_q; ++iq)
        for (int ix = 0; ix < g.n_x; ++ix) {
            const double d = (q[iq] - q0) / width;
            const double chi = std::exp(-0.5 * d * d) / std::sqrt(width * std::sqrt(std::numbers::pi));
            // phi_n by recurrence
            const double xi = x[ix];
            double prev = 0.0, cur = std::pow(std::numbers::pi, -0.25) * std::exp(-0.5 * xi * xi);
            for (int k = 1; k <= n_photon; ++k) {
                const double next = std::sqrt(2.0 / k) * xi * cur - std::sqrt((k - 1.0) / k) * prev;
                prev = cur;
                cur = next;
            }
            (s == 0 ? wf.g : wf.e)[wf.at(iq, ix)] = chi * cur;
        }
    return wf;
}

}  // namespace

TEST_CASE("grid spec geometry") {
    const GridSpec g = reference_grid();
    CHECK(g.n_q == 451);
    CHECK(g.n_x == 181);
    CHECK(g.x_min == -60.0);
    CHECK(g.dq() == doctest::Approx(15.0 / 450.0));
    CHECK(g.q_points().back() == doctest::Approx(9.0));
    GridSpec bad = g;
    bad.n_q = 1;
    CHECK_THROWS_AS(bad.validate(), ConfigError);
}

TEST_CASE("tabulated curves interpolate and refuse extrapolation") {
    std::vector<double> q, lin, wave;
    for (int i = 0; i <= 200; ++i) {
        q.push_back(-2.0 + 0.02 * i);
        lin.push_back(3.0 * q.back() - 1.0);
        wave.push_back(std::sin(q.back()));
    }
    const TabulatedCurve l(q, lin), w(q, wave);
    CHECK(l(0.123) == doctest::Approx(3.0 * 0.123 - 1.0).epsilon(1e-12));
    CHECK(std::abs(w(0.511) - std::sin(0.511)) < 1e-7);
    CHECK_THROWS_AS(w(2.5), ConfigError);
    CHECK_THROWS_AS(TabulatedCurve({0.0, 1.0}, {0.0, 1.0}), ConfigError);
    CHECK_THROWS_AS(TabulatedCurve({0.0, 1.0, 1.0}, {0.0, 1.0, 2.0}), ConfigError);
}

TEST_CASE("curve files round-trip") {
    std::vector<double> q;
    for (int i = 0; i <= 300; ++i) q.push_back(-6.0 + 0.05 * i);
    const CurveSet a = curves_from_model(presets::cah_fit(), q);
    std::stringstream buf;
    write_curves(buf, a);
    const CurveSet b = load_curves(buf);
    REQUIRE(b.size() == a.size());
    for (const auto& [name, curve] : a)
        for (std::size_t i = 0; i < q.size(); i += 17) {
            const double v = curve.values()[i];
            CHECK(b.at(name).values()[i] == doctest::Approx(v).epsilon(1e-14).scale(1e-30));
        }
}

TEST_CASE("curve file errors name the line") {
    auto error_of = [](const std::string& text) {
        std::istringstream in(text);
        try {
            load_curves(in);
        } catch (const ConfigError& e) {
            return std::string(e.what());
        }
        return std::string("no error");
    };
    CHECK(error_of("# comment\nq V_g:eV\n").find("line 2") != std::string::npos);
    CHECK(error_of("q:bohr V_g:eV\n0 0\n1 1\n2\n").find("line 4") != std::string::npos);
    CHECK(error_of("q:bohr V_g:eV\n0 0\n1 x1\n").find("line 3") != std::string::npos);
    CHECK(error_of("q:bohr V_q:eV\n").find("unknown curve") != std::string::npos);
    CHECK(error_of("q:bohr d_ge:eV\n").find("au") != std::string::npos);
    CHECK(error_of("q:bohr V_g:bohr\n").find("energy") != std::string::npos);
    CHECK(error_of("V_g:eV q:bohr\n").find("first column") != std::string::npos);
}

TEST_CASE("tables from curves need V_g and V_e covering the grid") {
    std::vector<double> q;
    for (int i = 0; i <= 300; ++i) q.push_back(-6.0 + 0.05 * i);
    CurveSet c = curves_from_model(presets::cah_fit(), q);
    GridSpec g = small_grid();
    const GridTables t = tables_from_curves(c, g, presets::cah_reduced_mass());
    const GridTables ref = map_model_to_grid(presets::cah_fit(), g);
    for (std::size_t i = 0; i < t.q.size(); i += 10) {
        CHECK(t.V_e[i] == doctest::Approx(ref.V_e[i]).epsilon(1e-8).scale(1e-12));
        CHECK(t.d_ge[i] == doctest::Approx(ref.d_ge[i]).epsilon(1e-6).scale(1e-9));
    }
    g.q_max = 12.0;
    CHECK_THROWS_AS(tables_from_curves(c, g, presets::cah_reduced_mass()), ConfigError);
    c.erase("V_e");
    CHECK_THROWS_AS(tables_from_curves(c, small_grid(), presets::cah_reduced_mass()), ConfigError);
}

TEST_CASE("sinc-DVR ground state of a harmonic well") {
    const double M = 1792.1, w = units::wavenumber(1350.0), q0 = -1.1;
    GridSpec g = small_grid();
    std::vector<double> v;
    for (double q : g.q_points()) v.push_back(0.5 * M * w * w * (q - q0) * (q - q0));
    const auto psi = ground_state_1d(v, g.dq(), M);
    const auto q = g.q_points();
    double worst = 0.0;
    for (std::size_t i = 0; i < q.size(); ++i) {
        const double ref = std::pow(M * w / std::numbers::pi, 0.25) * std::exp(-0.5 * M * w * (q[i] - q0) * (q[i] - q0));
        worst = std::max(worst, std::abs(psi[i] - ref));
    }
    CHECK(worst < 1e-6);
}

TEST_CASE("Franck-Condon grid energy matches the Gaussian expectation value") {
    // <H> for the X ground Gaussian on the e surface with the photon vacuum:
    // omega_ge + omega_X/4 + omega_e^2/(4 omega_X) + M omega_e^2 (q_X - q_e)^2 / 2.
    const HqrModel m = presets::cah_fit();
    const GridSpec g = small_grid();
    const GridTables t = map_model_to_grid(m, g);
    const GridWavefunction wf = franck_condon_grid(t, g);
    CHECK(wf.norm() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(wf.population(0) == 0.0);
    const double wx = m.ground_frequency();
    const double d = m.q_X - m.q_e;
    const double ref = m.omega_ge + 0.25 * wx + m.omega_e * m.omega_e / (4.0 * wx) + 0.5 * m.mass * m.omega_e * m.omega_e * d * d;
    CHECK(grid_energy(wf, t, {units::wavenumber(5600.0), 0.0}) == doctest::Approx(ref).epsilon(1e-7));
    CHECK(grid_q_expectation(wf, 1) == doctest::Approx(m.q_X).epsilon(1e-8));
}

TEST_CASE("photon observables on Fock product states") {
    const GridSpec g = small_grid();
    for (int n : {0, 2, 4}) {
        const GridWavefunction wf = product_state(g, 0.5, 0.3, n, 1);
        CHECK(std::abs(grid_mean_photons(wf) - n) < 1e-8);
        CHECK(photon_projection_grid(wf, n, 1) == doctest::Approx(1.0).epsilon(1e-8));
        CHECK(photon_projection_grid(wf, n, 0) == 0.0);
    }
}

TEST_CASE("refined x marginal resolves nodes a coarse grid misses") {
    GridSpec g = reference_grid();
    g.q_min = -2.0;
    g.q_max = 2.0;
    g.n_q = 41;
    const GridWavefunction wf = product_state(g, 0.0, 0.3, 4, 1);
    const auto coarse = x_marginal(wf, 1, 1);
    const auto fine = x_marginal(wf, 1, 8);
    CHECK(fine.size() == (coarse.size() - 1) * 8 + 1);
    CHECK(count_nodes(coarse) < 4);
    CHECK(count_nodes(fine) == 4);
    // Interpolation reproduces the samples it started from.
    for (std::size_t i = 0; i < coarse.size(); ++i)
        CHECK(fine[8 * i] == doctest::Approx(coarse[i]).epsilon(1e-9).scale(1e-12));
    // Band-limited interpolation keeps the discrete norm.
    double integral = 0.0, coarse_sum = 0.0;
    for (double r : fine) integral += r * g.dx() / 8.0;
    for (double r : coarse) coarse_sum += r * g.dx();
    CHECK(integral == doctest::Approx(coarse_sum).epsilon(1e-8));
    CHECK(integral == doctest::Approx(1.0).epsilon(1e-3));
}

TEST_CASE("node counting on sampled Hermite densities") {
    std::vector<double> x;
    for (int i = -400; i <= 400; ++i) x.push_back(0.02 * i);
    for (int n = 0; n < 6; ++n) {
        std::vector<double> rho;
        for (double xi : x) {
            double prev = 0.0, cur = std::exp(-0.5 * xi * xi);
            for (int k = 1; k <= n; ++k) {
                const double next = std::sqrt(2.0 / k) * xi * cur - std::sqrt((k - 1.0) / k) * prev;
                prev = cur;
                cur = next;
            }
            rho.push_back(cur * cur);
        }
        CHECK(count_nodes(rho) == n);
    }
}

TEST_CASE("grid propagation conserves norm and energy") {
    const HqrModel m = presets::cah_fit();
    const GridSpec g = small_grid();
    const GridTables t = map_model_to_grid(m, g);
    GridRunOptions o;
    o.t_final_fs = 35.0;
    o.sample_fs = 1.0;
    o.n_photon_max = 4;
    const auto res = grid_propagate(franck_condon_grid(t, g), t, {units::wavenumber(5600.0), 0.08}, o);
    CHECK(max_drift(res.series.channel("norm")) < 1e-8);
    CHECK(units::ev(max_drift(res.series.channel("energy_eV"))) < 1e-6);
    CHECK(res.series.size() == 36);
    CHECK(res.final_state.time_fs == doctest::Approx(35.0));
}

TEST_CASE("halving dt barely moves P_g") {
    const HqrModel m = presets::cah_fit();
    const GridSpec g = small_grid();
    const GridTables t = map_model_to_grid(m, g);
    GridRunOptions o;
    o.t_final_fs = 10.0;
    CHECK(dt_halving_change(franck_condon_grid(t, g), t, {units::wavenumber(5600.0), 0.08}, o) < 1e-4);
}

TEST_CASE("mirrored model with reflected data gives the same P_g") {
    const HqrModel m = presets::cah_fit();
    GridSpec g = small_grid();
    g.q_min = -7.5;
    g.q_max = 7.5;
    g.n_q = 151;
    g.dt_fs = 0.02;
    const CavitySpec c{units::wavenumber(5600.0), 0.16};
    const GridTables t = map_model_to_grid(m, g);
    const GridTables tm = map_model_to_grid(mirror_model(m), g);
    const GridWavefunction wf = franck_condon_grid(t, g);
    GridRunOptions o;
    o.t_final_fs = 10.0;
    o.sample_fs = 0.5;
    o.n_photon_max = 2;
    const auto a = grid_propagate(wf, t, c, o).series.channel("P_g");
    const auto b = grid_propagate(reflect_q(wf), tm, c, o).series.channel("P_g");
    double worst = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) worst = std::max(worst, std::abs(a[i] - b[i]));
    CHECK(worst < 1e-6);
    CHECK_THROWS_AS(reflect_q(franck_condon_grid(map_model_to_grid(m, small_grid()), small_grid())), ConfigError);
}

TEST_CASE("absorbing layer removes density that reaches it") {
    const HqrModel m = presets::cah_fit();
    GridSpec g = small_grid();
    const GridTables t = map_model_to_grid(m, g);
    GridRunOptions o;
    o.t_final_fs = 10.0;
    o.sample_fs = 10.0;
    o.n_photon_max = 0;
    const CavitySpec c{units::wavenumber(5600.0), 0.0};
    const auto free = grid_propagate(franck_condon_grid(t, g), t, c, o).series.channel("norm");
    o.cap = CapSpec{7.0, 0.01};  // reaches in to q = 1 from the left edge
    const auto damped = grid_propagate(franck_condon_grid(t, g), t, c, o).series.channel("norm");
    CHECK(free.back() == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(damped.back() < 0.99);
}

TEST_CASE("density snapshots carry their grid header") {
    const HqrModel m = presets::cah_fit();
    GridSpec g = small_grid();
    g.n_q = 31;
    g.n_x = 8;
    const GridTables t = map_model_to_grid(m, g);
    GridRunOptions o;
    o.t_final_fs = 0.1;
    o.sample_fs = 0.1;
    o.snapshot_times = {0.0, 0.1};
    const auto res = grid_propagate(franck_condon_grid(t, g), t, {units::wavenumber(5600.0), 0.0}, o);
    REQUIRE(res.snapshots.size() == 2);
    std::ostringstream out;
    write_snapshot(out, res.snapshots[1], 1);
    std::istringstream in(out.str());
    std::string header;
    std::getline(in, header);
    CHECK(header.rfind("# n_q 31 n_x 8", 0) == 0);
    int rows = 0;
    for (std::string line; std::getline(in, line);) ++rows;
    CHECK(rows == 31);
}
