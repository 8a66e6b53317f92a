#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <sstream>

#include "hqr/error.hpp"
#include "hqr/spectra.hpp"
#include "hqr/units.hpp"

using namespace hqr;

namespace {

// Uncoupled levels omega_g (n + 1/2) + n_c omega_c and
// omega_ge + omega_e (n + 1/2) + n_c omega_c, sorted.
std::vector<double> bare_levels(const HqrModel& m, double omega_c, int n_fock, int n_max) {
    std::vector<double> out;
    for (int nc = 0; nc < n_fock; ++nc)
        for (int n = 0; n < n_max; ++n) {
            out.push_back(m.omega_g * (n + 0.5) + nc * omega_c);
            out.push_back(m.omega_ge + m.omega_e * (n + 0.5) + nc * omega_c);
        }
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace

TEST_CASE("diagonalize rejects non-symmetric input and returns small residuals") {
    OperatorMatrix bad{Matrix::Identity(3, 3), "bad"};
    bad.entries(0, 1) = 1e-9;
    CHECK_THROWS_AS(diagonalize(bad), NumericalError);

    const OperatorMatrix h = assemble_hamiltonian(presets::cah_fit(), {units::wavenumber(5600.0), 0.08}, {60, 4});
    const EigenSystem es = diagonalize(h);
    CHECK(eigen_residual(h, es) < 1e-12);
    for (Eigen::Index k = 1; k < es.values.size(); ++k) CHECK(es.values(k) >= es.values(k - 1));
}

TEST_CASE("large spectra agree with an independent solver") {
    // Guards the LAPACK path (and its fallback) on sizes where blocked kernels
    // are in play.
    const OperatorMatrix h = assemble_hamiltonian(presets::cah_fit(), {units::wavenumber(5600.0), 0.16}, {110, 3});
    const Vector lapack = eigvalsh(h.entries);
    Eigen::SelfAdjointEigenSolver<Matrix> ref(h.entries, Eigen::EigenvaluesOnly);
    CHECK((lapack - ref.eigenvalues()).cwiseAbs().maxCoeff() < 1e-12);
    const EigenSystem es = diagonalize(h);
    CHECK(eigen_residual(h, es) < 1e-12);
    CHECK((es.vectors.transpose() * es.vectors - Matrix::Identity(h.dim(), h.dim())).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("without couplings the spectrum is the bare ladder for any lambda") {
    HqrModel m = presets::two_level_demo();
    m.dc.amplitude = 0.0;
    const double wc = units::ev(1.0);
    const BasisSpec b{100, 3};
    const auto table = lambda_sweep(m, {0.0, 0.8, 1.5}, {wc, 0.0}, b);
    const auto ref = bare_levels(m, wc, 3, 40);
    for (const Vector& e : table.energies)
        for (int k = 0; k < 30; ++k) CHECK(std::abs(e(k) - ref[static_cast<std::size_t>(k)]) < 1e-10);
}

TEST_CASE("omega_g = 2 omega_e: |1; g, n> is degenerate with |0; g, n + 5>") {
    HqrModel m = presets::two_level_demo();
    m.dc.amplitude = 0.0;
    CHECK(m.squeeze() == doctest::Approx(-0.5 * std::log(2.0)));
    const double wc = units::ev(1.0);
    const Vector e = eigvalsh(assemble_hamiltonian(m, {wc, 0.0}, {60, 2}).entries);
    for (int n = 0; n < 4; ++n) {
        const double target = wc + m.omega_g * (n + 0.5);
        int hits = 0;
        for (Eigen::Index k = 0; k < e.size(); ++k)
            if (std::abs(e(k) - target) < 1e-10) ++hits;
        // |1; g, n>, |0; g, n+5>, and e-ladder levels landing on the same energy.
        CHECK(hits >= 2);
    }
}

TEST_CASE("Rabi doublet at resonance splits by 2g") {
    // Equal frequencies keep |1; g, n> and |0; e, n> exactly resonant at lambda = 0.
    HqrModel m = presets::two_level_demo();
    m.omega_e = m.omega_g;
    const double wc = units::ev(1.0);
    const double g = units::ev(0.05);
    const CavitySpec c{wc, chi_for_coupling(g, m.dipole.amplitude, wc)};
    SweepOptions o;
    o.coupling = SweepCoupling::constant_dipole_no_dc;
    o.store_vectors = true;
    const auto table = lambda_sweep(m, {0.0}, c, {60, 4}, o);
    for (int n = 0; n < 5; ++n) CHECK(units::to_ev(rabi_splitting(table, n)) == doctest::Approx(0.1).epsilon(0.01));
}

TEST_CASE("RWA splitting doubles with the coupling") {
    // 0.23 eV keeps the bare |0; g, n> ladder away from the doublet.
    HqrModel m = presets::two_level_demo();
    m.omega_g = m.omega_e = units::ev(0.23);
    m.dc.amplitude = 0.0;
    const double wc = units::ev(1.0);
    const BasisSpec b{40, 4};
    auto splitting = [&](double g) {
        const CavitySpec c{wc, chi_for_coupling(g, m.dipole.amplitude, wc)};
        AssemblyOptions ao;
        ao.include_counter_rotating = false;
        ao.constant_dipole = true;
        const Vector e = eigvalsh(assemble_hamiltonian(sweep_point_model(m, 0.0, SweepCoupling::constant_dipole_no_dc),
                                                       c, b, ao)
                                      .entries);
        // One-excitation manifold at n = 0: the pair around omega_c + omega_g / 2.
        const double centre = wc + 0.5 * m.omega_g;
        std::vector<double> near;
        for (Eigen::Index k = 0; k < e.size(); ++k)
            if (std::abs(e(k) - centre) < 1.5 * g) near.push_back(e(k));
        REQUIRE(near.size() == 2);
        return near[1] - near[0];
    };
    const double g = units::ev(0.02);
    CHECK(splitting(2.0 * g) == doctest::Approx(2.0 * splitting(g)).epsilon(1e-10));
    CHECK(splitting(g) == doctest::Approx(2.0 * g).epsilon(1e-10));
}

TEST_CASE("rabi_splitting needs vectors and lambda = 0") {
    const auto table = lambda_sweep(presets::two_level_demo(), {0.5}, {units::ev(1.0), 0.05}, {40, 2});
    CHECK_THROWS_AS(rabi_splitting(table, 0), ConfigError);
}

TEST_CASE("level matching has no sorting jumps") {
    // The largest matched jump shrinks in proportion to the step.
    const HqrModel m = presets::two_level_demo();
    const CavitySpec c{units::ev(1.0), 0.05};
    const BasisSpec b{70, 3};
    auto max_jump = [&](double step) {
        std::vector<double> lambdas;
        for (double l = 0.0; l <= 1.0 + 1e-12; l += step) lambdas.push_back(l);
        const auto t = lambda_sweep(m, lambdas, c, b);
        const auto steps = match_levels(t, 12);
        double worst = 0.0;
        for (std::size_t i = 0; i < steps.size(); ++i)
            for (int k = 0; k < 12; ++k) {
                REQUIRE(steps[i][k] >= 0);
                worst = std::max(worst, std::abs(t.energies[i + 1](steps[i][k]) - t.energies[i](k)));
            }
        return worst;
    };
    const double coarse = max_jump(0.1);
    const double fine = max_jump(0.05);
    CHECK(fine < 0.75 * coarse);
}

TEST_CASE("sweep results do not depend on the worker count") {
    const HqrModel m = presets::cah_fit();
    const std::vector<double> lambdas{-2.0, -1.0, 0.5, 1.5, 2.5};
    SweepOptions one, many;
    one.workers = 1;
    many.workers = 4;
    const auto a = lambda_sweep(m, lambdas, {units::wavenumber(5600.0), 0.1}, {50, 3}, one);
    const auto b = lambda_sweep(m, lambdas, {units::wavenumber(5600.0), 0.1}, {50, 3}, many);
    std::ostringstream sa, sb;
    write_eigen_table_csv(sa, a, 0.0, 1.0);
    write_eigen_table_csv(sb, b, 0.0, 1.0);
    CHECK(sa.str() == sb.str());
}

TEST_CASE("eigen table CSV carries 12 significant digits") {
    const auto t = lambda_sweep(presets::two_level_demo(), {0.25}, {units::ev(1.0), 0.0}, {30, 2});
    std::ostringstream out;
    write_eigen_table_csv(out, t, units::ev(1.0), units::ev(1.8));
    std::istringstream in(out.str());
    std::string header, row;
    std::getline(in, header);
    std::getline(in, row);
    CHECK(header.rfind("lambda,E0_eV", 0) == 0);
    CHECK(row.rfind("2.50000000000e-01,", 0) == 0);
}

TEST_CASE("dressed-curve crossings solve their defining equations") {
    const HqrModel m = presets::cah_fit();
    const double wc = units::wavenumber(5600.0);
    std::vector<double> q;
    for (int i = 0; i <= 300; ++i) q.push_back(-6.0 + 0.05 * i);
    const DressedCurves d = dressed_curves(m, {wc, 0.1}, 4, q);
    CHECK(d.curves.size() == 5);
    CHECK(d.crossings.dc_position == doctest::Approx(crossing_point(m)));
    REQUIRE(!d.crossings.lic_r.empty());
    REQUIRE(!d.crossings.lic_cr.empty());
    const double qr = d.crossings.lic_r[0].q;
    const double qcr = d.crossings.lic_cr[0].q;
    CHECK(std::abs(m.V_e(qr) - m.V_g(qr) - wc) < 1e-12);
    CHECK(std::abs(m.V_e(qcr) + wc - m.V_g(qcr)) < 1e-12);
    CHECK(d.curves[2][1][10] == doctest::Approx(m.V_e(q[10]) + 2.0 * wc));
}

TEST_CASE("LIC ordering around the crossing flips under mirror_model") {
    const HqrModel m = presets::cah_fit();
    const double wc = units::wavenumber(5600.0);
    std::vector<double> q;
    for (int i = 0; i <= 400; ++i) q.push_back(-10.0 + 0.05 * i);
    const auto a = dressed_curves(m, {wc, 0.1}, 2, q).crossings;
    const auto b = dressed_curves(mirror_model(m), {wc, 0.1}, 2, q).crossings;
    auto side = [](double x) { return x > 0.0 ? 1 : -1; };
    CHECK(side(a.lic_r[0].q - a.dc_position) == -side(b.lic_r[0].q - b.dc_position));
    CHECK(side(a.lic_cr[0].q - a.dc_position) == -side(b.lic_cr[0].q - b.dc_position));
}

TEST_CASE("open channels below 3.1 eV at 5600 cm-1") {
    const auto ch = open_channels(presets::cah_fit(), {units::wavenumber(5600.0), 0.16}, 8, units::ev(3.1));
    CHECK(ch.size() == 10);
    for (const auto& c : ch) CHECK(c.minimum < units::ev(3.1));
}
