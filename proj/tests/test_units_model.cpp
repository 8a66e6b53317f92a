#include <doctest.h>

#include <cmath>

#include "hqr/error.hpp"
#include "hqr/model.hpp"
#include "hqr/units.hpp"

using namespace hqr;

TEST_CASE("unit conversions use the fixed constants") {
    CHECK(to_atomic({1.0, Unit::eV}) == doctest::Approx(0.036749322176).epsilon(1e-15));
    CHECK(to_atomic({1.0, Unit::wavenumber}) == doctest::Approx(4.556335253e-6).epsilon(1e-15));
    CHECK(to_atomic({2.0, Unit::femtosecond}) == doctest::Approx(82.682746672).epsilon(1e-15));
    CHECK(to_atomic({1.0, Unit::amu}) == doctest::Approx(1822.888486209).epsilon(1e-15));
    // 1 eV in cm-1, from the two constants independently of the code path.
    CHECK(from_atomic(units::ev(1.0), Unit::wavenumber).value == doctest::Approx(8065.5439).epsilon(1e-7));
    CHECK(from_atomic(to_atomic({3.7, Unit::bohr}), Unit::bohr).value == 3.7);
}

TEST_CASE("unit parsing") {
    CHECK(parse_unit("cm-1") == Unit::wavenumber);
    CHECK(parse_unit("eV") == Unit::eV);
    CHECK(parse_unit("") == Unit::dimensionless);
    CHECK(dimension_of(parse_unit("fs")) == Dimension::time);
    CHECK_THROWS_AS(parse_unit("furlong"), ConfigError);
}

TEST_CASE("Huang-Rhys factor of the two-level demo") {
    const double lambda = huang_rhys(1.7, 1792.1, units::ev(0.2));
    CHECK(lambda == doctest::Approx(4.37).epsilon(0.02 / 4.37));
    // Reduced mass of CaH in electron masses.
    CHECK(presets::cah_reduced_mass() == doctest::Approx(1792.1).epsilon(1e-4));
}

TEST_CASE("huang_rhys is odd and inverted by displacement_for_huang_rhys") {
    const double m = 1792.1, w = units::wavenumber(1350.0);
    for (double q : {0.3, 1.4, 2.9}) {
        CHECK(huang_rhys(-q, m, w) == -huang_rhys(q, m, w));
        CHECK(displacement_for_huang_rhys(huang_rhys(q, m, w), m, w) == doctest::Approx(q).epsilon(1e-14));
    }
}

TEST_CASE("squeeze factor") {
    CHECK(squeeze_factor(1.0, 1.0) == 0.0);
    CHECK(squeeze_factor(2.0, 1.0) == doctest::Approx(-0.5 * std::log(2.0)));
}

TEST_CASE("crossing points of the two reference models") {
    CHECK(crossing_point(presets::two_level_demo()) == doctest::Approx(0.95).epsilon(0.01 / 0.95));
    CHECK(crossing_point(presets::cah_fit()) == doctest::Approx(0.74).epsilon(0.01 / 0.74));
}

TEST_CASE("crossing residual and energy") {
    for (const HqrModel& m : {presets::two_level_demo(), presets::cah_fit()}) {
        const double qc = crossing_point(m);
        CHECK(std::abs(m.V_g(qc) - m.V_e(qc)) < 1e-10);
        CHECK(crossing_energy(m) == doctest::Approx(m.V_g(qc)).epsilon(1e-14));
    }
}

TEST_CASE("crossing point is continuous through r = 0") {
    HqrModel m = presets::cah_fit();
    m.omega_e = m.omega_g;
    const double q0 = crossing_point(m);
    // Closed form at r = 0, written out here.
    CHECK(q0 == doctest::Approx(0.5 * m.q_e + m.omega_ge / (m.mass * m.q_e * m.omega_g * m.omega_g)));
    for (double r : {1e-6, -1e-6}) {
        m.omega_e = m.omega_g * std::exp(2.0 * r);
        CHECK(std::abs(crossing_point(m) - q0) < 1e-4);
    }
}

TEST_CASE("crossing point against a bracketing root search") {
    // Independent route: scan V_g - V_e for the sign change nearest q_e/2 and
    // refine by bisection.
    for (const HqrModel& m : {presets::two_level_demo(), presets::cah_fit()}) {
        auto f = [&](double q) { return m.V_g(q) - m.V_e(q); };
        double lo = 0.0, hi = m.q_e;
        REQUIRE(f(lo) * f(hi) < 0.0);
        for (int i = 0; i < 200; ++i) {
            const double mid = 0.5 * (lo + hi);
            (f(mid) * f(lo) > 0.0 ? lo : hi) = mid;
        }
        CHECK(crossing_point(m) == doctest::Approx(0.5 * (lo + hi)).epsilon(1e-10));
    }
}

TEST_CASE("missing crossing is reported") {
    HqrModel m = presets::cah_fit();
    m.omega_e = m.omega_g;
    m.q_e = 0.0;
    CHECK_THROWS_AS(crossing_point(m), NoCrossingError);
    HqrModel far = presets::two_level_demo();
    far.omega_e = units::ev(0.4);
    far.q_e = 0.05;
    CHECK_THROWS_AS(crossing_point(far), NoCrossingError);
}

TEST_CASE("mirror_model is an involution preserving |q_e - q_X|") {
    const HqrModel m = presets::cah_fit();
    const HqrModel mm = mirror_model(m);
    const HqrModel back = mirror_model(mm);
    CHECK(mm.q_e == -m.q_e);
    CHECK(std::abs(mm.q_e - mm.q_X) == doctest::Approx(std::abs(m.q_e - m.q_X)));
    CHECK(back.q_e == m.q_e);
    CHECK(back.q_X == doctest::Approx(m.q_X).epsilon(1e-15));
    // The packet still starts to the left of the excited minimum.
    CHECK(mm.q_X < mm.q_e);
}

TEST_CASE("mirrored crossing is the reflection through q = 0") {
    for (const HqrModel& m : {presets::two_level_demo(), presets::cah_fit()}) {
        CHECK(crossing_point(mirror_model(m)) == doctest::Approx(-crossing_point(m)).epsilon(1e-12));
    }
}

TEST_CASE("mirror keeps explicit profile centers at their offset from the crossing") {
    HqrModel m = presets::cah_fit();
    m.dc.center = crossing_point(m) + 0.1;
    const HqrModel mm = mirror_model(m);
    CHECK(*mm.dc.center - crossing_point(mm) == doctest::Approx(0.1));
}

TEST_CASE("launch_model puts the packet at the left turning point for both signs") {
    const HqrModel base = presets::cah_fit();
    for (double lambda : {2.0, -2.0, 5.0, -5.0}) {
        const HqrModel m = launch_model(base, lambda);
        CHECK(m.huang_rhys() == doctest::Approx(lambda).epsilon(1e-12));
        CHECK(m.q_X < m.q_e);
        CHECK(m.q_e - m.q_X == doctest::Approx(base.q_e - base.q_X));
    }
}

TEST_CASE("Gaussian profile and cavity coupling") {
    const GaussianProfile p{2.0, 0.5, 0.25};
    CHECK(p(0.5) == 2.0);
    CHECK(p(0.75) == doctest::Approx(2.0 * std::exp(-0.5)));
    const CavitySpec c{units::ev(1.0), 0.1};
    CHECK(c.coupling(1.5) == doctest::Approx(0.1 * 1.5 * std::sqrt(units::ev(1.0) / 2.0)));
    CHECK(chi_for_coupling(c.coupling(1.5), 1.5, c.omega_c) == doctest::Approx(0.1));
    CHECK_THROWS_AS((CavitySpec{units::ev(1.0), -0.1}.validate()), ConfigError);
    CHECK_THROWS_AS((GaussianProfile{1.0, 0.0, 0.0}.validate()), ConfigError);
}

TEST_CASE("model validation") {
    HqrModel m = presets::cah_fit();
    CHECK_NOTHROW(m.validate());
    m.mass = -1.0;
    CHECK_THROWS_AS(m.validate(), ConfigError);
}
