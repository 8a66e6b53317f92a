#include "hqr/selfcheck.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "hqr/dynamics.hpp"
#include "hqr/grid.hpp"
#include "hqr/spectra.hpp"
#include "hqr/units.hpp"

namespace hqr {

namespace {

double drift(const std::vector<double>& v) {
    double d = 0.0;
    for (double x : v) d = std::max(d, std::abs(x - v.front()));
    return d;
}

CheckResult below(std::string name, double value, double bound) {
    return {std::move(name), value < bound, value, bound};
}

}  // namespace

std::vector<CheckResult> run_self_checks(int workers) {
    std::vector<CheckResult> out;
    const HqrModel cah = presets::cah_fit();
    const CavitySpec cav{units::wavenumber(5600.0), 0.16};
    const BasisSpec small{60, 6};

    double herm = 0.0;
    for (const HqrModel& m : {cah, presets::two_level_demo()}) {
        for (bool cr : {true, false}) {
            AssemblyOptions o;
            o.include_counter_rotating = cr;
            herm = std::max(herm, asymmetry(assemble_hamiltonian(m, cav, small, o).entries));
        }
        herm = std::max(herm, asymmetry(assemble_transformed_hamiltonian(m, cav, small).entries));
    }
    out.push_back(below("hamiltonian hermiticity", herm, 1e-12));

    {
        const BasisSpec b{80, 8};
        PropagationOptions po;
        const auto res =
            propagate(assemble_hamiltonian(cah, cav, b), franck_condon_state(cah, b), time_grid(0, 35, 0.5), po);
        out.push_back(below("spectral norm drift", drift(res.series.channel("norm")), 1e-9));
        out.push_back(
            below("spectral energy drift (hartree)", units::ev(drift(res.series.channel("energy_eV"))), 1e-9));
    }
    {
        HqrModel m = cah;
        m.dc.amplitude = 0.0;
        AssemblyOptions o;
        o.include_counter_rotating = false;
        const BasisSpec b{80, 8};
        const auto res = propagate(assemble_hamiltonian(m, cav, b, o), franck_condon_state(m, b), time_grid(0, 35, 0.5));
        out.push_back(below("RWA excitation-number drift", drift(res.series.channel("excitations")), 1e-9));
    }
    {
        GridSpec g;
        g.n_q = 151;
        g.n_x = 64;
        g.x_min = -9.6;
        g.x_max = 9.6;
        g.dt_fs = 0.01;
        const CavitySpec c{units::wavenumber(5600.0), 0.08};
        const GridTables t = map_model_to_grid(cah, g);
        GridRunOptions o;
        o.t_final_fs = 35.0;
        o.sample_fs = 1.0;
        o.n_photon_max = 4;
        const auto res = grid_propagate(franck_condon_grid(t, g), t, c, o);
        out.push_back(below("grid norm drift", drift(res.series.channel("norm")), 1e-8));
        out.push_back(below("grid energy drift (hartree)", units::ev(drift(res.series.channel("energy_eV"))), 1e-6));
    }
    {
        const double d0 = displacement_matrix(1.0, 40).entries(0, 0);
        const double s0 = squeeze_matrix(-0.5 * std::log(2.0), 40).entries(0, 0);
        const Matrix d2 = displacement_matrix(2.0, 60).entries;
        double fc = 0.0;
        for (int n = 0; n <= 6; ++n) {
            const double poisson = std::exp(-4.0) * std::pow(4.0, n) / std::tgamma(n + 1.0);
            fc = std::max(fc, std::abs(d2(n, 0) * d2(n, 0) - poisson));
        }
        out.push_back(below("<0|D(1)|0> vs exp(-1/2)", std::abs(d0 - std::exp(-0.5)), 1e-8));
        out.push_back(below("<0|S(r)|0> vs cosh(r)^(-1/2)",
                            std::abs(s0 - 1.0 / std::sqrt(std::cosh(0.5 * std::log(2.0)))), 1e-8));
        out.push_back(below("Poisson Franck-Condon factors", fc, 1e-8));
    }
    {
        const CavitySpec c{units::wavenumber(5600.0), 0.08};
        std::vector<double> gaps;
        for (int n : {50, 65, 80}) {
            const BasisSpec b{n, 4};
            const Vector a = eigvalsh(assemble_hamiltonian(cah, c, b).entries);
            const Vector t = eigvalsh(assemble_transformed_hamiltonian(cah, c, b).entries);
            gaps.push_back((a.head(20) - t.head(20)).cwiseAbs().maxCoeff());
        }
        const bool shrinking = gaps[1] <= gaps[0] && gaps[2] <= gaps[1];
        out.push_back({"isospectrality gap shrinks with n_vib", shrinking, gaps[2], gaps[0]});
    }
    {
        std::vector<double> lambdas;
        for (int i = 0; i <= 8; ++i) lambdas.push_back(-2.0 + 0.5 * i);
        const BasisSpec b{30, 3};
        auto csv = [&](int w) {
            SweepOptions o;
            o.workers = w;
            std::ostringstream s;
            write_eigen_table_csv(s, lambda_sweep(cah, lambdas, cav, b, o), units::ev(0.0), units::ev(2.0));
            return s.str();
        };
        const bool same = csv(1) == csv(std::max(2, workers));
        out.push_back({"sweep output identical across worker counts", same, same ? 0.0 : 1.0, 0.5});
    }
    return out;
}

}  // namespace hqr
