#include "hqr/spectra.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <string>

#include "hqr/error.hpp"
#include "hqr/parallel.hpp"
#include "hqr/units.hpp"

namespace hqr {

EigenSystem diagonalize(const OperatorMatrix& h) {
    const double asym = asymmetry(h.entries);
    if (!(asym < 1e-12))
        throw NumericalError("diagonalize: " + h.label + " is not Hermitian (asymmetry " + std::to_string(asym) + ")");
    return eigh(h.entries);
}

double eigen_residual(const OperatorMatrix& h, const EigenSystem& es) {
    const double scale = std::max(h.entries.cwiseAbs().maxCoeff(), std::numeric_limits<double>::min());
    const Matrix r = h.entries * es.vectors - es.vectors * es.values.asDiagonal();
    return r.colwise().norm().maxCoeff() / scale;
}

Vector EigenTable::window(std::size_t i, double lo, double hi) const {
    const Vector& e = energies.at(i);
    std::vector<double> kept;
    for (Eigen::Index k = 0; k < e.size(); ++k)
        if (e(k) >= lo && e(k) <= hi) kept.push_back(e(k));
    return Eigen::Map<Vector>(kept.data(), static_cast<Eigen::Index>(kept.size()));
}

HqrModel sweep_point_model(const HqrModel& model, double lambda, SweepCoupling coupling) {
    HqrModel m = with_huang_rhys(model, lambda);
    if (coupling == SweepCoupling::constant_dipole_no_dc) {
        m.dc.amplitude = 0.0;
    } else {
        m.dc.center.reset();
        m.dipole.center.reset();
    }
    return m;
}

EigenTable lambda_sweep(const HqrModel& model, const std::vector<double>& lambdas, const CavitySpec& cavity,
                        const BasisSpec& basis, const SweepOptions& options) {
    EigenTable table;
    table.parameter = "lambda";
    table.values = lambdas;
    table.template_model = model;
    table.basis = basis;
    table.energies.resize(lambdas.size());
    if (options.store_vectors) table.vectors.resize(lambdas.size());

    AssemblyOptions assembly;
    assembly.constant_dipole = options.coupling == SweepCoupling::constant_dipole_no_dc;

    parallel_for(lambdas.size(), options.workers, [&](std::size_t i) {
        const HqrModel m = sweep_point_model(model, lambdas[i], options.coupling);
        const OperatorMatrix h = assemble_hamiltonian(m, cavity, basis, assembly);
        if (options.store_vectors) {
            EigenSystem es = diagonalize(h);
            table.energies[i] = std::move(es.values);
            table.vectors[i] = std::move(es.vectors);
        } else {
            if (!(asymmetry(h.entries) < 1e-12)) throw NumericalError("sweep Hamiltonian is not Hermitian");
            table.energies[i] = eigvalsh(h.entries);
        }
    });
    return table;
}

double rabi_splitting(const EigenTable& table, int pair_index) {
    if (table.vectors.empty()) throw ConfigError("rabi_splitting needs stored eigenvectors");
    std::size_t row = table.values.size();
    for (std::size_t i = 0; i < table.values.size(); ++i)
        if (table.values[i] == 0.0) row = i;
    if (row == table.values.size()) throw ConfigError("rabi_splitting needs lambda = 0 in the sweep");

    const BasisSpec& basis = table.basis;
    if (pair_index < 0 || pair_index >= basis.n_vib || basis.n_fock < 2)
        throw ConfigError("rabi_splitting: pair index outside the basis");

    // Bare states: |1; g, n> and |0; e, n~> with |n~> = S(r)|n> at lambda = 0.
    const Matrix s = squeeze_matrix(table.template_model.squeeze(), basis.n_vib).entries;
    const Matrix& vecs = table.vectors[row];
    const int og = basis.block_offset(1, 0);
    const int oe = basis.block_offset(0, 1);
    const Vector w_g = vecs.row(og + pair_index).array().square();
    const Vector proj_e = s.col(pair_index).transpose() * vecs.middleRows(oe, basis.n_vib);
    const Vector weight = w_g + Vector(proj_e.array().square());

    Eigen::Index first = 0;
    weight.maxCoeff(&first);
    Vector rest = weight;
    rest(first) = -1.0;
    Eigen::Index second = 0;
    rest.maxCoeff(&second);
    const double captured = weight(first) + weight(second);
    if (captured < 1.0)
        throw NumericalError("rabi_splitting: no doublet for pair " + std::to_string(pair_index) +
                             " (captured weight " + std::to_string(captured) + " of 2)");
    const Vector& e = table.energies[row];
    return std::abs(e(first) - e(second));
}

std::vector<std::vector<int>> match_levels(const EigenTable& table, int n_levels) {
    std::vector<std::vector<int>> steps;
    for (std::size_t i = 0; i + 1 < table.energies.size(); ++i) {
        const Vector& a = table.energies[i];
        const Vector& b = table.energies[i + 1];
        const int n = std::min<int>(n_levels, static_cast<int>(std::min(a.size(), b.size())));
        std::vector<int> map(n, -1);
        std::vector<bool> used(b.size(), false);
        const bool vectors = !table.vectors.empty();
        for (int k = 0; k < n; ++k) {
            double best = std::numeric_limits<double>::infinity();
            double best_overlap = -1.0;
            int arg = -1;
            for (int j = std::max(0, k - 8); j < std::min<int>(static_cast<int>(b.size()), k + 9); ++j) {
                if (used[j]) continue;
                const double d = std::abs(a(k) - b(j));
                const double overlap =
                    vectors ? std::abs(table.vectors[i].col(k).dot(table.vectors[i + 1].col(j))) : 0.0;
                const bool tie = std::abs(d - best) <= 1e-12 * std::max(1.0, std::abs(a(k)));
                if (d < best - 1e-12 * std::max(1.0, std::abs(a(k))) || (tie && overlap > best_overlap)) {
                    best = d;
                    best_overlap = overlap;
                    arg = j;
                }
            }
            map[k] = arg;
            if (arg >= 0) used[arg] = true;
        }
        steps.push_back(std::move(map));
    }
    return steps;
}

void write_eigen_table_csv(std::ostream& out, const EigenTable& table, double lo, double hi) {
    std::size_t width = 0;
    std::vector<Vector> rows;
    for (std::size_t i = 0; i < table.values.size(); ++i) {
        rows.push_back(table.window(i, lo, hi));
        width = std::max<std::size_t>(width, static_cast<std::size_t>(rows.back().size()));
    }
    out << table.parameter;
    for (std::size_t k = 0; k < width; ++k) out << ",E" << k << "_eV";
    out << '\n';
    char buf[32];
    for (std::size_t i = 0; i < rows.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%.11e", table.values[i]);
        out << buf;
        for (std::size_t k = 0; k < width; ++k) {
            out << ',';
            if (k < static_cast<std::size_t>(rows[i].size())) {
                std::snprintf(buf, sizeof buf, "%.11e", units::to_ev(rows[i](static_cast<Eigen::Index>(k))));
                out << buf;
            }
        }
        out << '\n';
    }
}

namespace {

// Root of V_e(q) - V_g(q) = shift nearest to `near`, if real.
std::optional<double> difference_root(const HqrModel& m, double shift, double near) {
    const double M = m.mass;
    const double we2 = m.omega_e * m.omega_e;
    const double a = 0.5 * M * (we2 - m.omega_g * m.omega_g);
    const double b = -M * we2 * m.q_e;
    const double c = m.omega_ge + 0.5 * M * we2 * m.q_e * m.q_e - shift;
    if (std::abs(a) < 1e-300) {
        if (b == 0.0) return std::nullopt;
        return -c / b;
    }
    const double disc = b * b - 4.0 * a * c;
    if (disc < 0.0) return std::nullopt;
    const double sq = std::sqrt(disc);
    // Stable pair of roots.
    const double t = -0.5 * (b + std::copysign(sq, b));
    const double r1 = t / a;
    const double r2 = t != 0.0 ? c / t : r1;
    return std::abs(r1 - near) <= std::abs(r2 - near) ? r1 : r2;
}

}  // namespace

DressedCurves dressed_curves(const HqrModel& model, const CavitySpec& cavity, int n_c_max,
                             const std::vector<double>& q_grid) {
    if (n_c_max < 0) throw ConfigError("n_c_max must be non-negative");
    if (q_grid.size() < 2) throw ConfigError("q grid needs at least two points");
    DressedCurves out;
    out.q = q_grid;
    out.n_c_max = n_c_max;
    const double wc = cavity.omega_c;
    for (int nc = 0; nc <= n_c_max; ++nc) {
        std::array<std::vector<double>, 2> pair;
        for (double q : q_grid) {
            pair[0].push_back(model.V_g(q) + nc * wc);
            pair[1].push_back(model.V_e(q) + nc * wc);
        }
        out.curves.push_back(std::move(pair));
    }

    const auto [lo, hi] = std::minmax_element(q_grid.begin(), q_grid.end());
    auto inside = [&](double q) { return q >= *lo && q <= *hi; };

    CrossingGeometry& geo = out.crossings;
    const double q_c = crossing_point(model);
    geo.dc_position = q_c;
    for (int nc = 0; nc <= n_c_max; ++nc) geo.dc.push_back({nc, q_c, model.V_g(q_c) + nc * wc, inside(q_c)});
    if (!inside(q_c)) geo.missing.push_back("DC outside q grid");

    const auto q_r = difference_root(model, wc, q_c);
    const auto q_cr = difference_root(model, -wc, q_c);
    for (int nc = 0; nc < n_c_max; ++nc) {
        if (q_r) {
            geo.lic_r.push_back({nc, *q_r, model.V_e(*q_r) + nc * wc, inside(*q_r)});
            if (!inside(*q_r)) geo.missing.push_back("LIC_R n_c=" + std::to_string(nc) + " outside q grid");
        } else {
            geo.missing.push_back("LIC_R n_c=" + std::to_string(nc) + " does not exist");
        }
        if (q_cr) {
            geo.lic_cr.push_back({nc, *q_cr, model.V_g(*q_cr) + nc * wc, inside(*q_cr)});
            if (!inside(*q_cr)) geo.missing.push_back("LIC_CR n_c=" + std::to_string(nc) + " outside q grid");
        } else {
            geo.missing.push_back("LIC_CR n_c=" + std::to_string(nc) + " does not exist");
        }
    }
    return out;
}

std::vector<DressedState> open_channels(const HqrModel& model, const CavitySpec& cavity, int n_c_max,
                                        double e0) {
    std::vector<DressedState> out;
    for (int nc = 0; nc <= n_c_max; ++nc) {
        const double g_min = nc * cavity.omega_c;
        const double e_min = model.omega_ge + nc * cavity.omega_c;
        if (g_min < e0) out.push_back({nc, 0, g_min});
        if (e_min < e0) out.push_back({nc, 1, e_min});
    }
    return out;
}

}  // namespace hqr
