#include "hqr/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <string>

#include "hqr/error.hpp"
#include "hqr/hermite.hpp"
#include "hqr/spectra.hpp"
#include "hqr/units.hpp"

namespace hqr {

namespace {

double x_huang_rhys(const HqrModel& model) { return huang_rhys(model.q_X, model.mass, model.omega_g); }

double x_squeeze(const HqrModel& model) { return squeeze_factor(model.omega_g, model.ground_frequency()); }

std::string proj_name(int n_c, int s) { return "proj_" + std::to_string(n_c) + (s == 0 ? "_g" : "_e"); }

}  // namespace

double franck_condon_deficit(const HqrModel& model, int n_vib) {
    const Vector c = gaussian_overlaps(n_vib, model.mass, model.omega_g, model.ground_frequency(), model.q_X);
    return std::max(0.0, 1.0 - c.squaredNorm());
}

PolaritonState franck_condon_state(const HqrModel& model, const BasisSpec& basis, double max_deficit) {
    basis.validate();
    const double deficit = franck_condon_deficit(model, basis.n_vib);
    if (deficit > max_deficit) {
        int suggested = basis.n_vib;
        while (suggested < 4096 && franck_condon_deficit(model, suggested) > max_deficit) suggested += 10;
        throw TruncationError("Franck-Condon state misses " + std::to_string(deficit) + " of its norm with n_vib = " +
                                  std::to_string(basis.n_vib),
                              suggested);
    }
    const Matrix d = displacement_matrix(x_huang_rhys(model), basis.n_vib).entries;
    const Matrix s = squeeze_matrix(x_squeeze(model), basis.n_vib).entries;
    const Vector c = d * s.col(0);

    PolaritonState psi;
    psi.basis = basis;
    psi.amplitudes = ComplexVector::Zero(basis.dim());
    psi.amplitudes.segment(basis.block_offset(0, 1), basis.n_vib) = c.cast<std::complex<double>>();
    return psi;
}

PolaritonState coherent_packet(const HqrModel& model, const BasisSpec& basis, int n_c, int s, double q_0) {
    basis.validate();
    if (n_c < 0 || n_c >= basis.n_fock || (s != 0 && s != 1)) throw ConfigError("coherent packet outside the basis");
    const Matrix d = displacement_matrix(huang_rhys(q_0, model.mass, model.omega_g), basis.n_vib).entries;
    PolaritonState psi;
    psi.basis = basis;
    psi.amplitudes = ComplexVector::Zero(basis.dim());
    psi.amplitudes.segment(basis.block_offset(n_c, s), basis.n_vib) = d.col(0).cast<std::complex<double>>();
    return psi;
}

Observables observables(const PolaritonState& state, const OperatorMatrix* h) {
    const BasisSpec& b = state.basis;
    Observables out;
    out.proj.assign(static_cast<std::size_t>(b.n_fock), {0.0, 0.0});
    for (int nc = 0; nc < b.n_fock; ++nc) {
        for (int s = 0; s < 2; ++s) {
            const double p = state.amplitudes.segment(b.block_offset(nc, s), b.n_vib).squaredNorm();
            out.proj[static_cast<std::size_t>(nc)][static_cast<std::size_t>(s)] = p;
            (s == 0 ? out.P_g : out.P_e) += p;
            out.mean_photons += nc * p;
        }
    }
    if (h) {
        const Vector re = state.amplitudes.real();
        const Vector im = state.amplitudes.imag();
        out.energy = re.dot(h->entries * re) + im.dot(h->entries * im);
    } else {
        out.energy = std::numeric_limits<double>::quiet_NaN();
    }
    return out;
}

std::vector<double>& TimeSeries::add(const std::string& name) {
    if (has(name)) throw ConfigError("duplicate channel " + name);
    names.push_back(name);
    columns.emplace_back();
    columns.back().reserve(times.size());
    return columns.back();
}

bool TimeSeries::has(std::string_view name) const {
    return std::find(names.begin(), names.end(), name) != names.end();
}

const std::vector<double>& TimeSeries::channel(std::string_view name) const {
    const auto it = std::find(names.begin(), names.end(), name);
    if (it == names.end()) throw ConfigError("no channel named " + std::string(name));
    return columns[static_cast<std::size_t>(it - names.begin())];
}

void write_time_series_csv(std::ostream& out, const TimeSeries& series) {
    out << "time_fs";
    for (const auto& n : series.names) out << ',' << n;
    out << '\n';
    char buf[32];
    for (std::size_t i = 0; i < series.times.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%.11e", series.times[i]);
        out << buf;
        for (const auto& col : series.columns) {
            std::snprintf(buf, sizeof buf, "%.11e", col.at(i));
            out << ',' << buf;
        }
        out << '\n';
    }
}

std::vector<double> time_grid(double t0, double t1, double dt) {
    if (!(dt > 0.0) || !(t1 >= t0)) throw ConfigError("time grid needs dt > 0 and t1 >= t0");
    const auto steps = static_cast<long>(std::floor((t1 - t0) / dt + 1e-9));
    std::vector<double> t;
    t.reserve(static_cast<std::size_t>(steps + 1));
    for (long k = 0; k <= steps; ++k) t.push_back(t0 + static_cast<double>(k) * dt);
    return t;
}

SpectralPropagator::SpectralPropagator(const OperatorMatrix& h) : h_(h), eig_(diagonalize(h)) {}

PolaritonState SpectralPropagator::evolve(const PolaritonState& psi0, double t_fs) const {
    if (psi0.amplitudes.size() != h_.entries.rows()) throw ConfigError("state and Hamiltonian dimensions differ");
    const Matrix& w = eig_.vectors;
    const Vector cr = w.transpose() * psi0.amplitudes.real();
    const Vector ci = w.transpose() * psi0.amplitudes.imag();
    const double t = units::fs(t_fs - psi0.time_fs);
    Vector ar(cr.size());
    Vector ai(cr.size());
    for (Eigen::Index k = 0; k < cr.size(); ++k) {
        const double phase = eig_.values(k) * t;
        const double c = std::cos(phase);
        const double s = std::sin(phase);
        // (cr + i ci)(c - i s)
        ar(k) = cr(k) * c + ci(k) * s;
        ai(k) = ci(k) * c - cr(k) * s;
    }
    PolaritonState out;
    out.basis = psi0.basis;
    out.time_fs = t_fs;
    out.amplitudes.resize(cr.size());
    out.amplitudes.real() = w * ar;
    out.amplitudes.imag() = w * ai;
    return out;
}

PropagationResult propagate(const SpectralPropagator& propagator, const PolaritonState& psi0,
                            const std::vector<double>& times_fs, const PropagationOptions& options) {
    const BasisSpec& b = psi0.basis;
    if (std::abs(psi0.norm() - 1.0) > 1e-9) throw NumericalError("initial state is not normalized");
    if (options.position && options.position->rows() != b.n_vib)
        throw ConfigError("position matrix does not match n_vib");

    PropagationResult result;
    TimeSeries& ts = result.series;
    ts.times = times_fs;
    const std::size_t n = times_fs.size();
    std::vector<std::vector<double>*> proj;
    auto& pg = ts.add("P_g");
    auto& pe = ts.add("P_e");
    for (int nc = 0; nc < b.n_fock; ++nc)
        for (int s = 0; s < 2; ++s) proj.push_back(&ts.add(proj_name(nc, s)));
    auto& photons = ts.add("mean_photons");
    auto& excitations = ts.add("excitations");
    auto& energy = ts.add("energy_eV");
    auto& norm = ts.add("norm");
    std::vector<double>* q_mean = nullptr;
    std::vector<double>* q_g = nullptr;
    std::vector<double>* q_e = nullptr;
    if (options.position) {
        q_mean = &ts.add("q_mean");
        q_g = &ts.add("q_g");
        q_e = &ts.add("q_e");
    }

    for (std::size_t i = 0; i < n; ++i) {
        PolaritonState psi = propagator.evolve(psi0, times_fs[i]);
        const Observables o = observables(psi, &propagator.hamiltonian());
        pg.push_back(o.P_g);
        pe.push_back(o.P_e);
        for (int nc = 0; nc < b.n_fock; ++nc)
            for (int s = 0; s < 2; ++s)
                proj[static_cast<std::size_t>(nc * 2 + s)]->push_back(o.proj[static_cast<std::size_t>(nc)][s]);
        photons.push_back(o.mean_photons);
        excitations.push_back(o.mean_photons + o.P_e);
        energy.push_back(units::to_ev(o.energy));
        norm.push_back(psi.norm());
        if (options.position) {
            const Matrix& q = *options.position;
            double acc[2] = {0.0, 0.0};
            for (int nc = 0; nc < b.n_fock; ++nc) {
                for (int s = 0; s < 2; ++s) {
                    const auto seg = psi.amplitudes.segment(b.block_offset(nc, s), b.n_vib);
                    const Vector re = seg.real();
                    const Vector im = seg.imag();
                    acc[s] += re.dot(q * re) + im.dot(q * im);
                }
            }
            q_mean->push_back(acc[0] + acc[1]);
            q_g->push_back(o.P_g > 1e-14 ? acc[0] / o.P_g : 0.0);
            q_e->push_back(o.P_e > 1e-14 ? acc[1] / o.P_e : 0.0);
        }
        if (options.store_states) result.states.push_back(std::move(psi));
    }
    return result;
}

PropagationResult propagate(const OperatorMatrix& h, const PolaritonState& psi0, const std::vector<double>& times_fs,
                            const PropagationOptions& options) {
    return propagate(SpectralPropagator(h), psi0, times_fs, options);
}

PeriodEstimate wavepacket_period(const TimeSeries& series, std::string_view channel, double min_strength) {
    const auto& y = series.channel(channel);
    const std::size_t n = y.size();
    if (n < 8) return {};
    const double dt = series.times[1] - series.times[0];
    double mean = 0.0;
    for (double v : y) mean += v;
    mean /= static_cast<double>(n);
    double var = 0.0;
    for (double v : y) var += (v - mean) * (v - mean);
    var /= static_cast<double>(n);
    const double scale = std::max(1.0, std::abs(mean));
    if (var <= 1e-20 * scale * scale) return {};

    const std::size_t max_lag = n / 2;
    std::vector<double> ac(max_lag + 1);
    for (std::size_t k = 0; k <= max_lag; ++k) {
        double s = 0.0;
        for (std::size_t i = 0; i + k < n; ++i) s += (y[i] - mean) * (y[i + k] - mean);
        ac[k] = s / static_cast<double>(n - k) / var;
    }
    std::size_t k = 1;
    while (k <= max_lag && ac[k] > 0.0) ++k;
    if (k > max_lag) return {};
    // First local maximum strong enough to count; later multiples of the
    // period can score higher only through the shrinking overlap.
    std::size_t best = 0;
    for (std::size_t j = k + 1; j < max_lag; ++j)
        if (ac[j] >= ac[j - 1] && ac[j] >= ac[j + 1] && ac[j] >= min_strength) {
            best = j;
            break;
        }
    if (best == 0) return {};
    // Parabolic refinement around the discrete maximum.
    const double a = ac[best - 1];
    const double c = ac[best];
    const double d = ac[best + 1];
    const double denom = a - 2.0 * c + d;
    const double shift = denom != 0.0 ? 0.5 * (a - d) / denom : 0.0;
    return {(static_cast<double>(best) + shift) * dt, c};
}

namespace {

std::size_t window_argmax(const TimeSeries& series, double t0, double t1) {
    const auto& n = series.channel("mean_photons");
    std::size_t best = series.size();
    for (std::size_t i = 0; i < series.size(); ++i) {
        const double t = series.times[i];
        if (t < t0 || t > t1) continue;
        if (best == series.size() || n[i] > n[best]) best = i;
    }
    if (best == series.size()) throw ConfigError("no samples inside the requested time window");
    return best;
}

}  // namespace

double max_mean_photons(const TimeSeries& series, double t0, double t1) {
    return series.channel("mean_photons")[window_argmax(series, t0, t1)];
}

double argmax_mean_photons(const TimeSeries& series, double t0, double t1) {
    return series.times[window_argmax(series, t0, t1)];
}

}  // namespace hqr
