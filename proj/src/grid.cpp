#include "hqr/grid.hpp"

#include <fftw3.h>
#include <gsl/gsl_errno.h>
#include <gsl/gsl_spline.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <mutex>
#include <numbers>
#include <ostream>
#include <sstream>
#include <string>

#include "hqr/error.hpp"
#include "hqr/hermite.hpp"
#include "hqr/units.hpp"

namespace hqr {

using cplx = std::complex<double>;

std::vector<double> GridSpec::q_points() const {
    std::vector<double> q(static_cast<std::size_t>(n_q));
    for (int i = 0; i < n_q; ++i) q[static_cast<std::size_t>(i)] = q_min + i * dq();
    return q;
}

std::vector<double> GridSpec::x_points() const {
    std::vector<double> x(static_cast<std::size_t>(n_x));
    for (int i = 0; i < n_x; ++i) x[static_cast<std::size_t>(i)] = x_min + i * dx();
    return x;
}

void GridSpec::validate() const {
    if (n_q < 8 || n_x < 8) throw ConfigError("grid needs at least 8 points per axis");
    if (!(q_max > q_min) || !(x_max > x_min)) throw ConfigError("grid ranges must be increasing");
    if (!(dt_fs > 0.0) || !std::isfinite(dt_fs)) throw ConfigError("grid time step must be positive");
}

GridSpec reference_grid() { return GridSpec{}; }

// ---------------------------------------------------------------- curves

struct TabulatedCurve::Spline {
    gsl_spline* spline = nullptr;
    ~Spline() { gsl_spline_free(spline); }
};

TabulatedCurve::TabulatedCurve(std::vector<double> q, std::vector<double> values)
    : q_(std::move(q)), values_(std::move(values)) {
    static std::once_flag quiet;
    std::call_once(quiet, [] { gsl_set_error_handler_off(); });
    if (q_.size() != values_.size()) throw ConfigError("curve has mismatched q and value counts");
    if (q_.size() < 3) throw ConfigError("curve needs at least 3 samples");
    for (std::size_t i = 0; i < q_.size(); ++i) {
        if (!std::isfinite(q_[i]) || !std::isfinite(values_[i])) throw ConfigError("curve sample is not finite");
        if (i > 0 && !(q_[i] > q_[i - 1]))
            throw ConfigError("curve q samples are not strictly increasing at q = " + std::to_string(q_[i]));
    }
    auto s = std::make_shared<Spline>();
    s->spline = gsl_spline_alloc(gsl_interp_cspline, q_.size());
    if (!s->spline || gsl_spline_init(s->spline, q_.data(), values_.data(), q_.size()) != GSL_SUCCESS)
        throw NumericalError("cubic spline setup failed");
    spline_ = std::move(s);
}

double TabulatedCurve::operator()(double q) const {
    if (q < q_.front() || q > q_.back())
        throw ConfigError("curve evaluated at q = " + std::to_string(q) + " outside its samples");
    return gsl_spline_eval(spline_->spline, q, nullptr);
}

namespace {

const char* const kEnergyCurves[] = {"V_X", "V_g", "V_e", "V_D"};
const char* const kDipoleCurves[] = {"d_gg", "d_ee", "d_ge"};

bool is_energy_curve(const std::string& n) {
    return std::any_of(std::begin(kEnergyCurves), std::end(kEnergyCurves), [&](const char* c) { return n == c; });
}

bool is_dipole_curve(const std::string& n) {
    return std::any_of(std::begin(kDipoleCurves), std::end(kDipoleCurves), [&](const char* c) { return n == c; });
}

std::string at_line(int line) { return "line " + std::to_string(line) + ": "; }

}  // namespace

CurveSet load_curves(std::istream& in) {
    std::string text;
    int line_no = 0;
    std::vector<std::string> names;
    std::vector<double> scale;
    std::vector<std::vector<double>> cols;
    while (std::getline(in, text)) {
        ++line_no;
        if (const auto hash = text.find('#'); hash != std::string::npos) text.erase(hash);
        std::istringstream row(text);
        std::vector<std::string> tokens;
        for (std::string t; row >> t;) tokens.push_back(t);
        if (tokens.empty()) continue;

        if (names.empty()) {
            for (const auto& tok : tokens) {
                const auto colon = tok.find(':');
                if (colon == std::string::npos)
                    throw ConfigError(at_line(line_no) + "column '" + tok + "' has no unit tag (name:unit)");
                const std::string name = tok.substr(0, colon);
                const std::string unit = tok.substr(colon + 1);
                if (std::find(names.begin(), names.end(), name) != names.end())
                    throw ConfigError(at_line(line_no) + "duplicate column " + name);
                if (names.empty()) {
                    if (name != "q") throw ConfigError(at_line(line_no) + "first column must be q");
                    Unit u;
                    try {
                        u = parse_unit(unit);
                    } catch (const ConfigError& e) {
                        throw ConfigError(at_line(line_no) + e.what());
                    }
                    if (dimension_of(u) != Dimension::length)
                        throw ConfigError(at_line(line_no) + "q must carry a length unit");
                    scale.push_back(atomic_scale(u));
                } else if (is_energy_curve(name)) {
                    Unit u;
                    try {
                        u = parse_unit(unit);
                    } catch (const ConfigError& e) {
                        throw ConfigError(at_line(line_no) + e.what());
                    }
                    if (dimension_of(u) != Dimension::energy)
                        throw ConfigError(at_line(line_no) + name + " must carry an energy unit");
                    scale.push_back(atomic_scale(u));
                } else if (is_dipole_curve(name)) {
                    if (unit != "au")
                        throw ConfigError(at_line(line_no) + name + " must be given in au (e bohr)");
                    scale.push_back(1.0);
                } else {
                    throw ConfigError(at_line(line_no) + "unknown curve " + name);
                }
                names.push_back(name);
            }
            if (names.size() < 2) throw ConfigError(at_line(line_no) + "no curve columns after q");
            cols.resize(names.size());
            continue;
        }
        if (tokens.size() != names.size())
            throw ConfigError(at_line(line_no) + "expected " + std::to_string(names.size()) + " columns, found " +
                              std::to_string(tokens.size()));
        for (std::size_t k = 0; k < tokens.size(); ++k) {
            // strtod rather than stod: subnormal values are valid samples.
            char* end = nullptr;
            const double v = std::strtod(tokens[k].c_str(), &end);
            if (end != tokens[k].c_str() + tokens[k].size() || !std::isfinite(v))
                throw ConfigError(at_line(line_no) + "cannot read number '" + tokens[k] + "'");
            cols[k].push_back(v * scale[k]);
        }
    }
    if (names.empty()) throw ConfigError("curve file has no header");
    CurveSet out;
    for (std::size_t k = 1; k < names.size(); ++k) {
        try {
            out.emplace(names[k], TabulatedCurve(cols[0], cols[k]));
        } catch (const ConfigError& e) {
            throw ConfigError("curve " + names[k] + ": " + e.what());
        }
    }
    return out;
}

CurveSet load_curves_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open curve file " + path);
    try {
        return load_curves(in);
    } catch (const ConfigError& e) {
        throw ConfigError(path + ": " + e.what());
    }
}

void write_curves(std::ostream& out, const CurveSet& curves) {
    if (curves.empty()) throw ConfigError("no curves to write");
    const auto& q = curves.begin()->second.q();
    out << "q:bohr";
    for (const auto& [name, c] : curves) out << ' ' << name << (is_dipole_curve(name) ? ":au" : ":eV");
    out << '\n';
    char buf[32];
    for (std::size_t i = 0; i < q.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%.17g", q[i]);
        out << buf;
        for (const auto& [name, c] : curves) {
            const double v = c(q[i]);
            std::snprintf(buf, sizeof buf, "%.17g", is_dipole_curve(name) ? v : units::to_ev(v));
            out << ' ' << buf;
        }
        out << '\n';
    }
}

CurveSet curves_from_model(const HqrModel& model, const std::vector<double>& q) {
    const GaussianProfile dc = model.dc_profile();
    const GaussianProfile dip = model.dipole_profile();
    std::vector<double> vx, vg, ve, vd, dge;
    for (double x : q) {
        vx.push_back(model.V_X(x));
        vg.push_back(model.V_g(x));
        ve.push_back(model.V_e(x));
        vd.push_back(dc(x));
        dge.push_back(dip(x));
    }
    CurveSet out;
    out.emplace("V_X", TabulatedCurve(q, vx));
    out.emplace("V_g", TabulatedCurve(q, vg));
    out.emplace("V_e", TabulatedCurve(q, ve));
    out.emplace("V_D", TabulatedCurve(q, vd));
    out.emplace("d_ge", TabulatedCurve(q, dge));
    return out;
}

// ---------------------------------------------------------------- tables

GridTables map_model_to_grid(const HqrModel& model, const GridSpec& grid,
                             const std::optional<std::pair<GaussianProfile, GaussianProfile>>& diagonal_dipoles) {
    model.validate();
    grid.validate();
    GridTables t;
    t.q = grid.q_points();
    t.mass = model.mass;
    const GaussianProfile dc = model.dc_profile();
    const GaussianProfile dip = model.dipole_profile();
    std::vector<double> vx;
    for (double q : t.q) {
        t.V_g.push_back(model.V_g(q));
        t.V_e.push_back(model.V_e(q));
        t.V_D.push_back(dc(q));
        t.d_ge.push_back(dip(q));
        vx.push_back(model.V_X(q));
    }
    t.V_X = std::move(vx);
    if (diagonal_dipoles) {
        std::vector<double> gg, ee;
        for (double q : t.q) {
            gg.push_back(diagonal_dipoles->first(q));
            ee.push_back(diagonal_dipoles->second(q));
        }
        t.d_gg = std::move(gg);
        t.d_ee = std::move(ee);
    }
    return t;
}

GridTables tables_from_curves(const CurveSet& curves, const GridSpec& grid, double mass) {
    grid.validate();
    if (!(mass > 0.0)) throw ConfigError("mass must be positive");
    for (const char* need : {"V_g", "V_e"})
        if (!curves.count(need)) throw ConfigError(std::string("curve set lacks ") + need);
    GridTables t;
    t.q = grid.q_points();
    t.mass = mass;
    auto sample = [&](const std::string& name) {
        const TabulatedCurve& c = curves.at(name);
        if (!c.covers(grid.q_min, grid.q_max)) throw ConfigError("curve " + name + " does not cover the q grid");
        std::vector<double> v;
        v.reserve(t.q.size());
        for (double q : t.q) v.push_back(c(q));
        return v;
    };
    const std::vector<double> zero(t.q.size(), 0.0);
    t.V_g = sample("V_g");
    t.V_e = sample("V_e");
    t.V_D = curves.count("V_D") ? sample("V_D") : zero;
    t.d_ge = curves.count("d_ge") ? sample("d_ge") : zero;
    if (curves.count("d_gg") || curves.count("d_ee")) {
        t.d_gg = curves.count("d_gg") ? sample("d_gg") : zero;
        t.d_ee = curves.count("d_ee") ? sample("d_ee") : zero;
    }
    if (curves.count("V_X")) t.V_X = sample("V_X");
    return t;
}

// ---------------------------------------------------------------- wavefunction

namespace {

// Trapezoid weight along one axis.
double edge_weight(int i, int n) { return (i == 0 || i == n - 1) ? 0.5 : 1.0; }

double surface_integral(const GridSpec& g, const std::vector<cplx>& f) {
    double s = 0.0;
    for (int iq = 0; iq < g.n_q; ++iq) {
        const double wq = edge_weight(iq, g.n_q);
        double row = 0.0;
        for (int ix = 0; ix < g.n_x; ++ix)
            row += edge_weight(ix, g.n_x) * std::norm(f[static_cast<std::size_t>(iq) * g.n_x + ix]);
        s += wq * row;
    }
    return s * g.dq() * g.dx();
}

std::vector<double> wave_numbers(int n, double d) {
    std::vector<double> k(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j) {
        const int m = j <= (n - 1) / 2 ? j : j - n;
        k[static_cast<std::size_t>(j)] = 2.0 * std::numbers::pi * m / (n * d);
    }
    return k;
}

std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}

// In-place 2D transforms on a private aligned buffer.
class Fft2d {
public:
    Fft2d(int n_q, int n_x) : size_(static_cast<std::size_t>(n_q) * n_x) {
        buf_ = fftw_alloc_complex(size_);
        if (!buf_) throw NumericalError("FFT buffer allocation failed");
        std::lock_guard lock(planner_mutex());
        fwd_ = fftw_plan_dft_2d(n_q, n_x, buf_, buf_, FFTW_FORWARD, FFTW_ESTIMATE);
        bwd_ = fftw_plan_dft_2d(n_q, n_x, buf_, buf_, FFTW_BACKWARD, FFTW_ESTIMATE);
        if (!fwd_ || !bwd_) throw NumericalError("FFT plan creation failed");
    }
    ~Fft2d() {
        std::lock_guard lock(planner_mutex());
        fftw_destroy_plan(fwd_);
        fftw_destroy_plan(bwd_);
        fftw_free(buf_);
    }
    Fft2d(const Fft2d&) = delete;
    Fft2d& operator=(const Fft2d&) = delete;

    cplx* data() { return reinterpret_cast<cplx*>(buf_); }
    void forward() { fftw_execute(fwd_); }
    void backward() { fftw_execute(bwd_); }

private:
    std::size_t size_;
    fftw_complex* buf_ = nullptr;
    fftw_plan fwd_ = nullptr;
    fftw_plan bwd_ = nullptr;
};

// Multiplies f in momentum space by mult(k_q, k_x) / N.
template <typename Mult>
void apply_in_momentum(Fft2d& fft, const GridSpec& g, const std::vector<double>& kq, const std::vector<double>& kx,
                       std::vector<cplx>& f, Mult&& mult) {
    cplx* b = fft.data();
    std::copy(f.begin(), f.end(), b);
    fft.forward();
    const double inv = 1.0 / static_cast<double>(f.size());
    for (int iq = 0; iq < g.n_q; ++iq)
        for (int ix = 0; ix < g.n_x; ++ix) {
            const std::size_t k = static_cast<std::size_t>(iq) * g.n_x + ix;
            b[k] *= mult(kq[static_cast<std::size_t>(iq)], kx[static_cast<std::size_t>(ix)]) * inv;
        }
    fft.backward();
    std::copy(b, b + f.size(), f.begin());
}

struct LocalTerms {
    double a;  // g diagonal
    double b;  // e diagonal
    double c;  // g-e coupling
};

// Per-point potential matrix including the photon harmonic term.
LocalTerms local_terms(const GridTables& t, const CavitySpec& cav, int iq, double x) {
    const std::size_t i = static_cast<std::size_t>(iq);
    const double wc = cav.omega_c;
    const double photon = 0.5 * wc * x * x - 0.5 * wc;
    const double field = cav.chi * std::sqrt(0.5 * wc) * std::numbers::sqrt2 * x;  // chi sqrt(wc/2) (a^+ + a)
    LocalTerms l{t.V_g[i] + photon, t.V_e[i] + photon, t.V_D[i] + field * t.d_ge[i]};
    if (t.d_gg) l.a += field * (*t.d_gg)[i];
    if (t.d_ee) l.b += field * (*t.d_ee)[i];
    return l;
}

void check_shapes(const GridWavefunction& wf, const GridTables& t) {
    const std::size_t n = static_cast<std::size_t>(wf.grid.n_q) * wf.grid.n_x;
    if (wf.g.size() != n || wf.e.size() != n) throw ConfigError("wavefunction does not match its grid");
    if (t.q.size() != static_cast<std::size_t>(wf.grid.n_q)) throw ConfigError("tables do not match the q grid");
}

}  // namespace

double GridWavefunction::population(int s) const { return surface_integral(grid, s == 0 ? g : e); }

std::vector<double> ground_state_1d(const std::vector<double>& potential, double dq, double mass) {
    const auto n = static_cast<Eigen::Index>(potential.size());
    Matrix h(n, n);
    const double t0 = 1.0 / (2.0 * mass * dq * dq);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j) {
            if (i == j) {
                h(i, j) = t0 * std::numbers::pi * std::numbers::pi / 3.0 + potential[static_cast<std::size_t>(i)];
            } else {
                const double d = static_cast<double>(i - j);
                h(i, j) = t0 * ((i - j) % 2 == 0 ? 2.0 : -2.0) / (d * d);
            }
        }
    const EigenSystem es = eigh(h);
    Vector v = es.vectors.col(0);
    Eigen::Index peak = 0;
    v.cwiseAbs().maxCoeff(&peak);
    if (v(peak) < 0.0) v = -v;
    v /= std::sqrt(v.squaredNorm() * dq);
    return {v.data(), v.data() + v.size()};
}

GridWavefunction franck_condon_grid(const GridTables& tables, const GridSpec& grid) {
    grid.validate();
    if (!tables.V_X) throw ConfigError("Franck-Condon state needs a V_X curve");
    const std::vector<double> chi_q = ground_state_1d(*tables.V_X, grid.dq(), tables.mass);
    const Matrix phi = hermite_functions(1, grid.x_points());
    GridWavefunction wf;
    wf.grid = grid;
    const std::size_t n = static_cast<std::size_t>(grid.n_q) * grid.n_x;
    wf.g.assign(n, cplx{});
    wf.e.assign(n, cplx{});
    for (int iq = 0; iq < grid.n_q; ++iq)
        for (int ix = 0; ix < grid.n_x; ++ix) wf.e[wf.at(iq, ix)] = chi_q[static_cast<std::size_t>(iq)] * phi(0, ix);
    const double nrm = wf.norm();
    for (auto& v : wf.e) v /= nrm;
    return wf;
}

namespace {

GridWavefunction apply_h(Fft2d& fft, const GridWavefunction& wf, const GridTables& t, const CavitySpec& cav) {
    check_shapes(wf, t);
    const GridSpec& g = wf.grid;
    const auto kq = wave_numbers(g.n_q, g.dq());
    const auto kx = wave_numbers(g.n_x, g.dx());
    const double M = t.mass;
    const double wc = cav.omega_c;
    auto kinetic = [&](double a, double b) { return cplx(0.5 * a * a / M + 0.5 * wc * b * b, 0.0); };
    GridWavefunction out = wf;
    apply_in_momentum(fft, g, kq, kx, out.g, kinetic);
    apply_in_momentum(fft, g, kq, kx, out.e, kinetic);
    const auto x = g.x_points();
    for (int iq = 0; iq < g.n_q; ++iq)
        for (int ix = 0; ix < g.n_x; ++ix) {
            const LocalTerms l = local_terms(t, cav, iq, x[static_cast<std::size_t>(ix)]);
            const std::size_t k = wf.at(iq, ix);
            out.g[k] += l.a * wf.g[k] + l.c * wf.e[k];
            out.e[k] += l.c * wf.g[k] + l.b * wf.e[k];
        }
    return out;
}

double inner_real(const GridWavefunction& a, const GridWavefunction& b) {
    const GridSpec& g = a.grid;
    double s = 0.0;
    for (int iq = 0; iq < g.n_q; ++iq)
        for (int ix = 0; ix < g.n_x; ++ix) {
            const std::size_t k = a.at(iq, ix);
            const double w = edge_weight(iq, g.n_q) * edge_weight(ix, g.n_x);
            s += w * (std::conj(a.g[k]) * b.g[k] + std::conj(a.e[k]) * b.e[k]).real();
        }
    return s * g.dq() * g.dx();
}

double mean_photons_with(Fft2d& fft, const GridWavefunction& wf) {
    const GridSpec& g = wf.grid;
    const auto x = g.x_points();
    const auto kx = wave_numbers(g.n_x, g.dx());
    double x2 = 0.0;
    double p2 = 0.0;
    for (const auto* f : {&wf.g, &wf.e}) {
        for (int iq = 0; iq < g.n_q; ++iq)
            for (int ix = 0; ix < g.n_x; ++ix)
                x2 += x[static_cast<std::size_t>(ix)] * x[static_cast<std::size_t>(ix)] *
                      std::norm((*f)[wf.at(iq, ix)]);
        cplx* b = fft.data();
        std::copy(f->begin(), f->end(), b);
        fft.forward();
        for (int iq = 0; iq < g.n_q; ++iq)
            for (int ix = 0; ix < g.n_x; ++ix)
                p2 += kx[static_cast<std::size_t>(ix)] * kx[static_cast<std::size_t>(ix)] *
                      std::norm(b[static_cast<std::size_t>(iq) * g.n_x + ix]);
    }
    const double cell = g.dq() * g.dx();
    x2 *= cell;
    p2 *= cell / static_cast<double>(wf.g.size());
    const double norm2 = (wf.population(0) + wf.population(1));
    return 0.5 * (x2 + p2) - 0.5 * norm2;
}

}  // namespace

GridWavefunction grid_hamiltonian_apply(const GridWavefunction& wf, const GridTables& tables,
                                        const CavitySpec& cavity) {
    Fft2d fft(wf.grid.n_q, wf.grid.n_x);
    return apply_h(fft, wf, tables, cavity);
}

double grid_energy(const GridWavefunction& wf, const GridTables& tables, const CavitySpec& cavity) {
    return inner_real(wf, grid_hamiltonian_apply(wf, tables, cavity));
}

double photon_projection_grid(const GridWavefunction& wf, int n_c, int s) {
    if (n_c < 0) throw ConfigError("photon number must be non-negative");
    const GridSpec& g = wf.grid;
    const Matrix phi = hermite_functions(n_c + 1, g.x_points());
    const auto& f = s == 0 ? wf.g : wf.e;
    double total = 0.0;
    for (int iq = 0; iq < g.n_q; ++iq) {
        cplx amp{};
        for (int ix = 0; ix < g.n_x; ++ix) amp += edge_weight(ix, g.n_x) * phi(n_c, ix) * f[wf.at(iq, ix)];
        total += edge_weight(iq, g.n_q) * std::norm(amp * g.dx());
    }
    return total * g.dq();
}

double grid_mean_photons(const GridWavefunction& wf) {
    Fft2d fft(wf.grid.n_q, wf.grid.n_x);
    return mean_photons_with(fft, wf);
}

double grid_q_expectation(const GridWavefunction& wf, int s) {
    const GridSpec& g = wf.grid;
    const auto q = g.q_points();
    const auto& f = s == 0 ? wf.g : wf.e;
    double num = 0.0;
    double den = 0.0;
    for (int iq = 0; iq < g.n_q; ++iq) {
        double row = 0.0;
        for (int ix = 0; ix < g.n_x; ++ix) row += edge_weight(ix, g.n_x) * std::norm(f[wf.at(iq, ix)]);
        row *= edge_weight(iq, g.n_q);
        num += q[static_cast<std::size_t>(iq)] * row;
        den += row;
    }
    return den > 0.0 ? num / den : 0.0;
}

std::vector<double> x_marginal(const GridWavefunction& wf, int s, int refine) {
    if (refine < 1) throw ConfigError("x_marginal refinement must be at least 1");
    const GridSpec& g = wf.grid;
    const auto& f = s == 0 ? wf.g : wf.e;
    const int n = g.n_x;
    const std::size_t out_size = static_cast<std::size_t>(n - 1) * refine + 1;
    std::vector<double> rho(out_size, 0.0);
    if (refine == 1) {
        for (int iq = 0; iq < g.n_q; ++iq)
            for (int ix = 0; ix < n; ++ix)
                rho[static_cast<std::size_t>(ix)] += edge_weight(iq, g.n_q) * std::norm(f[wf.at(iq, ix)]) * g.dq();
        return rho;
    }

    // Trigonometric interpolation of each q row: zero-pad the spectrum.
    const int big = n * refine;
    fftw_complex* in = fftw_alloc_complex(static_cast<std::size_t>(n));
    fftw_complex* out = fftw_alloc_complex(static_cast<std::size_t>(big));
    if (!in || !out) {
        fftw_free(in);
        fftw_free(out);
        throw NumericalError("FFT buffer allocation failed");
    }
    fftw_plan fwd = nullptr;
    fftw_plan bwd = nullptr;
    {
        std::lock_guard lock(planner_mutex());
        fwd = fftw_plan_dft_1d(n, in, in, FFTW_FORWARD, FFTW_ESTIMATE);
        bwd = fftw_plan_dft_1d(big, out, out, FFTW_BACKWARD, FFTW_ESTIMATE);
    }
    auto* a = reinterpret_cast<cplx*>(in);
    auto* b = reinterpret_cast<cplx*>(out);
    const int half = n / 2;
    for (int iq = 0; iq < g.n_q; ++iq) {
        for (int ix = 0; ix < n; ++ix) a[ix] = f[wf.at(iq, ix)];
        fftw_execute(fwd);
        std::fill(b, b + big, cplx{});
        for (int k = 0; k <= (n - 1) / 2; ++k) b[k] = a[k];
        for (int k = 1; k <= (n - 1) / 2; ++k) b[big - k] = a[n - k];
        if (n % 2 == 0) {
            b[half] = 0.5 * a[half];
            b[big - half] = 0.5 * a[half];
        }
        fftw_execute(bwd);
        const double w = edge_weight(iq, g.n_q) * g.dq() / (static_cast<double>(n) * n);
        for (std::size_t j = 0; j < out_size; ++j) rho[j] += w * std::norm(b[j]);
    }
    {
        std::lock_guard lock(planner_mutex());
        fftw_destroy_plan(fwd);
        fftw_destroy_plan(bwd);
    }
    fftw_free(in);
    fftw_free(out);
    return rho;
}

int count_nodes(const std::vector<double>& rho, double floor, double depth) {
    if (rho.size() < 3) return 0;
    const double top = *std::max_element(rho.begin(), rho.end());
    if (!(top > 0.0)) return 0;
    std::vector<std::size_t> maxima;
    for (std::size_t i = 1; i + 1 < rho.size(); ++i)
        if (rho[i] >= rho[i - 1] && rho[i] > rho[i + 1] && rho[i] > floor * top) maxima.push_back(i);
    int nodes = 0;
    for (std::size_t k = 0; k + 1 < maxima.size(); ++k) {
        const std::size_t a = maxima[k];
        const std::size_t b = maxima[k + 1];
        const double low = *std::min_element(rho.begin() + static_cast<std::ptrdiff_t>(a),
                                             rho.begin() + static_cast<std::ptrdiff_t>(b) + 1);
        if (low < depth * std::min(rho[a], rho[b])) ++nodes;
    }
    return nodes;
}

void write_snapshot(std::ostream& out, const DensitySnapshot& snap, int s) {
    const GridSpec& g = snap.grid;
    char buf[32];
    out << "# n_q " << g.n_q << " n_x " << g.n_x;
    std::snprintf(buf, sizeof buf, "%.11e", g.q_min);
    out << " q_min " << buf;
    std::snprintf(buf, sizeof buf, "%.11e", g.q_max);
    out << " q_max " << buf;
    std::snprintf(buf, sizeof buf, "%.11e", g.x_min);
    out << " x_min " << buf;
    std::snprintf(buf, sizeof buf, "%.11e", g.x_max);
    out << " x_max " << buf;
    std::snprintf(buf, sizeof buf, "%.11e", snap.time_fs);
    out << " time_fs " << buf << " surface " << (s == 0 ? 'g' : 'e') << '\n';
    const auto& d = s == 0 ? snap.density_g : snap.density_e;
    for (int iq = 0; iq < g.n_q; ++iq) {
        for (int ix = 0; ix < g.n_x; ++ix) {
            std::snprintf(buf, sizeof buf, "%.11e", d[static_cast<std::size_t>(iq) * g.n_x + ix]);
            out << (ix ? " " : "") << buf;
        }
        out << '\n';
    }
}

GridRunResult grid_propagate(const GridWavefunction& wf0, const GridTables& tables, const CavitySpec& cavity,
                             const GridRunOptions& options) {
    check_shapes(wf0, tables);
    cavity.validate();
    const GridSpec& g = wf0.grid;
    g.validate();
    if (options.n_photon_max < 0) throw ConfigError("n_photon_max must be non-negative");

    const double dt_fs = g.dt_fs;
    const auto steps = static_cast<long>(std::llround(options.t_final_fs / dt_fs));
    const auto every = static_cast<long>(std::llround(options.sample_fs / dt_fs));
    if (every < 1 || std::abs(every * dt_fs - options.sample_fs) > 1e-9 * options.sample_fs)
        throw ConfigError("sample interval must be a whole number of time steps");
    if (std::abs(steps * dt_fs - options.t_final_fs) > 1e-9 * std::max(1.0, options.t_final_fs))
        throw ConfigError("final time must be a whole number of time steps");

    const std::size_t n = wf0.g.size();
    const auto q = g.q_points();
    const auto x = g.x_points();
    const double dt = units::fs(dt_fs);
    const double tau = 0.5 * dt;

    // Half-step propagators: exp(-i H_loc tau) for the 2 x 2 local matrix,
    // e^{-i m tau} [cos(w tau) - i sin(w tau)/w (H - m)].
    std::vector<cplx> u11(n), u22(n), u12(n);
    for (int iq = 0; iq < g.n_q; ++iq) {
        double damp = 1.0;
        if (options.cap && options.cap->strength > 0.0) {
            const double w = options.cap->width;
            const double qi = q[static_cast<std::size_t>(iq)];
            const double d = std::max({0.0, g.q_min + w - qi, qi - (g.q_max - w)});
            damp = std::exp(-options.cap->strength * (d / w) * (d / w) * tau);
        }
        for (int ix = 0; ix < g.n_x; ++ix) {
            const LocalTerms l = local_terms(tables, cavity, iq, x[static_cast<std::size_t>(ix)]);
            const double m = 0.5 * (l.a + l.b);
            const double d = 0.5 * (l.a - l.b);
            const double w = std::hypot(d, l.c);
            const double cw = std::cos(w * tau);
            const double sw = w > 0.0 ? std::sin(w * tau) / w : tau;
            const cplx ph = std::polar(damp, -m * tau);
            const std::size_t k = static_cast<std::size_t>(iq) * g.n_x + ix;
            u11[k] = ph * cplx(cw, -sw * d);
            u22[k] = ph * cplx(cw, sw * d);
            u12[k] = ph * cplx(0.0, -sw * l.c);
        }
    }
    const auto kq = wave_numbers(g.n_q, g.dq());
    const auto kx = wave_numbers(g.n_x, g.dx());
    const double M = tables.mass;
    const double wc = cavity.omega_c;
    std::vector<cplx> kin(n);
    const double inv = 1.0 / static_cast<double>(n);
    for (int iq = 0; iq < g.n_q; ++iq)
        for (int ix = 0; ix < g.n_x; ++ix) {
            const double a = kq[static_cast<std::size_t>(iq)];
            const double b = kx[static_cast<std::size_t>(ix)];
            kin[static_cast<std::size_t>(iq) * g.n_x + ix] = std::polar(inv, -dt * (0.5 * a * a / M + 0.5 * wc * b * b));
        }

    Fft2d fft(g.n_q, g.n_x);
    GridRunResult result;
    TimeSeries& ts = result.series;
    auto& pg = ts.add("P_g");
    auto& pe = ts.add("P_e");
    std::vector<std::vector<double>*> proj;
    for (int nc = 0; nc <= options.n_photon_max; ++nc)
        for (int s = 0; s < 2; ++s)
            proj.push_back(&ts.add("proj_" + std::to_string(nc) + (s == 0 ? "_g" : "_e")));
    auto& photons = ts.add("mean_photons");
    auto& excitations = ts.add("excitations");
    auto& energy = ts.add("energy_eV");
    auto& norm = ts.add("norm");
    auto& q_mean = ts.add("q_mean");
    auto& q_g = ts.add("q_g");
    auto& q_e = ts.add("q_e");
    const Matrix phi = hermite_functions(options.n_photon_max + 1, x);

    std::vector<long> snap_steps;
    for (double t : options.snapshot_times) snap_steps.push_back(std::llround(t / dt_fs));

    GridWavefunction wf = wf0;
    auto sample = [&](long step) {
        wf.time_fs = wf0.time_fs + step * dt_fs;
        ts.times.push_back(wf.time_fs);
        const double p0 = wf.population(0);
        const double p1 = wf.population(1);
        pg.push_back(p0);
        pe.push_back(p1);
        for (int s = 0; s < 2; ++s) {
            const auto& f = s == 0 ? wf.g : wf.e;
            std::vector<double> acc(static_cast<std::size_t>(options.n_photon_max + 1), 0.0);
            for (int iq = 0; iq < g.n_q; ++iq) {
                const double wq = edge_weight(iq, g.n_q);
                for (int nc = 0; nc <= options.n_photon_max; ++nc) {
                    cplx amp{};
                    for (int ix = 0; ix < g.n_x; ++ix)
                        amp += edge_weight(ix, g.n_x) * phi(nc, ix) * f[wf.at(iq, ix)];
                    acc[static_cast<std::size_t>(nc)] += wq * std::norm(amp * g.dx());
                }
            }
            for (int nc = 0; nc <= options.n_photon_max; ++nc)
                proj[static_cast<std::size_t>(nc * 2 + s)]->push_back(acc[static_cast<std::size_t>(nc)] * g.dq());
        }
        const double nph = mean_photons_with(fft, wf);
        photons.push_back(nph);
        excitations.push_back(nph + p1);
        energy.push_back(units::to_ev(inner_real(wf, apply_h(fft, wf, tables, cavity))));
        norm.push_back(std::sqrt(p0 + p1));
        const double qg = grid_q_expectation(wf, 0);
        const double qe = grid_q_expectation(wf, 1);
        q_g.push_back(qg);
        q_e.push_back(qe);
        q_mean.push_back((p0 * qg + p1 * qe) / (p0 + p1));
        if (options.observer) options.observer(wf);
    };
    auto maybe_snapshot = [&](long step) {
        for (long s : snap_steps)
            if (s == step) {
                DensitySnapshot snap{wf0.time_fs + step * dt_fs, g, std::vector<double>(n), std::vector<double>(n)};
                for (std::size_t k = 0; k < n; ++k) {
                    snap.density_g[k] = std::norm(wf.g[k]);
                    snap.density_e[k] = std::norm(wf.e[k]);
                }
                result.snapshots.push_back(std::move(snap));
                break;
            }
    };
    auto half_potential = [&] {
        for (std::size_t k = 0; k < n; ++k) {
            const cplx a = wf.g[k];
            const cplx b = wf.e[k];
            wf.g[k] = u11[k] * a + u12[k] * b;
            wf.e[k] = u12[k] * a + u22[k] * b;
        }
    };
    auto kinetic = [&](std::vector<cplx>& f) {
        cplx* b = fft.data();
        std::copy(f.begin(), f.end(), b);
        fft.forward();
        for (std::size_t k = 0; k < n; ++k) b[k] *= kin[k];
        fft.backward();
        std::copy(b, b + n, f.begin());
    };

    sample(0);
    maybe_snapshot(0);
    for (long step = 1; step <= steps; ++step) {
        half_potential();
        kinetic(wf.g);
        kinetic(wf.e);
        half_potential();
        if (step % every == 0) sample(step);
        maybe_snapshot(step);
    }
    wf.time_fs = wf0.time_fs + steps * dt_fs;
    result.final_state = std::move(wf);
    return result;
}

double dt_halving_change(const GridWavefunction& wf0, const GridTables& tables, const CavitySpec& cavity,
                         const GridRunOptions& options) {
    GridRunOptions o = options;
    o.snapshot_times.clear();
    o.observer = nullptr;
    o.sample_fs = o.t_final_fs;
    o.n_photon_max = 0;
    const double coarse = grid_propagate(wf0, tables, cavity, o).series.channel("P_g").back();
    GridWavefunction fine = wf0;
    fine.grid.dt_fs *= 0.5;
    const double refined = grid_propagate(fine, tables, cavity, o).series.channel("P_g").back();
    return std::abs(coarse - refined);
}

GridWavefunction reflect_q(const GridWavefunction& wf) {
    const GridSpec& g = wf.grid;
    if (std::abs(g.q_min + g.q_max) > 1e-12 * std::max(1.0, std::abs(g.q_max)))
        throw ConfigError("reflection needs a q grid symmetric about 0");
    GridWavefunction out = wf;
    for (int iq = 0; iq < g.n_q; ++iq)
        for (int ix = 0; ix < g.n_x; ++ix) {
            out.g[out.at(iq, ix)] = wf.g[wf.at(g.n_q - 1 - iq, ix)];
            out.e[out.at(iq, ix)] = wf.e[wf.at(g.n_q - 1 - iq, ix)];
        }
    return out;
}

}  // namespace hqr
