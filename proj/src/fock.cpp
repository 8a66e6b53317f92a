#include "hqr/fock.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>
#include <cstdio>
#include <ostream>
#include <string>

#include "hqr/error.hpp"

namespace hqr {

namespace {

Matrix lower_matrix(int n) {
    Matrix b = Matrix::Zero(n, n);
    for (int i = 1; i < n; ++i) b(i - 1, i) = std::sqrt(static_cast<double>(i));
    return b;
}

// log of the Poisson weight exp(-l2) l2^k / k!
double log_poisson(double l2, int k) {
    if (l2 == 0.0) return k == 0 ? 0.0 : -INFINITY;
    return -l2 + k * std::log(l2) - std::lgamma(k + 1.0);
}

// log |<2k|S(r)|0>|^2 = log[(tanh r)^{2k} (2k)! / (4^k (k!)^2) / cosh r]
double log_squeezed_weight(double r, int k) {
    const double t = std::tanh(std::abs(r));
    if (t == 0.0) return k == 0 ? 0.0 : -INFINITY;
    return 2.0 * k * std::log(t) + std::lgamma(2.0 * k + 1.0) - k * std::log(4.0) -
           2.0 * std::lgamma(k + 1.0) - std::log(std::cosh(r));
}

void require_size(int n) {
    if (n < 1) throw ConfigError("basis size must be at least 1");
}

// Places `block` at (row block (nc_r, s_r), column block (nc_c, s_c)) and its
// transpose at the mirrored position.
void put_symmetric(Matrix& h, const BasisSpec& basis, int nc_r, int s_r, int nc_c, int s_c,
                   const Matrix& block) {
    const int n = basis.n_vib;
    const int r0 = basis.block_offset(nc_r, s_r);
    const int c0 = basis.block_offset(nc_c, s_c);
    h.block(r0, c0, n, n) += block;
    h.block(c0, r0, n, n) += block.transpose();
}

void add_diagonal_block(Matrix& h, const BasisSpec& basis, int nc, int s, const Matrix& block) {
    const int n = basis.n_vib;
    const int o = basis.block_offset(nc, s);
    h.block(o, o, n, n) += block;
}

// Adds omega_c a^dagger a, the exciton-photon coupling built from the e<-g
// vibrational block `c_eg` (row e, column g), and diagonal dipole terms.
void add_cavity_terms(Matrix& h, const BasisSpec& basis, double omega_c, const Matrix& c_eg,
                      bool counter_rotating, const Matrix* d_gg, const Matrix* d_ee) {
    const int n = basis.n_vib;
    for (int nc = 0; nc < basis.n_fock; ++nc) {
        for (int s = 0; s < 2; ++s) {
            const int o = basis.block_offset(nc, s);
            h.block(o, o, n, n).diagonal().array() += nc * omega_c;
        }
    }
    for (int nc = 0; nc + 1 < basis.n_fock; ++nc) {
        const double amp = std::sqrt(nc + 1.0);
        // Rotating: a^dagger s- takes |nc; e> to |nc+1; g>.
        put_symmetric(h, basis, nc + 1, 0, nc, 1, amp * c_eg.transpose());
        // Counter-rotating: a^dagger s+ takes |nc; g> to |nc+1; e>.
        if (counter_rotating) put_symmetric(h, basis, nc + 1, 1, nc, 0, amp * c_eg);
        if (d_gg) put_symmetric(h, basis, nc + 1, 0, nc, 0, amp * *d_gg);
        if (d_ee) put_symmetric(h, basis, nc + 1, 1, nc, 1, amp * *d_ee);
    }
}

}  // namespace

void BasisSpec::validate() const {
    if (n_vib < 1) throw ConfigError("n_vib must be at least 1");
    if (n_fock < 1) throw ConfigError("n_fock must be at least 1");
}

LadderPair ladder_matrices(int n) {
    require_size(n);
    Matrix b = lower_matrix(n);
    return {{b, "b"}, {b.transpose(), "b_dagger"}};
}

int displacement_min_size(double lambda, double tol) {
    const double l2 = lambda * lambda;
    const double log_tol = std::log(tol);
    int k = static_cast<int>(std::ceil(l2));
    while (log_poisson(l2, k) >= log_tol) ++k;
    return k + 1;
}

int squeeze_min_size(double r, double tol) {
    const double log_tol = std::log(tol);
    int k = 0;
    while (log_squeezed_weight(r, k) >= log_tol) ++k;
    return 2 * k + 1;
}

OperatorMatrix displacement_matrix(double lambda, int n) {
    require_size(n);
    if (log_poisson(lambda * lambda, n - 1) >= std::log(1e-12)) {
        const int need = displacement_min_size(lambda);
        throw TruncationError("displacement lambda = " + std::to_string(lambda) + " leaks out of " +
                                  std::to_string(n) + " states; use at least " + std::to_string(need),
                              need);
    }
    const Matrix b = lower_matrix(n);
    const Matrix gen = lambda * (b.transpose() - b);
    return {gen.exp(), "D(" + std::to_string(lambda) + ")"};
}

OperatorMatrix squeeze_matrix(double r, int n) {
    require_size(n);
    const int last_even = (n - 1) / 2;
    if (n > 1 && log_squeezed_weight(r, last_even) >= std::log(1e-12)) {
        const int need = squeeze_min_size(r);
        throw TruncationError("squeeze r = " + std::to_string(r) + " leaks out of " + std::to_string(n) +
                                  " states; use at least " + std::to_string(need),
                              need);
    }
    const Matrix b = lower_matrix(n);
    const Matrix b2 = b * b;
    const Matrix gen = 0.5 * r * (b2 - b2.transpose());
    return {gen.exp(), "S(" + std::to_string(r) + ")"};
}

OperatorMatrix shifted_number_operator(double lambda, double r, int n) {
    const Matrix ds = displacement_matrix(lambda, n).entries * squeeze_matrix(r, n).entries;
    const Vector number = Vector::LinSpaced(n, 0.0, n - 1.0);
    Matrix out = ds * number.asDiagonal() * ds.transpose();
    out = 0.5 * (out + out.transpose()).eval();
    return {out, "N_e"};
}

OperatorMatrix position_operator(int n, double mass, double omega, double shift) {
    require_size(n);
    if (!(mass > 0.0) || !(omega > 0.0)) throw ConfigError("position operator needs positive mass and frequency");
    const Matrix b = lower_matrix(n);
    Matrix q = std::sqrt(0.5 / (mass * omega)) * (b + b.transpose());
    q.diagonal().array() += shift;
    return {q, "q"};
}

OperatorMatrix profile_operator(const GaussianProfile& profile, int n, double mass, double omega,
                                double shift) {
    profile.validate();
    if (profile.amplitude == 0.0) return {Matrix::Zero(n, n), "profile"};
    const EigenSystem es = eigh(position_operator(n, mass, omega, shift).entries);
    Vector f(n);
    for (int i = 0; i < n; ++i) f(i) = profile(es.values(i));
    Matrix out = es.vectors * f.asDiagonal() * es.vectors.transpose();
    out = 0.5 * (out + out.transpose()).eval();
    return {out, "profile"};
}

OperatorMatrix assemble_hamiltonian(const HqrModel& model, const CavitySpec& cavity, const BasisSpec& basis,
                                    const AssemblyOptions& options) {
    model.validate();
    cavity.validate();
    basis.validate();
    const int n = basis.n_vib;
    const double M = model.mass;
    const double wg = model.omega_g;

    const Vector number = Vector::LinSpaced(n, 0.0, n - 1.0);
    Matrix h_g = Matrix::Zero(n, n);
    h_g.diagonal() = wg * (number.array() + 0.5);
    Matrix h_e = model.omega_e * shifted_number_operator(model.huang_rhys(), model.squeeze(), n).entries;
    h_e.diagonal().array() += model.omega_ge + 0.5 * model.omega_e;

    const Matrix v_dc = profile_operator(model.dc_profile(), n, M, wg).entries;

    const double g = cavity.coupling(model.dipole.amplitude);
    Matrix c_eg;
    if (options.constant_dipole) {
        c_eg = g * Matrix::Identity(n, n);
    } else {
        GaussianProfile env = model.dipole_profile();
        env.amplitude = g;
        c_eg = profile_operator(env, n, M, wg).entries;
    }

    Matrix d_gg, d_ee;
    if (options.diagonal_dipoles) {
        const double scale = cavity.chi * std::sqrt(0.5 * cavity.omega_c);
        GaussianProfile pg = options.diagonal_dipoles->first;
        GaussianProfile pe = options.diagonal_dipoles->second;
        pg.amplitude *= scale;
        pe.amplitude *= scale;
        d_gg = profile_operator(pg, n, M, wg).entries;
        d_ee = profile_operator(pe, n, M, wg).entries;
    }

    Matrix h = Matrix::Zero(basis.dim(), basis.dim());
    for (int nc = 0; nc < basis.n_fock; ++nc) {
        add_diagonal_block(h, basis, nc, 0, h_g);
        add_diagonal_block(h, basis, nc, 1, h_e);
        put_symmetric(h, basis, nc, 1, nc, 0, v_dc);
    }
    add_cavity_terms(h, basis, cavity.omega_c, c_eg, options.include_counter_rotating,
                     options.diagonal_dipoles ? &d_gg : nullptr, options.diagonal_dipoles ? &d_ee : nullptr);
    return {h, "H"};
}

OperatorMatrix assemble_transformed_hamiltonian(const HqrModel& model, const CavitySpec& cavity,
                                                const BasisSpec& basis) {
    model.validate();
    cavity.validate();
    basis.validate();
    const int n = basis.n_vib;
    const double M = model.mass;

    // (D S)^dagger: maps the plain number basis onto the e-frame one.
    const Matrix ds = displacement_matrix(model.huang_rhys(), n).entries * squeeze_matrix(model.squeeze(), n).entries;
    const Matrix ds_dag = ds.transpose();

    const Vector number = Vector::LinSpaced(n, 0.0, n - 1.0);
    Matrix h_g = Matrix::Zero(n, n);
    h_g.diagonal() = model.omega_g * (number.array() + 0.5);
    Matrix h_e = Matrix::Zero(n, n);
    h_e.diagonal() = model.omega_ge + model.omega_e * (number.array() + 0.5);

    const Matrix v_eg = profile_operator(model.dc_profile(), n, M, model.omega_e, model.q_e).entries * ds_dag;
    GaussianProfile env = model.dipole_profile();
    env.amplitude = cavity.coupling(model.dipole.amplitude);
    const Matrix c_eg = profile_operator(env, n, M, model.omega_e, model.q_e).entries * ds_dag;

    Matrix h = Matrix::Zero(basis.dim(), basis.dim());
    for (int nc = 0; nc < basis.n_fock; ++nc) {
        add_diagonal_block(h, basis, nc, 0, h_g);
        add_diagonal_block(h, basis, nc, 1, h_e);
        put_symmetric(h, basis, nc, 1, nc, 0, v_eg);
    }
    add_cavity_terms(h, basis, cavity.omega_c, c_eg, true, nullptr, nullptr);
    return {h, "UHU^dagger"};
}

Vector excitation_number_diagonal(const BasisSpec& basis) {
    Vector d(basis.dim());
    for (int nc = 0; nc < basis.n_fock; ++nc)
        for (int s = 0; s < 2; ++s) d.segment(basis.block_offset(nc, s), basis.n_vib).setConstant(nc + s);
    return d;
}

Vector photon_number_diagonal(const BasisSpec& basis) {
    Vector d(basis.dim());
    for (int nc = 0; nc < basis.n_fock; ++nc)
        for (int s = 0; s < 2; ++s) d.segment(basis.block_offset(nc, s), basis.n_vib).setConstant(nc);
    return d;
}

void write_matrix(std::ostream& out, const OperatorMatrix& op, const BasisSpec& basis) {
    out << "# " << op.label << " dim " << op.dim() << " n_vib " << basis.n_vib << " n_fock " << basis.n_fock
        << " index (n_c*2+s)*n_vib+n\n";
    char buf[64];
    for (int i = 0; i < op.dim(); ++i) {
        for (int j = 0; j < op.dim(); ++j) {
            std::snprintf(buf, sizeof buf, "%.17g 0", op.entries(i, j));
            if (j) out << ' ';
            out << buf;
        }
        out << '\n';
    }
}

}  // namespace hqr
