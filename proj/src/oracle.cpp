#include "deco/oracle.hpp"
#include "deco/errors.hpp"
#include "deco/parallel.hpp"

#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

namespace deco {

namespace {

void require(bool cond, const char* msg) {
    if (!cond) throw std::invalid_argument(msg);
}

std::vector<double> omegas_of(const std::vector<oscillator_mode>& modes) {
    std::vector<double> w;
    w.reserve(modes.size());
    for (const auto& m : modes) w.push_back(m.omega);
    return w;
}

std::vector<double> couplings_of(const std::vector<oscillator_mode>& modes) {
    std::vector<double> g;
    g.reserve(modes.size());
    for (const auto& m : modes) g.push_back(m.g);
    return g;
}

} // namespace

truncated_model truncated_model::velocity(Eigen::VectorXd lambdas,
                                          std::vector<oscillator_mode> modes, int fock_cutoff) {
    truncated_model m;
    m.hs_eigenvalues = 0.5 * lambdas.array().square();
    m.f_eigenvalues = std::move(lambdas);
    m.modes = std::move(modes);
    m.fock_cutoff = fock_cutoff;
    m.validate();
    return m;
}

void truncated_model::validate() const {
    require(f_eigenvalues.size() >= 2, "system dimension must be at least 2");
    require(f_eigenvalues.size() == hs_eigenvalues.size(),
            "F and H_S eigenvalue lists must have equal length");
    require(!modes.empty() && modes.size() <= 2, "1 or 2 bath modes supported");
    require(fock_cutoff >= 2, "fock cutoff must be at least 2");
    for (const auto& m : modes) require(m.omega > 0.0, "mode frequencies must be positive");
    if (2.0 * std::sqrt(inv_moment()) > 1.0 + 1e-12)
        throw std::invalid_argument("coupling violates 2*sqrt(sum g^2/omega) <= 1");
}

spectral_measure truncated_model::measure() const {
    std::vector<bath_mode> ms;
    for (const auto& m : modes) ms.push_back({m.omega, m.g * m.g});
    return spectral_measure::discrete(std::move(ms));
}

double truncated_model::coupling_norm_sq() const {
    double s = 0.0;
    for (const auto& m : modes) s += m.g * m.g;
    return s;
}

double truncated_model::inv_moment() const {
    double s = 0.0;
    for (const auto& m : modes) s += m.g * m.g / m.omega;
    return s;
}

Eigen::MatrixXcd build_hamiltonian(const truncated_model& model) {
    model.validate();
    fock_space fock(static_cast<int>(model.modes.size()), model.fock_cutoff);
    Eigen::Index env_dim = fock.dim();
    Eigen::Index total = env_dim * model.system_dim();
    if (total > model.dimension_cap)
        throw std::invalid_argument("total dimension exceeds the configured cap");

    Eigen::VectorXd he = fock.energy_diagonal(omegas_of(model.modes));
    Eigen::MatrixXcd phi = fock.field_operator(couplings_of(model.modes));

    Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(total, total);
    for (int i = 0; i < model.system_dim(); ++i) {
        Eigen::MatrixXcd block = model.f_eigenvalues(i) * phi;
        block += (he.array() + model.hs_eigenvalues(i)).matrix().cast<cplx>().asDiagonal();
        h.block(i * env_dim, i * env_dim, env_dim, env_dim) = block;
    }
    return h;
}

Eigen::MatrixXcd environment_state(const reference_state& ref, const truncated_model& model,
                                   const fock_space& fock) {
    double m0 = model.coupling_norm_sq();
    double max_shift = 0.0;
    for (int i = 0; i < model.system_dim(); ++i) {
        double shift = 0.0;
        for (const auto& m : model.modes) {
            double c = model.f_eigenvalues(i) * m.g / m.omega;
            shift += c * c;
        }
        max_shift = std::max(max_shift, shift);
    }
    double max_zeta_sq = 0.0;
    for (const auto& c : ref.components())
        max_zeta_sq = std::max(max_zeta_sq, std::norm(c.zeta));
    if (max_shift + max_zeta_sq * m0 > fock.cutoff() / 4.0)
        throw truncation_error("reference state or polaron shift too large for the cutoff");

    Eigen::MatrixXcd omega = Eigen::MatrixXcd::Zero(fock.dim(), fock.dim());
    for (const auto& c : ref.components()) {
        Eigen::VectorXcd v;
        if (c.zeta == cplx{0.0, 0.0}) {
            v = fock.vacuum();
        } else {
            Eigen::VectorXcd amps(fock.n_modes());
            for (int k = 0; k < fock.n_modes(); ++k) amps(k) = c.zeta * model.modes[k].g;
            v = displacement(amps, fock) * fock.vacuum();
        }
        omega += c.probability * (v * v.adjoint());
    }
    return omega;
}

namespace {

struct sector_diag {
    Eigen::MatrixXcd vectors;
    Eigen::VectorXd values;
};

std::vector<Eigen::MatrixXcd> evolve_impl(const truncated_model& model,
                                          const Eigen::MatrixXcd& rho0,
                                          const reference_state& ref,
                                          const std::vector<double>& times, bool parallel) {
    model.validate();
    const int d = model.system_dim();
    require(rho0.rows() == d && rho0.cols() == d, "rho0 dimension mismatch");
    require((rho0 - rho0.adjoint()).norm() <= 1e-10, "rho0 must be Hermitian");
    require(std::abs(rho0.trace().real() - 1.0) <= 1e-10 &&
                std::abs(rho0.trace().imag()) <= 1e-12,
            "rho0 must have unit trace");
    {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(rho0);
        require(es.eigenvalues().minCoeff() >= -1e-10, "rho0 must be positive semidefinite");
    }

    fock_space fock(static_cast<int>(model.modes.size()), model.fock_cutoff);
    if (fock.dim() * d > model.dimension_cap)
        throw std::invalid_argument("total dimension exceeds the configured cap");

    Eigen::VectorXd he = fock.energy_diagonal(omegas_of(model.modes));
    Eigen::MatrixXcd phi = fock.field_operator(couplings_of(model.modes));
    Eigen::MatrixXcd omega = environment_state(ref, model, fock);

    // Diagonalize each pointer sector once.
    std::vector<sector_diag> sectors(d);
    for (int i = 0; i < d; ++i) {
        Eigen::MatrixXcd block = model.f_eigenvalues(i) * phi;
        block += (he.array() + model.hs_eigenvalues(i)).matrix().cast<cplx>().asDiagonal();
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(block);
        sectors[i] = {es.eigenvectors(), es.eigenvalues()};
    }

    // Low-rank reference: ω = Σ_c p_c |v_c><v_c| (components are projectors).
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eso(omega);
    std::vector<std::pair<double, Eigen::VectorXcd>> comps;
    for (Eigen::Index k = 0; k < eso.eigenvalues().size(); ++k) {
        double p = eso.eigenvalues()(k);
        if (p > 1e-14) comps.push_back({p, eso.eigenvectors().col(k)});
    }

    // Precompute V_i† v_c.
    std::vector<std::vector<Eigen::VectorXcd>> w(d);
    for (int i = 0; i < d; ++i)
        for (const auto& [p, v] : comps) w[i].push_back(sectors[i].vectors.adjoint() * v);

    std::vector<Eigen::MatrixXcd> out(times.size());
    auto eval = [&](std::size_t j) {
        double t = times[j];
        // u_{i,c} = U_i(t) v_c.
        std::vector<std::vector<Eigen::VectorXcd>> u(d);
        for (int i = 0; i < d; ++i) {
            Eigen::VectorXcd ph(sectors[i].values.size());
            for (Eigen::Index k = 0; k < ph.size(); ++k)
                ph(k) = std::exp(cplx(0.0, -sectors[i].values(k) * t));
            for (const auto& wc : w[i])
                u[i].push_back(sectors[i].vectors * ph.cwiseProduct(wc).eval());
        }
        Eigen::MatrixXcd rho(d, d);
        for (int i = 0; i < d; ++i)
            for (int jj = 0; jj < d; ++jj) {
                cplx factor{0.0, 0.0};
                for (std::size_t c = 0; c < comps.size(); ++c)
                    factor += comps[c].first * u[jj][c].dot(u[i][c]); // <u_j, u_i>
                rho(i, jj) = rho0(i, jj) * factor;
            }
        double tr = rho.trace().real();
        if (std::abs(tr - 1.0) > 1e-10)
            throw std::runtime_error("reduced dynamics lost trace normalization");
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(rho);
        if (es.eigenvalues().minCoeff() < -1e-10)
            throw std::runtime_error("reduced dynamics lost positivity");
        out[j] = std::move(rho);
    };
    if (parallel)
        parallel_for(times.size(), eval);
    else
        serial_for(times.size(), eval);
    return out;
}

} // namespace

std::vector<Eigen::MatrixXcd> evolve_reduced(const truncated_model& model,
                                             const Eigen::MatrixXcd& rho0,
                                             const reference_state& ref,
                                             const std::vector<double>& times) {
    return evolve_impl(model, rho0, ref, times, true);
}

std::vector<Eigen::MatrixXcd> evolve_reduced_serial(const truncated_model& model,
                                                    const Eigen::MatrixXcd& rho0,
                                                    const reference_state& ref,
                                                    const std::vector<double>& times) {
    return evolve_impl(model, rho0, ref, times, false);
}

cplx analytic_offdiag_factor(const truncated_model& model, int i, int j,
                             const reference_state& ref, double t, const quad_options& opt) {
    double ei = model.hs_eigenvalues(i), ej = model.hs_eigenvalues(j);
    double li = model.f_eigenvalues(i), lj = model.f_eigenvalues(j);
    cplx free = std::exp(cplx(0.0, -(ei - ej) * t));
    return free * chi(model.measure(), lj, li, ref, t, opt);
}

field_bound_report check_field_bound(const std::vector<oscillator_mode>& modes,
                                     const fock_space& fock, int trials, std::uint64_t seed) {
    if (trials < 1) throw std::invalid_argument("need at least one trial");
    Eigen::MatrixXcd phi = fock.field_operator(couplings_of(modes));
    Eigen::VectorXd he = fock.energy_diagonal(omegas_of(modes));
    Eigen::VectorXd sqrt_he = he.cwiseSqrt();

    double m0 = 0.0, m1 = 0.0;
    for (const auto& m : modes) {
        m0 += m.g * m.g;
        m1 += m.g * m.g / m.omega;
    }
    auto support = fock.levels_upto(fock.cutoff() - 2);

    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    field_bound_report rep;
    rep.trials = trials;
    for (int trial = 0; trial < trials; ++trial) {
        Eigen::VectorXcd v = Eigen::VectorXcd::Zero(fock.dim());
        for (auto idx : support) v(idx) = cplx(gauss(rng), gauss(rng));
        v.normalize();
        double lhs = (phi * v).norm();
        double rhs = 2.0 * std::sqrt(m1) * sqrt_he.cast<cplx>().cwiseProduct(v).norm() +
                     std::sqrt(m0) * v.norm();
        double ratio = rhs > 0.0 ? lhs / rhs : (lhs > 0.0 ? std::numeric_limits<double>::infinity() : 0.0);
        rep.max_ratio = std::max(rep.max_ratio, ratio);
        if (lhs > rhs * (1.0 + 1e-12) + 1e-12) ++rep.violations;
    }
    return rep;
}

namespace {

double min_eig_lemma_operator(const std::vector<oscillator_mode>& modes, int cutoff) {
    fock_space f(static_cast<int>(modes.size()), cutoff);
    Eigen::MatrixXcd phi = f.field_operator(couplings_of(modes));
    Eigen::MatrixXcd q = -0.5 * (phi * phi);
    q += f.energy_diagonal(omegas_of(modes)).cast<cplx>().asDiagonal();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(q, Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff();
}

} // namespace

lower_bound_report check_lower_bound(const std::vector<oscillator_mode>& modes,
                                     const fock_space& fock) {
    double m1 = 0.0, m0 = 0.0;
    for (const auto& m : modes) {
        m1 += m.g * m.g / m.omega;
        m0 += m.g * m.g;
    }
    if (2.0 * std::sqrt(m1) > 1.0 + 1e-12)
        throw std::invalid_argument("lemma requires 2*sqrt(sum g^2/omega) <= 1");

    lower_bound_report rep;
    rep.min_eig = min_eig_lemma_operator(modes, fock.cutoff());
    rep.min_eig_2n = min_eig_lemma_operator(modes, 2 * fock.cutoff());
    rep.lemma_bound = -m0;
    rep.eps_trunc = std::abs(rep.min_eig - rep.min_eig_2n);
    return rep;
}

double check_cook_identity(const std::vector<oscillator_mode>& modes, const fock_space& fock) {
    Eigen::VectorXcd shift(fock.n_modes());
    double m1 = 0.0;
    for (int k = 0; k < fock.n_modes(); ++k) {
        shift(k) = modes[k].g / modes[k].omega; // M⁻¹h
        m1 += modes[k].g * modes[k].g / modes[k].omega;
    }
    Eigen::MatrixXcd t = displacement(shift, fock);
    Eigen::MatrixXcd he = fock.energy_diagonal(omegas_of(modes)).cast<cplx>().asDiagonal();
    Eigen::MatrixXcd lhs = t.adjoint() * he * t;
    lhs -= m1 * Eigen::MatrixXcd::Identity(fock.dim(), fock.dim());
    Eigen::MatrixXcd rhs = he + fock.field_operator(couplings_of(modes));
    return subblock_norm(lhs - rhs, fock, fock.cutoff() / 2);
}

double check_weyl_dynamics(const std::vector<oscillator_mode>& modes, const fock_space& fock,
                           const Eigen::VectorXcd& amplitudes, double t) {
    Eigen::VectorXd he = fock.energy_diagonal(omegas_of(modes));
    Eigen::VectorXcd uph(fock.dim());
    for (Eigen::Index i = 0; i < fock.dim(); ++i) uph(i) = std::exp(cplx(0.0, -he(i) * t));
    Eigen::MatrixXcd tg = displacement(amplitudes, fock);
    // U⁺ T U with U diagonal in the occupation basis.
    Eigen::MatrixXcd conj = uph.conjugate().asDiagonal() * tg * uph.asDiagonal();
    Eigen::VectorXcd evolved(amplitudes.size());
    for (int k = 0; k < fock.n_modes(); ++k)
        evolved(k) = std::exp(cplx(0.0, modes[k].omega * t)) * amplitudes(k); // V⁺(t)g
    Eigen::MatrixXcd expected = displacement(evolved, fock);
    return subblock_norm(conj - expected, fock, fock.cutoff() / 2);
}

double check_weyl_composition(const Eigen::VectorXcd& g1, const Eigen::VectorXcd& g2,
                              const fock_space& fock) {
    Eigen::MatrixXcd lhs = displacement(g1, fock) * displacement(g2, fock);
    cplx inner = g1.dot(g2); // (g1|g2), antilinear in the first slot
    Eigen::MatrixXcd rhs =
        displacement((g1 + g2).eval(), fock) * std::exp(cplx(0.0, -inner.imag()));
    return subblock_norm(lhs - rhs, fock, fock.cutoff() / 2);
}

} // namespace deco
