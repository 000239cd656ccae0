#ifndef DECO_ORACLE_HPP
#define DECO_ORACLE_HPP

#include "deco/decoherence.hpp"
#include "deco/fock.hpp"
#include "deco/spectral.hpp"

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

namespace deco {

/// One bath oscillator with signed coupling amplitude g (weight in the
/// spectral measure is g²).
struct oscillator_mode {
    double omega = 1.0;
    double g = 0.0;
};

/// Finite-dimensional total system for exact diagonalization. The system
/// Hamiltonian and the pointer observable are simultaneously diagonal by
/// construction, so the total Hamiltonian is block diagonal over the
/// pointer eigensectors: block i = E_i + H_E + λ_i·Φ(h).
struct truncated_model {
    Eigen::VectorXd f_eigenvalues;  // λ_i
    Eigen::VectorXd hs_eigenvalues; // E_i
    std::vector<oscillator_mode> modes;
    int fock_cutoff = 2;
    Eigen::Index dimension_cap = 4096;

    /// Velocity-coupling preset: E_i = λ_i²/2.
    static truncated_model velocity(Eigen::VectorXd lambdas, std::vector<oscillator_mode> modes,
                                    int fock_cutoff);

    void validate() const;
    int system_dim() const { return static_cast<int>(f_eigenvalues.size()); }
    spectral_measure measure() const;
    double coupling_norm_sq() const; // Σ g_k²  (= ‖h‖²)
    double inv_moment() const;       // Σ g_k²/ω_k (= ‖M^{-1/2}h‖²)
};

Eigen::MatrixXcd build_hamiltonian(const truncated_model& model);

/// Density matrix of the reference state on the truncated environment:
/// vacuum projector, coherent projector with per-mode amplitudes ζ·g_k, or
/// their mixture. Gated by the truncation rule ‖shift‖² + |ζ|²·m0 ≤ N/4.
Eigen::MatrixXcd environment_state(const reference_state& ref, const truncated_model& model,
                                   const fock_space& fock);

/// Exact reduced dynamics ρ(t) = tr_E U(t)(ρ0 ⊗ ω)U⁺(t) by per-sector
/// eigendecomposition (done once). `evolve_reduced` maps the time grid with
/// the OpenMP driver, `_serial` is the reference path.
std::vector<Eigen::MatrixXcd> evolve_reduced(const truncated_model& model,
                                             const Eigen::MatrixXcd& rho0,
                                             const reference_state& ref,
                                             const std::vector<double>& times);
std::vector<Eigen::MatrixXcd> evolve_reduced_serial(const truncated_model& model,
                                                    const Eigen::MatrixXcd& rho0,
                                                    const reference_state& ref,
                                                    const std::vector<double>& times);

/// Analytic prediction for the same matrix element:
/// ρ_ij(t) = ρ_ij(0)·e^{-i(E_i-E_j)t}·χ(λ_j, λ_i; t). This is the
/// closed-form side of the oracle cross-check; the index convention is
/// locked by a regression test against evolve_reduced.
cplx analytic_offdiag_factor(const truncated_model& model, int i, int j,
                             const reference_state& ref, double t,
                             const quad_options& opt = {});

struct field_bound_report {
    int trials = 0;
    int violations = 0;
    double max_ratio = 0.0; // max LHS/RHS over trials
};

/// ‖Φ(h)ψ‖ ≤ 2‖M^{-1/2}h‖·‖√H_E ψ‖ + ‖h‖·‖ψ‖ on random vectors supported
/// on occupations ≤ cutoff-2 (Φ maps them faithfully).
field_bound_report check_field_bound(const std::vector<oscillator_mode>& modes,
                                     const fock_space& fock, int trials, std::uint64_t seed);

struct lower_bound_report {
    double min_eig = 0.0;      // min eig of H_E − ½Φ² at the given cutoff
    double min_eig_2n = 0.0;   // same at doubled cutoff
    double lemma_bound = 0.0;  // −Σ g_k²
    double eps_trunc = 0.0;    // |min_eig − min_eig_2n|
};

/// Semiboundedness check: requires 2√(Σg²/ω) ≤ 1.
lower_bound_report check_lower_bound(const std::vector<oscillator_mode>& modes,
                                     const fock_space& fock);

/// Residual norm of T⁺(M⁻¹h)·H_E·T(M⁻¹h) − ‖M^{-1/2}h‖² − (H_E + Φ(h)) on
/// the sub-block of occupations ≤ cutoff/2.
double check_cook_identity(const std::vector<oscillator_mode>& modes, const fock_space& fock);

/// Residual norm of U⁺(t)T(g)U(t) − T(e^{iωt}g) on the same sub-block.
double check_weyl_dynamics(const std::vector<oscillator_mode>& modes, const fock_space& fock,
                           const Eigen::VectorXcd& amplitudes, double t);

/// Residual norm of T(g1)T(g2) − T(g1+g2)·e^{-i·Im(g1|g2)} on the sub-block.
double check_weyl_composition(const Eigen::VectorXcd& g1, const Eigen::VectorXcd& g2,
                              const fock_space& fock);

} // namespace deco

#endif
