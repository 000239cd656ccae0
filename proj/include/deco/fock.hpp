#ifndef DECO_FOCK_HPP
#define DECO_FOCK_HPP

#include <Eigen/Dense>
#include <complex>
#include <vector>

namespace deco {

/// Truncated bosonic Fock space: `cutoff` levels per mode (occupations
/// 0..cutoff-1), total dimension cutoff^n_modes, basis indexed mixed-radix
/// with mode 0 as the fastest digit. Truncation breaks [a, a⁺] = I only in
/// the top level of each mode.
class fock_space {
public:
    fock_space(int n_modes, int cutoff);

    int n_modes() const { return n_modes_; }
    int cutoff() const { return cutoff_; }
    Eigen::Index dim() const { return dim_; }

    int occupation(Eigen::Index state, int mode) const;

    Eigen::MatrixXcd annihilate(int mode) const;
    Eigen::MatrixXcd create(int mode) const { return annihilate(mode).adjoint(); }

    /// Diagonal of the number operator a_k⁺ a_k.
    Eigen::VectorXd number_diagonal(int mode) const;
    /// Diagonal of Σ_k ω_k a_k⁺ a_k.
    Eigen::VectorXd energy_diagonal(const std::vector<double>& omegas) const;
    /// Φ(h) = Σ_k g_k (a_k + a_k⁺) for real amplitudes g_k.
    Eigen::MatrixXcd field_operator(const std::vector<double>& couplings) const;

    Eigen::VectorXcd vacuum() const;

    /// Basis indices whose occupation is ≤ level in every mode.
    std::vector<Eigen::Index> levels_upto(int level) const;

private:
    int n_modes_;
    int cutoff_;
    Eigen::Index dim_;
    std::vector<Eigen::Index> stride_;
};

/// Weyl displacement T(g) = exp(Σ_k g_k a_k⁺ − ḡ_k a_k), by Hermitian
/// eigendecomposition of the generator. Throws truncation_error when
/// Σ|g_k|² > cutoff/4 (the Poisson tail would reach the top level).
Eigen::MatrixXcd displacement(const Eigen::VectorXcd& amplitudes, const fock_space& fock);

/// Largest singular value.
double operator_norm(const Eigen::MatrixXcd& m);

/// Operator norm of the sub-block of `m` on per-mode occupations ≤ level.
double subblock_norm(const Eigen::MatrixXcd& m, const fock_space& fock, int level);

} // namespace deco

#endif
