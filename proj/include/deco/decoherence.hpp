#ifndef DECO_DECOHERENCE_HPP
#define DECO_DECOHERENCE_HPP

#include "deco/quadrature.hpp"
#include "deco/spectral.hpp"

#include <complex>
#include <string>
#include <vector>

namespace deco {

using cplx = std::complex<double>;

/// Environment reference state: vacuum, one coherent state along the
/// coupling direction (f = ζ·h), or a finite mixture of such states.
class reference_state {
public:
    struct component {
        double probability = 1.0;
        cplx zeta{0.0, 0.0};
    };

    static reference_state vacuum();
    static reference_state coherent(cplx zeta);
    static reference_state mixture(std::vector<component> components);

    bool is_vacuum() const { return components_.size() == 1 && components_[0].zeta == cplx{0.0, 0.0}; }
    bool is_mixture() const { return components_.size() > 1; }
    const std::vector<component>& components() const { return components_; }
    std::string describe() const;

private:
    reference_state() = default;
    std::vector<component> components_;
};

struct curve_params {
    double alpha = 0.0;
    double beta = 0.0;
    std::string measure_id;
    std::string reference_id;
};

struct decoherence_curve {
    std::vector<double> times;
    std::vector<double> psi;
    std::vector<double> phi;
    std::vector<cplx> chi;
    curve_params params;
};

/// ψ(t) = 4∫ λ^{-2} sin²(λt/2) dσ_h(λ). Closed-form sum for point measures,
/// panel quadrature (stable sinc form, one panel per half oscillation) for
/// densities. ψ(0) = 0 exactly.
double psi(const spectral_measure& m, double t, const quad_options& opt = {});

/// The (α,β)-independent spectral integrals entering the phase at time t:
///   p1 = ∫ 2 sin²(λt/2) λ^{-1} dσ,  s1 = ∫ sin(λt) λ^{-1} dσ,
///   s2 = ∫ sin(λt) λ^{-2} dσ,       m1 = ∫ λ^{-1} dσ.
/// m1/s2 require the first inverse moment to be finite and are only
/// populated when `need_m1_terms` is set.
struct phase_parts {
    double m1 = 0.0, p1 = 0.0, s1 = 0.0, s2 = 0.0;
};
phase_parts compute_phase_parts(const spectral_measure& m, double t, bool need_m1_terms,
                                const quad_options& opt = {});

/// φ(t) = 2(α-β)·Im(ζ̄ W(t)) + (α²-β²)·[m1·t − s2(t)], with
/// W(t) = ∫ (1-e^{iλt}) λ^{-1} dσ = p1 − i·s1. The sign of the s2 term
/// follows from the Weyl relations; see the oracle regression tests.
/// Mixtures are handled at the chi level.
double phase_phi(const spectral_measure& m, double alpha, double beta,
                 const reference_state& ref, double t, const quad_options& opt = {});

/// χ_{αβ}(t) = exp(-(α-β)²ψ(t)/2 - iφ(t)); for mixtures the modulus factor
/// is shared and the phases are mixed: e^{-(α-β)²ψ/2}·Σ p_i e^{-iφ_i}.
cplx chi(const spectral_measure& m, double alpha, double beta,
         const reference_state& ref, double t, const quad_options& opt = {});

/// Batch evaluation over an ascending non-negative time grid. `curve` maps
/// the grid with the OpenMP driver; `curve_serial` is the serial reference
/// used by the equivalence tests and the benchmark. Both produce identical
/// values.
decoherence_curve curve(const spectral_measure& m, double alpha, double beta,
                        const reference_state& ref, const std::vector<double>& times,
                        const quad_options& opt = {});
decoherence_curve curve_serial(const spectral_measure& m, double alpha, double beta,
                               const reference_state& ref, const std::vector<double>& times,
                               const quad_options& opt = {});

struct slope_fit {
    double slope = 0.0;
    double std_error = 0.0;
};

/// Least-squares slope of log ψ vs log t over a log-spaced grid in
/// [t_lo, t_hi]. Rejects measures classified regular (ψ stays bounded).
slope_fit asymptotic_exponent(const spectral_measure& m, double t_lo, double t_hi,
                              int n_samples, const quad_options& opt = {});

/// All local minima t* ∈ (0, horizon] of ψ with ψ(t*) < threshold, located
/// by dense sampling (64 points per shortest mode period) plus
/// golden-section refinement. Point measures only.
std::vector<double> recurrence_scan(const spectral_measure& m, double horizon,
                                    double threshold);

} // namespace deco

#endif
