#ifndef DECO_KERNELS_HPP
#define DECO_KERNELS_HPP

#include "deco/decoherence.hpp"
#include "deco/envmodels.hpp"

#include <functional>
#include <memory>
#include <string>

namespace deco {

/// Dephasing kernel (α, β, t) → χ(α,β;t) contracted against the pointer
/// projections. Evaluation is split into per-time snapshots because every
/// (α,β)-dependence is closed-form once the spectral integrals at t are
/// known; a snapshot amortizes them over a whole (α,β) grid.
class dephasing_kernel {
public:
    struct snapshot {
        std::function<cplx(double, double)> chi;
        /// Analytic bound for max(|∂χ/∂α|, |∂χ/∂β|); empty when only finite
        /// differences are available.
        std::function<double(double, double)> deriv_mag;
        double psi = 0.0; // envelope argument ψ(t)
    };

    virtual ~dephasing_kernel() = default;
    virtual snapshot at(double t) const = 0;
    virtual std::string describe() const = 0;
};

/// Boson-field kernel: χ = exp(-(α-β)²ψ(t)/2)·Σ p_i e^{-iφ_i(α,β,t)}.
class vanhove_kernel final : public dephasing_kernel {
public:
    vanhove_kernel(spectral_measure measure, reference_state ref, quad_options opt = {});
    snapshot at(double t) const override;
    std::string describe() const override;

private:
    spectral_measure measure_;
    reference_state ref_;
    quad_options opt_;
};

/// Commuting-environment kernel with Gaussian density: χ(α,β;t) =
/// exp(i·mean·s − σ²s²/2) at s = (α−β)t, with envelope argument ψ(t) = t².
class gaussian_kernel final : public dephasing_kernel {
public:
    gaussian_kernel(double mean, double sigma);
    snapshot at(double t) const override;
    std::string describe() const override;

private:
    double mean_, sigma_;
};

} // namespace deco

#endif
