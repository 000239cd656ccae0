#ifndef DECO_ENVMODELS_HPP
#define DECO_ENVMODELS_HPP

#include "deco/quadrature.hpp"

#include <complex>
#include <string>
#include <vector>

namespace deco {

/// Commuting-environment model: the dephasing factor reduces to the Fourier
/// transform of a scalar probability density dμ on a finite interval.
/// Presets carry the smoothness needed for fast decay; arbitrary
/// piecewise-linear densities are accepted but decay is only guaranteed for
/// the presets.
class fourier_environment {
public:
    static fourier_environment gaussian(double mean, double sigma); // truncated at ±8σ
    static fourier_environment smooth_bump(double center, double width);
    static fourier_environment piecewise_linear(std::vector<double> grid,
                                                std::vector<double> density);

    double lower() const { return lower_; }
    double upper() const { return upper_; }
    bool smooth_preset() const { return preset_ != preset_t::none; }
    double density(double lambda) const;
    std::vector<double> breakpoints() const;
    std::string describe() const;

private:
    enum class preset_t { none, gaussian, bump };
    fourier_environment() = default;
    preset_t preset_ = preset_t::none;
    double lower_ = 0.0, upper_ = 0.0;
    double mean_ = 0.0, sigma_ = 1.0;       // gaussian
    double center_ = 0.0, width_ = 1.0;     // bump
    double norm_ = 1.0;
    std::vector<double> grid_, samples_;    // piecewise
};

/// n-th derivative of χ(s) = ∫ e^{iλs} dμ(λ) (n ∈ {0,1}; n = 1 inserts iλ),
/// by panel quadrature with one panel per oscillation.
std::complex<double> chi_fourier(const fourier_environment& env, double s, int n,
                                 const quad_options& opt = {});

struct decay_fit_result {
    double c_gamma = 0.0;   // smallest C with |χ(s)| ≤ C(1+s²)^{-γ} on the grid
    double argmax_s = 0.0;  // grid point attaining it
    bool growing = false;   // C still increasing at the end of the grid
};

/// Smallest polynomial-decay constant on the given grid; flags growth when
/// the sup is still being attained at the top of the grid (non-smooth
/// densities decay too slowly for the requested γ).
decay_fit_result decay_fit(const fourier_environment& env, double gamma,
                           const std::vector<double>& s_grid,
                           const quad_options& opt = {});

} // namespace deco

#endif
