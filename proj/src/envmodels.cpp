#include "deco/envmodels.hpp"
#include "deco/errors.hpp"
#include "deco/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace deco {

namespace {

constexpr double pi = std::numbers::pi;

void require(bool cond, const char* msg) {
    if (!cond) throw std::invalid_argument(msg);
}

double bump_profile(double u) { // C-infinity bump on (-1,1)
    if (u <= -1.0 || u >= 1.0) return 0.0;
    return std::exp(-1.0 / (1.0 - u * u));
}

} // namespace

fourier_environment fourier_environment::gaussian(double mean, double sigma) {
    require(sigma > 0.0 && std::isfinite(sigma) && std::isfinite(mean),
            "gaussian preset needs finite mean and positive sigma");
    fourier_environment e;
    e.preset_ = preset_t::gaussian;
    e.mean_ = mean;
    e.sigma_ = sigma;
    e.lower_ = mean - 8.0 * sigma;
    e.upper_ = mean + 8.0 * sigma;
    e.norm_ = std::erf(8.0 / std::sqrt(2.0)); // mass inside ±8σ
    return e;
}

fourier_environment fourier_environment::smooth_bump(double center, double width) {
    require(width > 0.0 && std::isfinite(width) && std::isfinite(center),
            "bump preset needs finite center and positive width");
    fourier_environment e;
    e.preset_ = preset_t::bump;
    e.center_ = center;
    e.width_ = width;
    e.lower_ = center - width;
    e.upper_ = center + width;
    // ∫_{-1}^{1} e^{-1/(1-u²)} du, fixed profile constant.
    quad_options tight{1e-13, 0.0, 100000};
    e.norm_ = width * integrate_adaptive(bump_profile, -1.0, 1.0, tight).value;
    return e;
}

fourier_environment fourier_environment::piecewise_linear(std::vector<double> grid,
                                                          std::vector<double> density) {
    require(grid.size() >= 2 && grid.size() == density.size(),
            "piecewise density needs matching grid/density with >= 2 points");
    for (std::size_t i = 1; i < grid.size(); ++i)
        require(grid[i] > grid[i - 1], "grid must be strictly increasing");
    double mass = 0.0;
    for (std::size_t i = 1; i < grid.size(); ++i) {
        require(density[i] >= 0.0 && density[i - 1] >= 0.0, "density must be non-negative");
        mass += 0.5 * (density[i] + density[i - 1]) * (grid[i] - grid[i - 1]);
    }
    require(mass > 0.0, "density must have positive mass");
    fourier_environment e;
    e.preset_ = preset_t::none;
    e.lower_ = grid.front();
    e.upper_ = grid.back();
    e.norm_ = mass;
    e.grid_ = std::move(grid);
    e.samples_ = std::move(density);
    return e;
}

double fourier_environment::density(double lambda) const {
    if (lambda < lower_ || lambda > upper_) return 0.0;
    switch (preset_) {
    case preset_t::gaussian: {
        double z = (lambda - mean_) / sigma_;
        return std::exp(-0.5 * z * z) / (sigma_ * std::sqrt(2.0 * pi)) / norm_;
    }
    case preset_t::bump:
        return bump_profile((lambda - center_) / width_) / norm_;
    case preset_t::none: {
        auto it = std::upper_bound(grid_.begin(), grid_.end(), lambda);
        std::size_t hi = std::min<std::size_t>(it - grid_.begin(), grid_.size() - 1);
        if (hi == 0) return samples_.front() / norm_;
        std::size_t lo = hi - 1;
        double u = (lambda - grid_[lo]) / (grid_[hi] - grid_[lo]);
        return (samples_[lo] + u * (samples_[hi] - samples_[lo])) / norm_;
    }
    }
    return 0.0;
}

std::vector<double> fourier_environment::breakpoints() const {
    if (preset_ != preset_t::none || grid_.size() <= 2) return {};
    return std::vector<double>(grid_.begin() + 1, grid_.end() - 1);
}

std::string fourier_environment::describe() const {
    std::ostringstream os;
    switch (preset_) {
    case preset_t::gaussian: os << "gaussian(mean=" << mean_ << ",sigma=" << sigma_ << ")"; break;
    case preset_t::bump: os << "smooth_bump(center=" << center_ << ",width=" << width_ << ")"; break;
    case preset_t::none: os << "piecewise(n=" << grid_.size() << ")"; break;
    }
    return os.str();
}

std::complex<double> chi_fourier(const fourier_environment& env, double s, int n,
                                 const quad_options& opt) {
    require(n == 0 || n == 1, "only derivatives of order 0 and 1 are supported");
    double a = env.lower(), b = env.upper();
    std::vector<double> breaks = env.breakpoints();
    if (s != 0.0) {
        double spacing = pi / std::abs(s);
        double count = (b - a) / spacing;
        if (count > static_cast<double>(opt.max_evals) / 15.0)
            throw quadrature_error("oscillation count exceeds the evaluation budget", 0.0, 0);
        double z0 = std::ceil(a / spacing) * spacing;
        for (double z = z0; z < b; z += spacing)
            if (z > a) breaks.push_back(z);
    }
    auto re = [&](double lam) {
        double v = env.density(lam);
        double base = std::cos(lam * s);
        return n == 0 ? v * base : -v * lam * std::sin(lam * s);
    };
    auto im = [&](double lam) {
        double v = env.density(lam);
        return n == 0 ? v * std::sin(lam * s) : v * lam * std::cos(lam * s);
    };
    double r = integrate_adaptive(re, a, b, opt, breaks).value;
    double i = integrate_adaptive(im, a, b, opt, breaks).value;
    return {r, i};
}

decay_fit_result decay_fit(const fourier_environment& env, double gamma,
                           const std::vector<double>& s_grid, const quad_options& opt) {
    require(gamma > 0.0, "gamma must be positive");
    require(s_grid.size() >= 4, "decay fit needs a grid of at least 4 points");

    // Moduli below the quadrature resolution are indistinguishable from 0
    // and must not feed the growth detector through the (1+s²)^γ weight.
    const double mod_floor = 1e-13;
    std::vector<double> weighted(s_grid.size());
    parallel_for(s_grid.size(), [&](std::size_t i) {
        double s = s_grid[i];
        double mod = std::abs(chi_fourier(env, s, 0, opt));
        if (mod < mod_floor) mod = 0.0;
        weighted[i] = mod * std::pow(1.0 + s * s, gamma);
    });

    decay_fit_result out;
    std::size_t imax = 0;
    for (std::size_t i = 0; i < weighted.size(); ++i)
        if (weighted[i] > weighted[imax]) imax = i;
    out.c_gamma = weighted[imax];
    out.argmax_s = s_grid[imax];

    // Growth flag: the weighted modulus near the top of the grid still beats
    // the mid-grid values, so extending the grid would raise C.
    std::size_t n = weighted.size();
    double top = 0.0, mid = 0.0;
    for (std::size_t i = (4 * n) / 5; i < n; ++i) top = std::max(top, weighted[i]);
    for (std::size_t i = (2 * n) / 5; i < (3 * n) / 5; ++i) mid = std::max(mid, weighted[i]);
    out.growing = top > mid;
    return out;
}

} // namespace deco
