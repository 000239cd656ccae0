#include "deco/spectral.hpp"
#include "deco/errors.hpp"
#include "deco/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace deco {

namespace {

void require(bool cond, const char* msg) {
    if (!cond) throw std::invalid_argument(msg);
}

} // namespace

spectral_measure spectral_measure::discrete(std::vector<bath_mode> modes) {
    require(!modes.empty(), "discrete measure needs at least one mode");
    double mass = 0.0;
    for (const auto& m : modes) {
        require(m.frequency > 0.0, "mode frequencies must be strictly positive");
        require(m.weight >= 0.0, "mode weights must be non-negative");
        require(std::isfinite(m.frequency) && std::isfinite(m.weight),
                "mode parameters must be finite");
        mass += m.weight;
    }
    require(mass > 0.0, "total mass must be positive");
    std::sort(modes.begin(), modes.end(),
              [](const bath_mode& a, const bath_mode& b) { return a.frequency < b.frequency; });
    for (std::size_t i = 1; i < modes.size(); ++i)
        require(modes[i].frequency != modes[i - 1].frequency,
                "mode frequencies must be pairwise distinct");
    spectral_measure s;
    s.kind_ = kind_t::discrete;
    s.modes_ = std::move(modes);
    return s;
}

spectral_measure spectral_measure::power_law(double amplitude, double exponent, double cutoff) {
    require(amplitude > 0.0 && std::isfinite(amplitude), "amplitude must be positive");
    require(exponent >= 0.0 && std::isfinite(exponent), "exponent must be >= 0");
    require(cutoff > 0.0 && std::isfinite(cutoff), "cutoff must be positive");
    spectral_measure s;
    s.kind_ = kind_t::powerlaw;
    s.amplitude_ = amplitude;
    s.exponent_ = exponent;
    s.cutoff_ = cutoff;
    return s;
}

spectral_measure spectral_measure::tabulated(std::vector<double> grid, std::vector<double> density) {
    require(grid.size() >= 2, "tabulated density needs at least two grid points");
    require(grid.size() == density.size(), "grid and density sizes must match");
    require(grid.front() == 0.0, "tabulated grid must start at 0");
    for (std::size_t i = 1; i < grid.size(); ++i)
        require(grid[i] > grid[i - 1] && std::isfinite(grid[i]),
                "tabulated grid must be strictly increasing");
    double mass = 0.0;
    for (std::size_t i = 0; i < density.size(); ++i) {
        require(density[i] >= 0.0 && std::isfinite(density[i]),
                "density samples must be non-negative");
        if (i > 0) mass += 0.5 * (density[i] + density[i - 1]) * (grid[i] - grid[i - 1]);
    }
    require(mass > 0.0, "total mass must be positive");
    spectral_measure s;
    s.kind_ = kind_t::tabulated;
    s.grid_ = std::move(grid);
    s.samples_ = std::move(density);
    return s;
}

double spectral_measure::max_support() const {
    switch (kind_) {
    case kind_t::discrete: return modes_.back().frequency;
    case kind_t::powerlaw: return cutoff_;
    case kind_t::tabulated: return grid_.back();
    }
    return 0.0;
}

double spectral_measure::density(double lambda) const {
    switch (kind_) {
    case kind_t::discrete:
        throw std::logic_error("point measures have no density");
    case kind_t::powerlaw:
        if (lambda < 0.0 || lambda > cutoff_) return 0.0;
        return amplitude_ * std::pow(lambda, exponent_);
    case kind_t::tabulated: {
        if (lambda < 0.0 || lambda > grid_.back()) return 0.0;
        auto it = std::upper_bound(grid_.begin(), grid_.end(), lambda);
        std::size_t hi = std::min<std::size_t>(it - grid_.begin(), grid_.size() - 1);
        if (hi == 0) return samples_.front();
        std::size_t lo = hi - 1;
        double u = (lambda - grid_[lo]) / (grid_[hi] - grid_[lo]);
        return samples_[lo] + u * (samples_[hi] - samples_[lo]);
    }
    }
    return 0.0;
}

double spectral_measure::cumulative(double x) const {
    if (x <= 0.0) return 0.0;
    switch (kind_) {
    case kind_t::discrete: {
        double s = 0.0;
        for (const auto& m : modes_)
            if (m.frequency <= x) s += m.weight;
        return s;
    }
    case kind_t::powerlaw: {
        double xm = std::min(x, cutoff_);
        return amplitude_ * std::pow(xm, exponent_ + 1.0) / (exponent_ + 1.0);
    }
    case kind_t::tabulated: {
        double s = 0.0;
        for (std::size_t i = 1; i < grid_.size(); ++i) {
            double a = grid_[i - 1], b = grid_[i];
            if (a >= x) break;
            if (b <= x) {
                s += 0.5 * (samples_[i] + samples_[i - 1]) * (b - a);
            } else {
                double rho_x = density(x);
                s += 0.5 * (samples_[i - 1] + rho_x) * (x - a);
                break;
            }
        }
        return s;
    }
    }
    return 0.0;
}

std::vector<double> spectral_measure::density_breakpoints() const {
    if (kind_ != kind_t::tabulated) return {};
    return std::vector<double>(grid_.begin() + 1, grid_.end() - 1);
}

std::string spectral_measure::describe() const {
    std::ostringstream os;
    switch (kind_) {
    case kind_t::discrete: os << "discrete(n=" << modes_.size() << ")"; break;
    case kind_t::powerlaw:
        os << "powerlaw(c=" << amplitude_ << ",p=" << exponent_ << ",cutoff=" << cutoff_ << ")";
        break;
    case kind_t::tabulated: os << "tabulated(n=" << grid_.size() << ")"; break;
    }
    return os.str();
}

namespace {

// ∫_a^b λ^{-s} ρ(λ) dλ for the linear segment ρ(λ) = rho_a + slope·(λ-a).
// Segments touching 0 are handled in closed form; divergence is signalled
// with the extended marker.
extended_value segment_moment(double a, double b, double rho_a, double rho_b, int s) {
    double slope = (rho_b - rho_a) / (b - a);
    if (s == 0) return extended_value::finite(0.5 * (rho_a + rho_b) * (b - a));
    if (a == 0.0) {
        if (s == 1) {
            if (rho_a > 0.0) return extended_value::infinite();
            return extended_value::finite(slope * b);
        }
        // s == 2: diverges unless the density vanishes identically.
        if (rho_a > 0.0 || slope != 0.0) return extended_value::infinite();
        return extended_value::finite(0.0);
    }
    double c0 = rho_a - slope * a; // density = c0 + slope·λ
    if (s == 1) return extended_value::finite(c0 * std::log(b / a) + slope * (b - a));
    return extended_value::finite(c0 * (1.0 / a - 1.0 / b) + slope * std::log(b / a));
}

} // namespace

extended_value moment(const spectral_measure& m, int s) {
    if (s < 0 || s > 2) throw std::invalid_argument("moment order must be 0, 1 or 2");
    switch (m.kind()) {
    case spectral_measure::kind_t::discrete: {
        double sum = 0.0;
        for (const auto& md : m.modes()) sum += md.weight * std::pow(md.frequency, -s);
        return extended_value::finite(sum);
    }
    case spectral_measure::kind_t::powerlaw: {
        double q = m.exponent() - s + 1.0;
        if (q <= 0.0) return extended_value::infinite();
        return extended_value::finite(m.amplitude() * std::pow(m.cutoff(), q) / q);
    }
    case spectral_measure::kind_t::tabulated: {
        const auto& g = m.grid();
        const auto& r = m.density_samples();
        double sum = 0.0;
        for (std::size_t i = 1; i < g.size(); ++i) {
            auto part = segment_moment(g[i - 1], g[i], r[i - 1], r[i], s);
            if (part.divergent) return extended_value::infinite();
            sum += part.value;
        }
        return extended_value::finite(sum);
    }
    }
    return extended_value::infinite();
}

moment_report moments(const spectral_measure& m) {
    return {moment(m, 0), moment(m, 1), moment(m, 2)};
}

bool validate_coupling(const spectral_measure& m) {
    auto m1 = moment(m, 1);
    if (m1.divergent) return false;
    return 2.0 * std::sqrt(m1.value) <= 1.0;
}

const char* to_string(ir_class c) {
    switch (c) {
    case ir_class::regular: return "regular";
    case ir_class::ir_divergent: return "ir_divergent";
    case ir_class::ir_dominant: return "ir_dominant";
    }
    return "?";
}

namespace {

ir_class classify_tabulated(const spectral_measure& m, const ir_options& opt) {
    const auto& g = m.grid();
    const auto& r = m.density_samples();
    // Fit log ρ vs log λ over the lowest decade of positive grid points.
    double lo = g[1];
    std::vector<double> xs, ys;
    bool any_positive_density = false;
    for (std::size_t i = 1; i < g.size(); ++i) {
        if (g[i] > 10.0 * lo) break;
        if (r[i] > 0.0) {
            xs.push_back(std::log(g[i]));
            ys.push_back(std::log(r[i]));
        }
        any_positive_density = true;
    }
    if (!any_positive_density || xs.empty()) {
        // No mass in the lowest decade: support bounded away from 0.
        return ir_class::regular;
    }
    if (xs.size() < 3)
        throw inconclusive_classification(
            "tabulated measure has fewer than 3 usable samples in the lowest decade");

    std::size_t n = xs.size();
    double xbar = 0.0, ybar = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        xbar += xs[i];
        ybar += ys[i];
    }
    xbar /= n;
    ybar /= n;
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sxx += (xs[i] - xbar) * (xs[i] - xbar);
        sxy += (xs[i] - xbar) * (ys[i] - ybar);
    }
    if (sxx == 0.0)
        throw inconclusive_classification("degenerate low-end grid for exponent fit");
    double slope = sxy / sxx;
    double intercept = ybar - slope * xbar;
    double ss = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double res = ys[i] - (intercept + slope * xs[i]);
        ss += res * res;
    }
    double resid95 = 2.0 * std::sqrt(ss / std::max<std::size_t>(n - 2, 1));
    if (resid95 > opt.residual_tol)
        throw inconclusive_classification(
            "low-end power-law fit residual above tolerance; refine the grid near 0");

    if (slope < 1.0 - opt.fit_tol) return ir_class::ir_dominant;
    if (slope <= 1.0 + opt.fit_tol) return ir_class::ir_divergent;
    return ir_class::regular;
}

ir_class classify_discrete(const spectral_measure& m, const ir_options& opt) {
    const auto& modes = m.modes(); // sorted by frequency at construction
    if (static_cast<int>(modes.size()) >= opt.sample_count) {
        // Accumulation-point proxy: λ^{-2}σ_h(λ) along the smallest mode
        // frequencies, λ decreasing, must grow strictly and by a large factor.
        std::vector<double> ratio;
        double cum = 0.0;
        for (int i = 0; i < opt.sample_count; ++i) cum += modes[i].weight;
        for (int i = opt.sample_count - 1; i >= 0; --i) {
            double lam = modes[i].frequency;
            ratio.push_back(cum / (lam * lam));
            cum -= modes[i].weight;
        }
        bool increasing = true;
        for (std::size_t i = 1; i < ratio.size(); ++i)
            if (!(ratio[i] > ratio[i - 1])) {
                increasing = false;
                break;
            }
        if (increasing && ratio.front() > 0.0 &&
            ratio.back() > opt.growth_factor * ratio.front())
            return ir_class::ir_dominant;
    }
    return ir_class::regular; // finitely many modes above 0: m2 < infinity
}

} // namespace

ir_class classify_ir(const spectral_measure& m, const ir_options& opt) {
    switch (m.kind()) {
    case spectral_measure::kind_t::powerlaw: {
        double p = m.exponent();
        if (p < 1.0) return ir_class::ir_dominant;
        if (p == 1.0) return ir_class::ir_divergent;
        return ir_class::regular;
    }
    case spectral_measure::kind_t::discrete:
        return classify_discrete(m, opt);
    case spectral_measure::kind_t::tabulated:
        return classify_tabulated(m, opt);
    }
    return ir_class::regular;
}

} // namespace deco
