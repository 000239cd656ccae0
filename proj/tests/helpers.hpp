#ifndef DECO_TEST_HELPERS_HPP
#define DECO_TEST_HELPERS_HPP

#include "deco/spectral.hpp"

#include <cmath>
#include <functional>
#include <random>
#include <vector>

namespace testhelp {

/// Composite Simpson rule: the independent reference integrator used to
/// cross-check the adaptive scheme. Deliberately unrelated to the
/// Gauss-Kronrod path in the library.
inline double simpson(const std::function<double(double)>& f, double a, double b, int n) {
    if (n % 2 == 1) ++n;
    double h = (b - a) / n;
    double s = f(a) + f(b);
    for (int i = 1; i < n; ++i) s += f(a + i * h) * (i % 2 == 1 ? 4.0 : 2.0);
    return s * h / 3.0;
}

/// Narrow triangular-bump tabulated approximation of a point measure:
/// each mode (ω, w) becomes a triangle of area w and base `width` at ω.
inline deco::spectral_measure bump_approximation(const deco::spectral_measure& m, double width) {
    std::vector<double> grid{0.0}, density{0.0};
    for (const auto& md : m.modes()) {
        double lo = md.frequency - 0.5 * width;
        double hi = md.frequency + 0.5 * width;
        grid.push_back(lo);
        density.push_back(0.0);
        grid.push_back(md.frequency);
        density.push_back(2.0 * md.weight / width);
        grid.push_back(hi);
        density.push_back(0.0);
    }
    return deco::spectral_measure::tabulated(std::move(grid), std::move(density));
}

inline std::vector<double> linspace(double a, double b, int n) {
    std::vector<double> v(n);
    for (int i = 0; i < n; ++i) v[i] = n == 1 ? a : a + (b - a) * i / (n - 1);
    return v;
}

/// Random measure with compact support in (0, omega_max], bounded mode count.
inline deco::spectral_measure random_discrete(std::mt19937_64& rng, int max_modes = 8,
                                              double omega_max = 5.0) {
    std::uniform_int_distribution<int> nd(1, max_modes);
    std::uniform_real_distribution<double> om(0.05, omega_max), wd(0.01, 2.0);
    int n = nd(rng);
    std::vector<deco::bath_mode> modes;
    for (int i = 0; i < n; ++i) modes.push_back({om(rng), wd(rng)});
    std::sort(modes.begin(), modes.end(), [](const deco::bath_mode& a, const deco::bath_mode& b) {
        return a.frequency < b.frequency;
    });
    // nudge duplicates apart
    for (std::size_t i = 1; i < modes.size(); ++i)
        if (modes[i].frequency <= modes[i - 1].frequency)
            modes[i].frequency = modes[i - 1].frequency * (1.0 + 1e-9) + 1e-12;
    return deco::spectral_measure::discrete(std::move(modes));
}

} // namespace testhelp

#endif
