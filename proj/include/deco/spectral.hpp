#ifndef DECO_SPECTRAL_HPP
#define DECO_SPECTRAL_HPP

#include <string>
#include <vector>

namespace deco {

/// One bath mode: frequency ω > 0 and weight w = g² ≥ 0.
struct bath_mode {
    double frequency = 0.0;
    double weight = 0.0;
};

/// Energy distribution dσ_h(λ) of the coupling vector: a finite point
/// measure, a power-law density c·λ^p on [0,Λ], or a piecewise-linear
/// tabulated density. Immutable after construction; construction validates
/// the invariants (positive frequencies, non-negative weights/densities,
/// finite positive total mass).
class spectral_measure {
public:
    enum class kind_t { discrete, powerlaw, tabulated };

    static spectral_measure discrete(std::vector<bath_mode> modes);
    static spectral_measure power_law(double amplitude, double exponent, double cutoff);
    static spectral_measure tabulated(std::vector<double> grid, std::vector<double> density);

    kind_t kind() const { return kind_; }
    bool is_density() const { return kind_ != kind_t::discrete; }

    const std::vector<bath_mode>& modes() const { return modes_; }
    double amplitude() const { return amplitude_; }
    double exponent() const { return exponent_; }
    double cutoff() const { return cutoff_; }
    const std::vector<double>& grid() const { return grid_; }
    const std::vector<double>& density_samples() const { return samples_; }

    /// Supremum of the support (Λ for densities, max ω for point measures).
    double max_support() const;
    /// σ_h(x): mass of [0, x].
    double cumulative(double x) const;
    /// Density value at λ (density kinds only).
    double density(double lambda) const;
    /// Interior kink locations, used to seed quadrature panels.
    std::vector<double> density_breakpoints() const;

    std::string describe() const;

private:
    spectral_measure() = default;
    kind_t kind_ = kind_t::discrete;
    std::vector<bath_mode> modes_;
    double amplitude_ = 0.0, exponent_ = 0.0, cutoff_ = 0.0;
    std::vector<double> grid_, samples_;
};

/// Moment value on the extended half-line: either finite or divergent.
/// Divergence is an explicit marker, never an IEEE infinity.
struct extended_value {
    double value = 0.0;
    bool divergent = false;
    static extended_value finite(double v) { return {v, false}; }
    static extended_value infinite() { return {0.0, true}; }
    bool is_finite() const { return !divergent; }
};

struct moment_report {
    extended_value m0, m1, m2;
};

/// ∫ λ^{-s} dσ_h(λ) for s ∈ {0,1,2}.
extended_value moment(const spectral_measure& m, int s);
moment_report moments(const spectral_measure& m);

/// Coupling admissibility 2‖M^{-1/2}h‖ ≤ 1, i.e. 2·sqrt(m1) ≤ 1.
bool validate_coupling(const spectral_measure& m);

enum class ir_class { regular, ir_divergent, ir_dominant };
const char* to_string(ir_class c);

struct ir_options {
    double fit_tol = 0.05;       // band around exponent 1 for tabulated fits
    double residual_tol = 0.1;   // max 95% fit residual (log units) before giving up
    double growth_factor = 1e3;  // required ratio growth for accumulation baths
    int sample_count = 10;       // modes sampled from below (discrete heuristic)
};

/// Low-frequency classification. Regular ⇔ m2 < ∞ for discrete and
/// power-law measures; tabulated densities are classified by a log-log fit
/// of the samples over the lowest decade, discrete accumulation-point baths
/// by monotone growth of λ^{-2}σ_h(λ) along the smallest mode frequencies.
/// Throws inconclusive_classification when a tabulated fit is too poor.
ir_class classify_ir(const spectral_measure& m, const ir_options& opt = {});

} // namespace deco

#endif
