#include "deco/decoherence.hpp"
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

// Breakpoints for oscillatory integrands over [0, upper]: the density kinks
// merged with the zeros k·spacing of the trigonometric factor.
std::vector<double> oscillation_breaks(const spectral_measure& m, double upper,
                                       double spacing, const quad_options& opt) {
    std::vector<double> breaks = m.density_breakpoints();
    if (spacing > 0.0) {
        double count = upper / spacing;
        if (count > static_cast<double>(opt.max_evals) / 15.0)
            throw quadrature_error("oscillation count exceeds the evaluation budget",
                                   0.0, 0);
        for (double z = spacing; z < upper; z += spacing) breaks.push_back(z);
    }
    return breaks;
}

} // namespace

reference_state reference_state::vacuum() {
    reference_state r;
    r.components_.push_back({1.0, cplx{0.0, 0.0}});
    return r;
}

reference_state reference_state::coherent(cplx zeta) {
    reference_state r;
    r.components_.push_back({1.0, zeta});
    return r;
}

reference_state reference_state::mixture(std::vector<component> components) {
    require(!components.empty(), "mixture needs at least one component");
    double total = 0.0;
    for (const auto& c : components) {
        require(c.probability > 0.0, "mixture probabilities must be positive");
        total += c.probability;
    }
    require(std::abs(total - 1.0) <= 1e-12, "mixture probabilities must sum to 1");
    reference_state r;
    r.components_ = std::move(components);
    return r;
}

std::string reference_state::describe() const {
    if (is_vacuum()) return "vacuum";
    std::ostringstream os;
    if (!is_mixture()) {
        os << "coherent(zeta=" << components_[0].zeta.real() << "+"
           << components_[0].zeta.imag() << "i)";
    } else {
        os << "mixture(n=" << components_.size() << ")";
    }
    return os.str();
}

double psi(const spectral_measure& m, double t, const quad_options& opt) {
    require(t >= 0.0, "psi requires t >= 0");
    if (t == 0.0) return 0.0;
    if (m.kind() == spectral_measure::kind_t::discrete) {
        double sum = 0.0;
        for (const auto& md : m.modes()) {
            double s = std::sin(0.5 * md.frequency * t);
            sum += 4.0 * md.weight * s * s / (md.frequency * md.frequency);
        }
        return sum;
    }
    // 4 sin²(λt/2)/λ² = t²·sinc²(λt/2): bounded at λ=0, panels between the
    // zeros 2πk/t keep the adaptive subdivision linear in t.
    double upper = m.max_support();
    auto breaks = oscillation_breaks(m, upper, 2.0 * pi / t, opt);
    auto f = [&](double lam) {
        double s = detail::sinc(0.5 * lam * t);
        return m.density(lam) * t * t * s * s;
    };
    return integrate_adaptive(f, 0.0, upper, opt, std::move(breaks)).value;
}

phase_parts compute_phase_parts(const spectral_measure& m, double t, bool need_m1_terms,
                                const quad_options& opt) {
    phase_parts parts;
    if (m.kind() == spectral_measure::kind_t::discrete) {
        for (const auto& md : m.modes()) {
            double w = md.weight, om = md.frequency;
            double sh = std::sin(0.5 * om * t);
            parts.p1 += 2.0 * w * sh * sh / om;
            parts.s1 += w * std::sin(om * t) / om;
            if (need_m1_terms) {
                parts.m1 += w / om;
                parts.s2 += w * std::sin(om * t) / (om * om);
            }
        }
        return parts;
    }

    if (need_m1_terms) {
        auto m1 = moment(m, 1);
        if (m1.divergent)
            throw std::invalid_argument(
                "phase requires a finite first inverse moment of the measure");
        parts.m1 = m1.value;
    }
    if (t == 0.0) return parts;

    double upper = m.max_support();
    {
        auto breaks = oscillation_breaks(m, upper, 2.0 * pi / t, opt);
        auto f = [&](double lam) { // 2 sin²(λt/2)/λ = (t²λ/2)·sinc²(λt/2)
            double s = detail::sinc(0.5 * lam * t);
            return m.density(lam) * 0.5 * t * t * lam * s * s;
        };
        parts.p1 = integrate_adaptive(f, 0.0, upper, opt, std::move(breaks)).value;
    }
    {
        auto breaks = oscillation_breaks(m, upper, pi / t, opt);
        auto f = [&](double lam) { // sin(λt)/λ = t·sinc(λt)
            return m.density(lam) * t * detail::sinc(lam * t);
        };
        parts.s1 = integrate_adaptive(f, 0.0, upper, opt, std::move(breaks)).value;
    }
    if (need_m1_terms) {
        auto breaks = oscillation_breaks(m, upper, pi / t, opt);
        auto f = [&](double lam) { // sin(λt)/λ² = t·sinc(λt)/λ
            return m.density(lam) * t * detail::sinc(lam * t) / lam;
        };
        parts.s2 = integrate_adaptive(f, 0.0, upper, opt, std::move(breaks)).value;
    }
    return parts;
}

namespace {

double phase_from_parts(const phase_parts& parts, double alpha, double beta, cplx zeta,
                        double t) {
    // Im(ζ̄·W) with W = p1 − i·s1.
    double im_zw = -zeta.real() * parts.s1 - zeta.imag() * parts.p1;
    return 2.0 * (alpha - beta) * im_zw +
           (alpha * alpha - beta * beta) * (parts.m1 * t - parts.s2);
}

} // namespace

double phase_phi(const spectral_measure& m, double alpha, double beta,
                 const reference_state& ref, double t, const quad_options& opt) {
    require(t >= 0.0, "phase requires t >= 0");
    require(!ref.is_mixture(), "mixtures are handled at the chi level");
    if (alpha == beta) return 0.0; // both prefactors vanish
    bool need_m1 = (alpha * alpha != beta * beta);
    auto parts = compute_phase_parts(m, t, need_m1, opt);
    return phase_from_parts(parts, alpha, beta, ref.components()[0].zeta, t);
}

cplx chi(const spectral_measure& m, double alpha, double beta,
         const reference_state& ref, double t, const quad_options& opt) {
    require(t >= 0.0, "chi requires t >= 0");
    if (alpha == beta) return cplx{1.0, 0.0};
    double d = alpha - beta;
    double amp = std::exp(-0.5 * d * d * psi(m, t, opt));
    bool need_m1 = (alpha * alpha != beta * beta);
    auto parts = compute_phase_parts(m, t, need_m1, opt);
    cplx mix{0.0, 0.0};
    for (const auto& c : ref.components()) {
        double ph = phase_from_parts(parts, alpha, beta, c.zeta, t);
        mix += c.probability * std::exp(cplx{0.0, -ph});
    }
    return amp * mix;
}

namespace {

decoherence_curve curve_impl(const spectral_measure& m, double alpha, double beta,
                             const reference_state& ref, const std::vector<double>& times,
                             const quad_options& opt, bool parallel) {
    require(!times.empty(), "time grid must be non-empty");
    require(times.front() >= 0.0, "time grid must be non-negative");
    for (std::size_t i = 1; i < times.size(); ++i)
        require(times[i] > times[i - 1], "time grid must be strictly ascending");

    decoherence_curve c;
    c.times = times;
    c.psi.resize(times.size());
    c.phi.resize(times.size());
    c.chi.resize(times.size());
    c.params = {alpha, beta, m.describe(), ref.describe()};

    const double d = alpha - beta;
    const bool need_m1 = (alpha * alpha != beta * beta);
    auto eval = [&](std::size_t j) {
        double t = times[j];
        double ps = psi(m, t, opt);
        c.psi[j] = ps;
        if (alpha == beta) {
            c.phi[j] = 0.0;
            c.chi[j] = cplx{1.0, 0.0};
            return;
        }
        auto parts = compute_phase_parts(m, t, need_m1, opt);
        double amp = std::exp(-0.5 * d * d * ps);
        if (!ref.is_mixture()) {
            double ph = phase_from_parts(parts, alpha, beta, ref.components()[0].zeta, t);
            c.phi[j] = ph;
            c.chi[j] = amp * std::exp(cplx{0.0, -ph});
        } else {
            cplx mix{0.0, 0.0};
            for (const auto& comp : ref.components()) {
                double ph = phase_from_parts(parts, alpha, beta, comp.zeta, t);
                mix += comp.probability * std::exp(cplx{0.0, -ph});
            }
            c.chi[j] = amp * mix;
            c.phi[j] = -std::arg(mix); // effective (wrapped) phase of the mixture
        }
    };
    if (parallel)
        parallel_for(times.size(), eval);
    else
        serial_for(times.size(), eval);
    return c;
}

} // namespace

decoherence_curve curve(const spectral_measure& m, double alpha, double beta,
                        const reference_state& ref, const std::vector<double>& times,
                        const quad_options& opt) {
    return curve_impl(m, alpha, beta, ref, times, opt, true);
}

decoherence_curve curve_serial(const spectral_measure& m, double alpha, double beta,
                               const reference_state& ref, const std::vector<double>& times,
                               const quad_options& opt) {
    return curve_impl(m, alpha, beta, ref, times, opt, false);
}

slope_fit asymptotic_exponent(const spectral_measure& m, double t_lo, double t_hi,
                              int n_samples, const quad_options& opt) {
    require(classify_ir(m) != ir_class::regular,
            "asymptotic exponent is undefined for regular measures (psi stays bounded)");
    require(t_lo > 0.0 && t_hi > t_lo, "need 0 < t_lo < t_hi");
    require(n_samples >= 8, "need at least 8 samples");

    std::vector<double> ts(n_samples), ys(n_samples);
    double step = std::log(t_hi / t_lo) / (n_samples - 1);
    for (int i = 0; i < n_samples; ++i) ts[i] = t_lo * std::exp(step * i);
    parallel_for(static_cast<std::size_t>(n_samples),
                 [&](std::size_t i) { ys[i] = std::log(psi(m, ts[i], opt)); });

    double xbar = 0.0, ybar = 0.0;
    for (int i = 0; i < n_samples; ++i) {
        xbar += std::log(ts[i]);
        ybar += ys[i];
    }
    xbar /= n_samples;
    ybar /= n_samples;
    double sxx = 0.0, sxy = 0.0;
    for (int i = 0; i < n_samples; ++i) {
        double dx = std::log(ts[i]) - xbar;
        sxx += dx * dx;
        sxy += dx * (ys[i] - ybar);
    }
    double slope = sxy / sxx;
    double ss = 0.0;
    for (int i = 0; i < n_samples; ++i) {
        double r = ys[i] - ybar - slope * (std::log(ts[i]) - xbar);
        ss += r * r;
    }
    double se = std::sqrt(ss / std::max(n_samples - 2, 1) / sxx);
    return {slope, se};
}

std::vector<double> recurrence_scan(const spectral_measure& m, double horizon,
                                    double threshold) {
    require(m.kind() == spectral_measure::kind_t::discrete,
            "recurrence scan applies to point measures");
    require(horizon > 0.0 && threshold > 0.0, "horizon and threshold must be positive");

    auto psi_of = [&](double t) {
        double sum = 0.0;
        for (const auto& md : m.modes()) {
            double s = std::sin(0.5 * md.frequency * t);
            sum += 4.0 * md.weight * s * s / (md.frequency * md.frequency);
        }
        return sum;
    };

    double omega_max = m.modes().back().frequency;
    double step = (2.0 * pi / omega_max) / 64.0;
    std::size_t n = static_cast<std::size_t>(std::ceil(horizon / step)) + 1;
    std::vector<double> vals(n);
    for (std::size_t i = 0; i < n; ++i) vals[i] = psi_of(std::min(i * step, horizon));

    auto golden_refine = [&](double a, double b) {
        const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
        double x1 = b - invphi * (b - a), x2 = a + invphi * (b - a);
        double f1 = psi_of(x1), f2 = psi_of(x2);
        double tol = 1e-11 * std::max(1.0, b);
        while (b - a > tol) {
            if (f1 < f2) {
                b = x2;
                x2 = x1;
                f2 = f1;
                x1 = b - invphi * (b - a);
                f1 = psi_of(x1);
            } else {
                a = x1;
                x1 = x2;
                f1 = f2;
                x2 = a + invphi * (b - a);
                f2 = psi_of(x2);
            }
        }
        return 0.5 * (a + b);
    };

    std::vector<double> found;
    for (std::size_t i = 1; i + 1 < n; ++i) {
        if (vals[i] <= vals[i - 1] && vals[i] <= vals[i + 1]) {
            double t = golden_refine((i - 1) * step, std::min((i + 1) * step, horizon));
            if (t > 0.5 * step && t <= horizon && psi_of(t) < threshold) {
                if (found.empty() || t - found.back() > 0.5 * step) found.push_back(t);
            }
        }
    }
    return found;
}

} // namespace deco
