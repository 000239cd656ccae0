#include "deco/kernels.hpp"

#include <cmath>
#include <utility>
#include <vector>

namespace deco {

vanhove_kernel::vanhove_kernel(spectral_measure measure, reference_state ref, quad_options opt)
    : measure_(std::move(measure)), ref_(std::move(ref)), opt_(opt) {}

dephasing_kernel::snapshot vanhove_kernel::at(double t) const {
    double ps = psi(measure_, t, opt_);
    auto parts = compute_phase_parts(measure_, t, true, opt_);
    struct comp {
        double p;
        double g; // Im(ζ̄W) = -Re(ζ)s1 - Im(ζ)p1
    };
    std::vector<comp> comps;
    for (const auto& c : ref_.components())
        comps.push_back({c.probability,
                         -c.zeta.real() * parts.s1 - c.zeta.imag() * parts.p1});
    double k = parts.m1 * t - parts.s2;

    snapshot snap;
    snap.psi = ps;
    snap.chi = [ps, k, comps](double alpha, double beta) {
        double d = alpha - beta;
        double amp = std::exp(-0.5 * d * d * ps);
        cplx mix{0.0, 0.0};
        for (const auto& c : comps) {
            double phase = 2.0 * d * c.g + (alpha * alpha - beta * beta) * k;
            mix += c.p * std::exp(cplx(0.0, -phase));
        }
        return amp * mix;
    };
    snap.deriv_mag = [ps, k, comps](double alpha, double beta) {
        double d = alpha - beta;
        double amp = std::exp(-0.5 * d * d * ps);
        double total = 0.0;
        for (const auto& c : comps) {
            double dphi_b = std::abs(-2.0 * c.g - 2.0 * beta * k);
            double dphi_a = std::abs(2.0 * c.g + 2.0 * alpha * k);
            total += c.p * (std::abs(d) * ps + std::max(dphi_a, dphi_b));
        }
        return amp * total;
    };
    return snap;
}

std::string vanhove_kernel::describe() const {
    return "vanhove[" + measure_.describe() + "," + ref_.describe() + "]";
}

gaussian_kernel::gaussian_kernel(double mean, double sigma) : mean_(mean), sigma_(sigma) {}

dephasing_kernel::snapshot gaussian_kernel::at(double t) const {
    double m = mean_, sg = sigma_;
    snapshot snap;
    snap.psi = t * t;
    snap.chi = [m, sg, t](double alpha, double beta) {
        double s = (alpha - beta) * t;
        return std::exp(cplx(-0.5 * sg * sg * s * s, m * s));
    };
    snap.deriv_mag = [m, sg, t](double alpha, double beta) {
        double s = (alpha - beta) * t;
        double mod = std::exp(-0.5 * sg * sg * s * s);
        return t * std::hypot(sg * sg * s, m) * mod;
    };
    return snap;
}

std::string gaussian_kernel::describe() const {
    return "gaussian[mean=" + std::to_string(mean_) + ",sigma=" + std::to_string(sigma_) + "]";
}

} // namespace deco
