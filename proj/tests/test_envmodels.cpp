#include "deco/envmodels.hpp"
#include "deco/errors.hpp"
#include "helpers.hpp"

#include <doctest.h>

#include <cmath>

using namespace deco;
using cplx = std::complex<double>;

TEST_CASE("gaussian preset matches the analytic transform") {
    auto env = fourier_environment::gaussian(0.0, 1.0);
    for (double s : {0.0, 0.5, 2.0, 5.0, 8.0}) {
        cplx v = chi_fourier(env, s, 0);
        CHECK(std::abs(v - cplx(std::exp(-0.5 * s * s), 0.0)) < 1e-8);
    }
}

TEST_CASE("normalization and mean-shift invariance") {
    auto env = fourier_environment::gaussian(2.5, 0.7);
    CHECK(std::abs(chi_fourier(env, 0.0, 0) - cplx(1.0, 0.0)) < 1e-10);
    auto centered = fourier_environment::gaussian(0.0, 0.7);
    for (double s : {0.3, 1.1, 4.0})
        CHECK(std::abs(chi_fourier(env, s, 0)) ==
              doctest::Approx(std::abs(chi_fourier(centered, s, 0))).epsilon(1e-9));
}

TEST_CASE("derivative channel matches central differences") {
    auto env = fourier_environment::smooth_bump(1.0, 0.5);
    quad_options tight;
    tight.rel_tol = 1e-12;
    double h = 1e-4;
    for (int i = 0; i < 20; ++i) {
        double s = 0.2 + 0.37 * i;
        cplx d1 = chi_fourier(env, s, 1, tight);
        cplx fd = (chi_fourier(env, s + h, 0, tight) - chi_fourier(env, s - h, 0, tight)) /
                  (2.0 * h);
        CHECK(std::abs(d1 - fd) < 1e-6);
    }
}

TEST_CASE("riemann-lebesgue decay for the smooth presets") {
    for (auto env : {fourier_environment::gaussian(0.0, 1.0),
                     fourier_environment::smooth_bump(0.0, 1.0)}) {
        double prev = 1e300;
        double s0 = 2.0;
        for (int doubling = 0; doubling < 4; ++doubling) {
            double worst = 0.0;
            for (int k = 0; k <= 16; ++k) {
                double s = s0 + (s0 * k) / 16.0; // s in [s0, 2 s0]
                worst = std::max(worst, std::abs(chi_fourier(env, s, 0)));
            }
            CHECK(worst < prev);
            prev = worst;
            s0 *= 2.0;
        }
    }
}

TEST_CASE("decay fit: smooth presets admit finite constants") {
    auto grid = testhelp::linspace(0.0, 20.0, 200);
    auto g = decay_fit(fourier_environment::gaussian(0.0, 1.0), 2.0, grid);
    CHECK(g.c_gamma >= 1.0); // chi(0) = 1 forces C >= 1
    CHECK_FALSE(g.growing);

    auto b = decay_fit(fourier_environment::smooth_bump(0.0, 1.0), 5.0, grid);
    CHECK(b.c_gamma >= 1.0);
    CHECK(std::isfinite(b.c_gamma));
}

TEST_CASE("hard-edged uniform density cannot sustain gamma = 2") {
    auto uniform = fourier_environment::piecewise_linear({-1.0, 1.0}, {0.5, 0.5});
    auto grid = testhelp::linspace(0.0, 200.0, 600);
    auto fit = decay_fit(uniform, 2.0, grid);
    CHECK(fit.growing); // |chi| ~ 1/s, so C(1+s^2)^{-2} coverage keeps growing
    CHECK(fit.argmax_s > 150.0);
}

TEST_CASE("piecewise density against the Simpson reference") {
    auto env = fourier_environment::piecewise_linear({0.0, 0.5, 1.0}, {0.0, 2.0, 0.0});
    double s = 3.7;
    cplx v = chi_fourier(env, s, 0);
    double re = testhelp::simpson([&](double l) { return env.density(l) * std::cos(l * s); },
                                  0.0, 1.0, 200000);
    double im = testhelp::simpson([&](double l) { return env.density(l) * std::sin(l * s); },
                                  0.0, 1.0, 200000);
    CHECK(std::abs(v - cplx(re, im)) < 1e-9);
}

TEST_CASE("modulus is bounded by one") {
    auto env = fourier_environment::smooth_bump(2.0, 0.8);
    for (double s : {0.0, 1.0, 7.7, 31.0})
        CHECK(std::abs(chi_fourier(env, s, 0)) <= 1.0 + 1e-12);
}
