#include "deco/decoherence.hpp"
#include "deco/errors.hpp"
#include "helpers.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

using namespace deco;
namespace {
constexpr double pi = std::numbers::pi;
}

TEST_CASE("psi closed form for point measures") {
    auto m = spectral_measure::discrete({{1.0, 1.0}});
    CHECK(psi(m, pi) == doctest::Approx(4.0).epsilon(1e-14));
    CHECK(psi(m, 0.0) == 0.0);
    CHECK(psi(m, 2.0 * pi) == doctest::Approx(0.0).epsilon(1e-14)); // periodic return
}

TEST_CASE("psi for the flat measure approaches pi*t") {
    auto flat = spectral_measure::power_law(1.0, 0.0, 10.0);
    double v = psi(flat, 100.0);
    CHECK(v / (pi * 100.0) == doctest::Approx(1.0).epsilon(0.01));
    CHECK(psi(flat, 0.0) == 0.0);
}

TEST_CASE("density path reproduces closed-form psi through narrow bumps") {
    auto disc = spectral_measure::discrete({{1.0, 0.4}, {2.5, 0.8}});
    auto bumps = testhelp::bump_approximation(disc, 1e-4);
    for (double t : {0.5, 3.0, 11.0, 20.0}) {
        double closed = psi(disc, t);
        double quad = psi(bumps, t);
        CHECK(quad == doctest::Approx(closed).epsilon(1e-4));
    }
}

TEST_CASE("psi quadrature agrees with the Simpson reference on a smooth density") {
    auto m = spectral_measure::power_law(0.8, 1.5, 2.0);
    double t = 3.0;
    double by_lib = psi(m, t);
    double ref = testhelp::simpson(
        [&](double lam) {
            double s = std::sin(0.5 * lam * t);
            return 4.0 * m.density(lam) * s * s / (lam * lam);
        },
        1e-8, 2.0, 2000000);
    CHECK(by_lib == doctest::Approx(ref).epsilon(1e-7));
}

TEST_CASE("phase closed forms") {
    auto m = spectral_measure::discrete({{1.0, 1.0}});
    auto vac = reference_state::vacuum();
    CHECK(phase_phi(m, 0.7, 0.7, vac, 5.0) == 0.0);
    CHECK(phase_phi(m, 1.0, 0.0, vac, pi) == doctest::Approx(pi).epsilon(1e-13));
    auto coh = reference_state::coherent({0.0, 1.0});
    CHECK(phase_phi(m, 1.0, 0.0, coh, 2.0 * pi) == doctest::Approx(2.0 * pi).epsilon(1e-13));
}

TEST_CASE("phase vanishes to first order in t for the vacuum") {
    // The perturbative check that fixes the sign of the sin(Mt) term.
    auto m = spectral_measure::discrete({{1.3, 0.2}, {0.4, 0.05}});
    auto vac = reference_state::vacuum();
    double t = 1e-4;
    double ph = phase_phi(m, 1.0, 0.0, vac, t);
    CHECK(std::abs(ph) < 1e-10); // O(t^3), not O(t)
}

TEST_CASE("chi closed form and trivial cases") {
    auto m = spectral_measure::discrete({{1.0, 0.1}});
    auto vac = reference_state::vacuum();
    cplx v = chi(m, 1.0, 0.0, vac, pi);
    CHECK(std::abs(v) == doctest::Approx(std::exp(-0.2)).epsilon(1e-13));
    CHECK(std::arg(v) == doctest::Approx(-0.1 * pi).epsilon(1e-12));

    CHECK(chi(m, 0.3, 0.3, vac, 7.0) == cplx{1.0, 0.0});
    CHECK(chi(m, 1.0, 0.0, vac, 0.0) == cplx{1.0, 0.0});
}

TEST_CASE("curve invariants: modulus law, symmetry, bounds") {
    auto m = spectral_measure::discrete({{1.0, 0.1}, {2.3, 0.05}});
    auto vac = reference_state::vacuum();
    auto times = testhelp::linspace(0.0, 12.0, 60);
    auto c = curve(m, 1.0, 0.0, vac, times);

    REQUIRE(c.times.size() == times.size());
    CHECK(c.psi[0] == 0.0);
    for (std::size_t j = 0; j < times.size(); ++j) {
        double ps = psi(m, times[j]); // recomputed independently of the curve
        CHECK(std::abs(c.chi[j]) ==
              doctest::Approx(std::exp(-0.5 * ps)).epsilon(1e-10));
        CHECK(std::abs(c.chi[j]) <= 1.0 + 1e-15);
    }
    // chi(alpha,beta) = conj(chi(beta,alpha)) for the vacuum reference
    for (double t : {0.7, 3.3, 9.9}) {
        cplx ab = chi(m, 1.0, 0.0, vac, t);
        cplx ba = chi(m, 0.0, 1.0, vac, t);
        CHECK(std::abs(ab - std::conj(ba)) < 1e-12);
    }
}

TEST_CASE("mixture chi is a convex phase mixture under the shared envelope") {
    auto m = spectral_measure::discrete({{1.0, 0.1}});
    auto mix = reference_state::mixture({{0.5, {1.0, 0.0}}, {0.5, {0.0, -1.0}}});
    for (double t : {0.5, 2.0, 6.0}) {
        double env = std::exp(-0.5 * psi(m, t));
        CHECK(std::abs(chi(m, 1.0, 0.0, mix, t)) <= env + 1e-12);
    }
    CHECK_THROWS_AS(reference_state::mixture({{0.5, {0.0, 0.0}}, {0.6, {1.0, 0.0}}}),
                    std::invalid_argument);
}

TEST_CASE("curve rejects bad grids") {
    auto m = spectral_measure::discrete({{1.0, 0.1}});
    auto vac = reference_state::vacuum();
    CHECK_THROWS_AS(curve(m, 1.0, 0.0, vac, {}), std::invalid_argument);
    CHECK_THROWS_AS(curve(m, 1.0, 0.0, vac, {0.0, 0.0}), std::invalid_argument);
    CHECK_THROWS_AS(curve(m, 1.0, 0.0, vac, {-1.0, 1.0}), std::invalid_argument);

    auto single = curve(m, 1.0, 0.0, vac, {0.0});
    CHECK(single.chi[0] == cplx{1.0, 0.0});
}

TEST_CASE("regular measures keep psi below 4*m2") {
    std::mt19937_64 rng(29);
    for (int i = 0; i < 20; ++i) {
        auto m = testhelp::random_discrete(rng);
        double cap = 4.0 * moment(m, 2).value;
        std::uniform_real_distribution<double> td(0.0, 50.0);
        for (int k = 0; k < 20; ++k) CHECK(psi(m, td(rng)) <= cap * (1.0 + 1e-12));
    }
}

TEST_CASE("lower bound chain: psi(t) >= (4/pi^2) t^2 sigma(pi/t)") {
    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> td(0.05, 40.0);
    for (int i = 0; i < 30; ++i) {
        auto m = testhelp::random_discrete(rng);
        for (int k = 0; k < 4; ++k) {
            double t = td(rng);
            double lhs = psi(m, t);
            double rhs = 4.0 / (pi * pi) * t * t * m.cumulative(pi / t);
            CHECK(lhs >= rhs - 1e-9 * (1.0 + std::abs(lhs)));
        }
    }
    // density case too
    auto pl = spectral_measure::power_law(1.0, 0.5, 1.0);
    for (double t : {1.0, 10.0, 123.0}) {
        double lhs = psi(pl, t);
        double rhs = 4.0 / (pi * pi) * t * t * pl.cumulative(pi / t);
        CHECK(lhs >= rhs - 1e-7 * (1.0 + lhs));
    }
}

TEST_CASE("monotone divergence for dominant power laws") {
    auto m = spectral_measure::power_law(1.0, 0.5, 1.0);
    double prev = psi(m, 100.0);
    for (double t : {1000.0, 10000.0}) {
        double cur = psi(m, t);
        CHECK(cur > prev);
        prev = cur;
    }
}

TEST_CASE("asymptotic exponent fits the power law") {
    auto m = spectral_measure::power_law(1.0, 0.5, 1.0);
    auto fit = asymptotic_exponent(m, 1e2, 1e4, 12);
    CHECK(fit.slope == doctest::Approx(0.5).epsilon(0.04));
    CHECK(fit.std_error < 0.02);

    auto reg = spectral_measure::discrete({{1.0, 1.0}});
    CHECK_THROWS_AS(asymptotic_exponent(reg, 1e2, 1e4, 12), std::invalid_argument);
    CHECK_THROWS_AS(asymptotic_exponent(m, 1e2, 1e4, 4), std::invalid_argument);
    CHECK_THROWS_AS(asymptotic_exponent(m, -1.0, 1e4, 12), std::invalid_argument);
}

TEST_CASE("recurrence scan locates exact returns") {
    auto one = spectral_measure::discrete({{1.0, 1.0}});
    auto r1 = recurrence_scan(one, 10.0, 1e-12);
    REQUIRE(r1.size() == 1);
    CHECK(r1[0] == doctest::Approx(2.0 * pi).epsilon(1e-9));

    auto two = spectral_measure::discrete({{1.0, 1.0}, {3.0, 0.5}});
    auto r2 = recurrence_scan(two, 10.0, 1e-12);
    REQUIRE(r2.size() == 1);
    CHECK(r2[0] == doctest::Approx(2.0 * pi).epsilon(1e-9));

    auto incomm = spectral_measure::discrete({{1.0, 1.0}, {std::sqrt(2.0), 1.0}});
    CHECK(recurrence_scan(incomm, 10.0, 1e-12).empty());

    CHECK_THROWS_AS(recurrence_scan(spectral_measure::power_law(1.0, 0.5, 1.0), 10.0, 1e-12),
                    std::invalid_argument);
}

TEST_CASE("phase requires a finite first inverse moment") {
    auto flat = spectral_measure::power_law(1.0, 0.0, 1.0); // m1 divergent
    auto vac = reference_state::vacuum();
    CHECK_THROWS_AS(phase_phi(flat, 1.0, 0.0, vac, 1.0), std::invalid_argument);
    // alpha^2 == beta^2 avoids the m1 terms entirely
    CHECK_NOTHROW(phase_phi(flat, 0.5, -0.5, vac, 1.0));
}
