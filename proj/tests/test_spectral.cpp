#include "deco/spectral.hpp"
#include "deco/errors.hpp"
#include "helpers.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace deco;

TEST_CASE("moment closed forms") {
    auto one = spectral_measure::discrete({{2.0, 1.0}});
    CHECK(moment(one, 2).value == doctest::Approx(0.25).epsilon(1e-15));
    CHECK(moment(one, 0).value == doctest::Approx(1.0).epsilon(1e-15));

    auto pl = spectral_measure::power_law(1.0, 0.5, 1.0);
    CHECK(moment(pl, 2).divergent); // exponent p-2 = -1.5 not integrable at 0
    // c·Λ^{p-s+1}/(p-s+1) with s = 1: 1/0.5
    CHECK(moment(pl, 1).value == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(moment(pl, 0).value == doctest::Approx(1.0 / 1.5).epsilon(1e-15));

    auto flat = spectral_measure::power_law(2.0, 0.0, 3.0);
    CHECK(moment(flat, 0).value == doctest::Approx(6.0).epsilon(1e-15));
    CHECK(moment(flat, 1).divergent);
}

TEST_CASE("tabulated moments handle the origin segment in closed form") {
    // density = lambda on [0,1], then 1 on [1,2]
    auto m = spectral_measure::tabulated({0.0, 1.0, 2.0}, {0.0, 1.0, 1.0});
    CHECK(moment(m, 0).value == doctest::Approx(1.5).epsilon(1e-12));
    // int_0^1 1 dlam + int_1^2 1/lam = 1 + ln 2
    CHECK(moment(m, 1).value == doctest::Approx(1.0 + std::log(2.0)).epsilon(1e-12));
    // density ~ lambda at 0 makes the second inverse moment log-divergent
    CHECK(moment(m, 2).divergent);

    auto away = spectral_measure::tabulated({0.0, 1.0, 2.0}, {0.0, 0.0, 1.0});
    CHECK_FALSE(moment(away, 2).divergent);

    auto flat0 = spectral_measure::tabulated({0.0, 1.0}, {1.0, 1.0});
    CHECK(moment(flat0, 1).divergent);
}

TEST_CASE("coupling constraint") {
    CHECK(validate_coupling(spectral_measure::discrete({{1.0, 0.25}}))); // boundary: equality
    CHECK_FALSE(validate_coupling(spectral_measure::discrete({{1.0, 0.26}})));
    CHECK_FALSE(validate_coupling(spectral_measure::power_law(1.0, 0.5, 1.0)));
    CHECK_FALSE(validate_coupling(spectral_measure::power_law(1.0, 0.0, 1.0))); // m1 divergent
}

TEST_CASE("construction rejects invalid inputs") {
    CHECK_THROWS_AS(spectral_measure::discrete({{0.0, 1.0}}), std::invalid_argument);
    CHECK_THROWS_AS(spectral_measure::discrete({{1.0, 1.0}, {1.0, 0.5}}), std::invalid_argument);
    CHECK_THROWS_AS(spectral_measure::discrete({{1.0, 0.0}}), std::invalid_argument); // zero mass
    CHECK_THROWS_AS(spectral_measure::power_law(1.0, -0.1, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(spectral_measure::tabulated({0.1, 1.0}, {1.0, 1.0}), std::invalid_argument);
    CHECK_THROWS_AS(spectral_measure::tabulated({0.0, 1.0}, {1.0, -1.0}), std::invalid_argument);
}

TEST_CASE("power-law classification truth table") {
    for (double p : {0.0, 0.2, 0.5, 0.8, 0.98})
        CHECK(classify_ir(spectral_measure::power_law(1.0, p, 1.0)) == ir_class::ir_dominant);
    CHECK(classify_ir(spectral_measure::power_law(1.0, 1.0, 1.0)) == ir_class::ir_divergent);
    for (double p : {1.1, 1.5, 2.0})
        CHECK(classify_ir(spectral_measure::power_law(1.0, p, 1.0)) == ir_class::regular);

    // 20-point grid over [0, 2]
    for (int i = 0; i < 20; ++i) {
        double p = 2.0 * i / 19.0;
        auto c = classify_ir(spectral_measure::power_law(0.7, p, 2.0));
        if (p < 1.0)
            CHECK(c == ir_class::ir_dominant);
        else if (p == 1.0)
            CHECK(c == ir_class::ir_divergent);
        else
            CHECK(c == ir_class::regular);
    }
}

TEST_CASE("discrete measures bounded away from zero are regular") {
    CHECK(classify_ir(spectral_measure::discrete({{3.0, 1.0}})) == ir_class::regular);
    std::mt19937_64 rng(42);
    for (int i = 0; i < 50; ++i)
        CHECK(classify_ir(testhelp::random_discrete(rng)) == ir_class::regular);
}

TEST_CASE("discrete accumulation-point bath is flagged dominant") {
    // omega_k = 8^{-k}, weights ~ omega^{3/2}: sigma(omega)/omega^2 grows by
    // sqrt(8) per step, i.e. 8^4.5 > 1e3 across the 10 smallest modes.
    std::vector<bath_mode> modes;
    for (int k = 0; k < 12; ++k) {
        double om = std::pow(8.0, -k);
        modes.push_back({om, std::pow(om, 1.5)});
    }
    CHECK(classify_ir(spectral_measure::discrete(modes)) == ir_class::ir_dominant);
}

TEST_CASE("tabulated low-end fit classification") {
    auto sampled_power = [](double p) {
        std::vector<double> grid{0.0}, dens{0.0};
        for (int i = 1; i <= 60; ++i) {
            double lam = 1e-4 * std::pow(10.0 / 1e-4, (i - 1.0) / 59.0);
            grid.push_back(lam);
            dens.push_back(std::pow(lam, p));
        }
        return spectral_measure::tabulated(grid, dens);
    };
    CHECK(classify_ir(sampled_power(0.5)) == ir_class::ir_dominant);
    CHECK(classify_ir(sampled_power(1.0)) == ir_class::ir_divergent);
    CHECK(classify_ir(sampled_power(2.0)) == ir_class::regular);
}

TEST_CASE("tabulated fit with wild low-end data is inconclusive") {
    std::vector<double> grid{0.0};
    std::vector<double> dens{0.0};
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> noise(0.01, 10.0);
    for (int i = 1; i <= 20; ++i) {
        grid.push_back(1e-3 * i);
        dens.push_back(noise(rng));
    }
    CHECK_THROWS_AS(classify_ir(spectral_measure::tabulated(grid, dens)),
                    inconclusive_classification);
}

TEST_CASE("moment monotonicity on compact support") {
    std::mt19937_64 rng(11);
    for (int i = 0; i < 40; ++i) {
        auto m = testhelp::random_discrete(rng);
        double lmax = m.max_support();
        auto r = moments(m);
        REQUIRE(r.m2.is_finite());
        CHECK(r.m2.value >= r.m1.value / lmax - 1e-12 * r.m2.value);
        CHECK(r.m1.value >= r.m0.value / lmax - 1e-12 * r.m1.value);
    }
}

TEST_CASE("scaling weights scales moments and fixes the class") {
    std::mt19937_64 rng(13);
    for (int i = 0; i < 20; ++i) {
        auto m = testhelp::random_discrete(rng);
        double kappa = 3.7;
        std::vector<bath_mode> scaled = m.modes();
        for (auto& md : scaled) md.weight *= kappa;
        auto ms = spectral_measure::discrete(scaled);
        for (int s = 0; s <= 2; ++s)
            CHECK(moment(ms, s).value ==
                  doctest::Approx(kappa * moment(m, s).value).epsilon(1e-12));
        CHECK(classify_ir(ms) == classify_ir(m));
    }
    auto pl = spectral_measure::power_law(1.0, 0.5, 1.0);
    auto pls = spectral_measure::power_law(5.0, 0.5, 1.0);
    CHECK(classify_ir(pls) == classify_ir(pl));
    CHECK(moment(pls, 1).value == doctest::Approx(5.0 * moment(pl, 1).value).epsilon(1e-14));
}

TEST_CASE("cumulative distribution") {
    auto m = spectral_measure::discrete({{1.0, 0.5}, {2.0, 0.25}});
    CHECK(m.cumulative(0.5) == 0.0);
    CHECK(m.cumulative(1.0) == doctest::Approx(0.5));
    CHECK(m.cumulative(3.0) == doctest::Approx(0.75));

    auto pl = spectral_measure::power_law(2.0, 1.0, 1.0);
    CHECK(pl.cumulative(0.5) == doctest::Approx(2.0 * 0.25 / 2.0).epsilon(1e-14));
    CHECK(pl.cumulative(2.0) == doctest::Approx(1.0).epsilon(1e-14)); // clamped at cutoff

    auto tab = spectral_measure::tabulated({0.0, 1.0, 2.0}, {0.0, 1.0, 1.0});
    CHECK(tab.cumulative(1.0) == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(tab.cumulative(1.5) == doctest::Approx(1.0).epsilon(1e-14));
}
