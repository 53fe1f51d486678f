#include <cmath>

#include "doctest.h"
#include "wsob/params.hpp"
#include "wsob/special.hpp"

using namespace wsob;
using namespace wsob::special;

TEST_CASE("ln_gamma matches reference points") {
    CHECK(ln_gamma(1.0) == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(ln_gamma(0.5) == doctest::Approx(0.57236494292470008707).epsilon(1e-14));
    CHECK(ln_gamma(5.0) == doctest::Approx(std::log(24.0)).epsilon(1e-14));
}

TEST_CASE("ln_gamma agrees with the C library across the working range") {
    for (double x = 0.5; x <= 200.0; x *= 1.07) {
        CHECK(ln_gamma(x) ==
              doctest::Approx(std::lgamma(x)).epsilon(1e-13));
    }
}

TEST_CASE("ln_gamma recurrence") {
    for (double x = 0.5; x <= 100.0; x += 0.7) {
        const double lhs = ln_gamma(x + 1.0) - ln_gamma(x) - std::log(x);
        CHECK(std::fabs(lhs) < 1e-12);
    }
}

TEST_CASE("ln_gamma domain errors") {
    CHECK_THROWS_AS(ln_gamma(0.0), std::domain_error);
    CHECK_THROWS_AS(ln_gamma(-1.5), std::domain_error);
    CHECK_THROWS_AS(ln_gamma(std::nan("")), std::domain_error);
}

TEST_CASE("closed form constants, beta = alpha - 1") {
    // 2 (pi/6)^{1/3}
    CHECK(sharp_constant_case1(2, 1.0).value ==
          doctest::Approx(1.6119919540164696).epsilon(1e-13));
    CHECK(sharp_constant_case1(1, 0.5).value ==
          doctest::Approx(0.5362573492777564).epsilon(1e-13));
    CHECK(sharp_constant_case1(3, 2.0).value ==
          doctest::Approx(3.8466590236945885).epsilon(1e-13));
    CHECK(sharp_constant_case1(2, 0.3).value ==
          doctest::Approx(0.8437534302416454).epsilon(1e-13));
    CHECK(sharp_constant_case1(1, 0.5).value > 0.0);
    CHECK_THROWS_AS(sharp_constant_case1(2, -1.0), std::domain_error);
}

TEST_CASE("closed form constants, beta = alpha") {
    CHECK(sharp_constant_case2(2, 1.0).value ==
          doctest::Approx(4.0933068317859540).epsilon(1e-13));
    CHECK(sharp_constant_case2(1, 1.5).value ==
          doctest::Approx(2.2223261843371015).epsilon(1e-13));
    CHECK(sharp_constant_case2(3, 2.0).value ==
          doctest::Approx(8.2840124503108365).epsilon(1e-13));
    const double v = sharp_constant_case2(1, std::sqrt(2.0)).value;
    CHECK(v > 0.0);
    CHECK(std::isfinite(v));
    CHECK_THROWS_AS(sharp_constant_case2(2, 0.0), std::domain_error);
}

TEST_CASE("closed form constants, Grushin tau = 1") {
    const double pi23 = std::pow(3.14159265358979323846, 2.0 / 3.0);
    CHECK(grushin_sharp_constant_tau1(1, 1).value == doctest::Approx(pi23).epsilon(1e-13));
    CHECK(grushin_sharp_constant_tau1(2, 1).value ==
          doctest::Approx(4.3054361832565961).epsilon(1e-13));
    CHECK_THROWS_AS(grushin_sharp_constant_tau1(1, 2), unsupported_case);
}

TEST_CASE("tau = 1 triangle: conversion of case1 reproduces the Grushin constant") {
    for (int m : {4, 6}) {
        for (int n : {1, 2, 3}) {
            const double g = grushin_sharp_constant_tau1(n, m).value;
            const GrushinParams gp{n, m, 1.0};
            const double c = constant_conversion(gp, sharp_constant_case1(n, m / 2.0).value);
            CHECK(std::fabs(g - c) / g < 1e-12);
        }
    }
    // m = 2 excluding (1,2)
    for (int n : {2, 3}) {
        const double g = grushin_sharp_constant_tau1(n, 2).value;
        const GrushinParams gp{n, 2, 1.0};
        const double c = constant_conversion(gp, sharp_constant_case1(n, 1.0).value);
        CHECK(std::fabs(g - c) / g < 1e-12);
    }
}

TEST_CASE("constant evaluators are continuous in their real parameters") {
    for (double a : {0.4, 1.0, 2.5, 7.0}) {
        const double h = 1e-6;
        const double d1 =
            std::fabs(sharp_constant_case1(2, a + h).value - sharp_constant_case1(2, a).value);
        const double d2 =
            std::fabs(sharp_constant_case2(2, a + h).value - sharp_constant_case2(2, a).value);
        CHECK(d1 < 1e-4);
        CHECK(d2 < 1e-4);
    }
}

TEST_CASE("no overflow for large Gamma arguments") {
    // n + 2 alpha up to 400
    const auto r = sharp_constant_case1(3, 198.0);
    CHECK(std::isfinite(r.value));
    CHECK(r.value > 0.0);
}

TEST_CASE("unit ball volumes") {
    CHECK(unit_ball_volume(1) == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(unit_ball_volume(2) == doctest::Approx(3.14159265358979324).epsilon(1e-14));
    CHECK(unit_ball_volume(3) == doctest::Approx(4.18879020478639098).epsilon(1e-14));
    CHECK(unit_sphere_area(1) == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(unit_sphere_area(3) == doctest::Approx(4.0 * 3.14159265358979324).epsilon(1e-14));
}
