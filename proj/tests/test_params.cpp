#include <cmath>
#include <random>

#include "doctest.h"
#include "wsob/params.hpp"

using namespace wsob;

TEST_CASE("critical exponent") {
    CHECK(critical_exponent({2, 1.0, 0.0}) == doctest::Approx(3.0).epsilon(1e-15));
    CHECK(critical_exponent({1, 2.0, 2.0}) == doctest::Approx(4.0).epsilon(1e-15));
    // p* = 2 exactly at the upper alpha bound
    for (double b : {-0.5, 0.0, 1.0, 3.0})
        CHECK(critical_exponent({2, b + 2.0, b}) == doctest::Approx(2.0).epsilon(1e-15));
    CHECK_THROWS_AS(critical_exponent({1, -0.5, 0.0}), std::domain_error);
}

TEST_CASE("classify") {
    {
        const auto c = classify({2, 1.0, 0.0});
        CHECK(c.gn_valid);
        CHECK(c.strict_valid);
        CHECK(c.reg_valid);
        CHECK(c.n1_unique);
    }
    {
        // n = 1: lower bound vacuous; the n=1 uniqueness condition fails here
        const auto c = classify({1, 1.0, 3.0});
        CHECK(c.gn_valid);
        CHECK(c.strict_valid);
        CHECK_FALSE(c.n1_unique);  // 1/4 > 5/36
    }
    {
        // boundary alpha = (n-1)beta/(n+1)
        const auto c = classify({2, 2.0, 6.0});
        CHECK(c.gn_valid);
        CHECK_FALSE(c.strict_valid);
    }
}

TEST_CASE("grushin_to_weight") {
    {
        const auto wp = grushin_to_weight({3, 4, 1.0});
        CHECK(wp.alpha == doctest::Approx(2.0).epsilon(1e-15));
        CHECK(wp.beta == doctest::Approx(1.0).epsilon(1e-15));
    }
    {
        const GrushinParams gp{1, 1, 1.0};
        CHECK(gp.homogeneous_dim() == doctest::Approx(3.0));
        const auto wp = grushin_to_weight(gp);
        CHECK(critical_exponent(wp) == doctest::Approx(6.0).epsilon(1e-14));
    }
    {
        const GrushinParams gp{1, 2, 1.0};
        const auto wp = grushin_to_weight(gp);
        CHECK(wp.alpha == doctest::Approx(1.0));
        CHECK(wp.beta == doctest::Approx(0.0));
        CHECK(gp.homogeneous_dim() == doctest::Approx(4.0));
        CHECK(critical_exponent(wp) == doctest::Approx(4.0));
    }
}

TEST_CASE("p* equals 2Q/(Q-2) for every Grushin parameter set") {
    std::mt19937_64 rng(1234);
    std::uniform_real_distribution<double> tau(0.05, 5.0);
    std::uniform_int_distribution<int> dim(1, 6);
    for (int it = 0; it < 1000; ++it) {
        const GrushinParams gp{dim(rng), dim(rng), tau(rng)};
        const double Q = gp.homogeneous_dim();
        const double lhs = critical_exponent(grushin_to_weight(gp));
        const double rhs = 2.0 * Q / (Q - 2.0);
        CHECK(std::fabs(lhs - rhs) <= 1e-14 * rhs);
    }
}

TEST_CASE("grushin weight image is always strictly admissible") {
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> tau(0.02, 8.0);
    std::uniform_int_distribution<int> dim(1, 8);
    for (int it = 0; it < 1000; ++it) {
        const GrushinParams gp{dim(rng), dim(rng), tau(rng)};
        CHECK(classify(grushin_to_weight(gp)).strict_valid);
    }
}

TEST_CASE("classify lower bound is monotone in alpha") {
    for (double beta : {-0.5, 0.5, 2.0, 5.0}) {
        bool was_valid = false;
        for (double a = 0.05; a < 8.0; a += 0.05) {
            const bool lower_ok = (2.0 - 1.0) * beta / (2.0 + 1.0) <= a;
            if (was_valid) CHECK(lower_ok);
            if (lower_ok) was_valid = true;
        }
    }
}

TEST_CASE("constant_conversion identity factor") {
    const GrushinParams gp{2, 3, 0.7};
    const double Q = gp.homogeneous_dim();
    const double omega3 = 4.18879020478639098;
    const double expected =
        std::pow(3.0 * omega3, 2.0 / Q) * std::pow(1.7, (2.0 * Q - 2.0) / Q);
    CHECK(constant_conversion(gp, 1.0) == doctest::Approx(expected).epsilon(1e-14));
    CHECK_THROWS_AS(constant_conversion(gp, -1.0), std::domain_error);
}

TEST_CASE("case routing predicates") {
    CHECK(is_case1_pair({2, 1.0, 0.0}));
    CHECK(is_case1_pair({2, 1.0, 0.0 + 5e-13}));
    CHECK_FALSE(is_case1_pair({2, 1.0, 0.1}));
    CHECK(is_case2_pair({2, 1.0, 1.0}));
    CHECK_FALSE(is_case2_pair({2, 1.0, 0.0}));
    CHECK(in_nonexistence_regime({2, 2.0, 6.0}));
    CHECK(in_nonexistence_regime({3, 2.0, 4.0}));
    CHECK_FALSE(in_nonexistence_regime({2, 1.0, 3.0}));
    CHECK_FALSE(in_nonexistence_regime({1, 2.0, 6.0}));
}
