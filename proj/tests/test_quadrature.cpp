#include <cmath>
#include <random>

#include "doctest.h"
#include "wsob/extremals.hpp"
#include "wsob/quadrature.hpp"
#include "wsob/special.hpp"

using namespace wsob;
using namespace wsob::quad;

namespace {

Field2D unit_box_field(int n, int nn = 33) {
    Field2D f;
    f.wp = {n, 1.0, 0.0};
    f.rho_grid.resize(nn);
    f.t_grid.resize(nn);
    for (int i = 0; i < nn; ++i) {
        f.rho_grid[i] = static_cast<double>(i) / (nn - 1);
        f.t_grid[i] = static_cast<double>(i) / (nn - 1);
    }
    f.values.assign(static_cast<size_t>(nn) * nn, 1.0);
    return f;
}

extremals::ExtremalSpec case1_spec(int n, double a) {
    extremals::ExtremalSpec s;
    s.wp = {n, a, a - 1.0};
    s.case_id = extremals::ExtremalCase::Case1;
    return s;
}

extremals::ExtremalSpec case2_spec(int n, double a) {
    extremals::ExtremalSpec s;
    s.wp = {n, a, a};
    s.case_id = extremals::ExtremalCase::Case2;
    return s;
}

}  // namespace

TEST_CASE("weighted_lp_norm constant-field examples") {
    {
        auto f = unit_box_field(1);
        // |S^0| = 2, integral of 1 over the unit square
        CHECK(weighted_lp_norm(f, 0.0, 1.0) == doctest::Approx(2.0).epsilon(1e-10));
        CHECK(weighted_lp_norm(f, 1.0, 1.0) == doctest::Approx(1.0).epsilon(1e-10));
    }
    CHECK_THROWS_AS(weighted_lp_norm(unit_box_field(1), -1.0, 1.0), std::domain_error);
}

TEST_CASE("weighted_lp_norm converges with order >= 3 on the case2 extremal") {
    const WeightPair wp{2, 1.0, 1.0};
    const auto u = extremals::radial_evaluator(case2_spec(2, 1.0));
    const double pstar = critical_exponent(wp);
    double prev_err = 0.0;
    std::vector<double> errs;
    // reference from the finest level
    QuadConfig ref_cfg;
    ref_cfg.n_rho = ref_cfg.n_t = 1025;
    const double ref = weighted_lp_norm(sample_field(u, wp, ref_cfg), wp.beta, pstar);
    for (int nn : {65, 129, 257}) {
        QuadConfig cfg;
        cfg.n_rho = cfg.n_t = nn;
        errs.push_back(
            std::fabs(weighted_lp_norm(sample_field(u, wp, cfg), wp.beta, pstar) - ref));
    }
    (void)prev_err;
    // observed order of the node-doubling sequence
    const double order = std::log2(errs[0] / errs[1]);
    CHECK(order >= 3.0);
}

TEST_CASE("weighted_lp_norm is absolutely homogeneous") {
    const WeightPair wp{2, 1.0, 0.5};
    const auto u = extremals::radial_evaluator(case1_spec(2, 1.0));
    QuadConfig cfg;
    cfg.n_rho = cfg.n_t = 129;
    Field2D f = sample_field(u, wp, cfg);
    const double base = weighted_lp_norm(f, 0.5, 2.5);
    for (auto& v : f.values) v *= -3.25;
    CHECK(weighted_lp_norm(f, 0.5, 2.5) ==
          doctest::Approx(3.25 * base).epsilon(1e-13));
}

TEST_CASE("rayleigh_F of the exact extremals matches the closed forms") {
    struct Case {
        int n;
        double a;
        bool case1;
    };
    const Case cases[] = {{2, 1.0, true}, {2, 1.0, false}, {3, 2.0, true}, {1, 1.5, false}};
    for (const auto& c : cases) {
        const WeightPair wp{c.n, c.a, c.case1 ? c.a - 1.0 : c.a};
        const auto u = extremals::radial_evaluator(c.case1 ? case1_spec(c.n, c.a)
                                                           : case2_spec(c.n, c.a));
        QuadConfig cfg;
        cfg.n_rho = cfg.n_t = 513;
        const double F = rayleigh_F_richardson(u, wp, cfg);
        const double S = c.case1 ? special::sharp_constant_case1(c.n, c.a).value
                                 : special::sharp_constant_case2(c.n, c.a).value;
        CHECK(std::fabs(F - S) / S < 1e-5);
    }
}

TEST_CASE("rayleigh_F is invariant under amplitude scaling") {
    const WeightPair wp{2, 1.0, 0.0};
    const auto u = extremals::radial_evaluator(case1_spec(2, 1.0));
    QuadConfig cfg;
    cfg.n_rho = cfg.n_t = 129;
    Field2D f = sample_field(u, wp, cfg);
    const double F0 = rayleigh_F(f, wp);
    for (auto& v : f.values) v *= 7.5;
    CHECK(rayleigh_F(f, wp) == doctest::Approx(F0).epsilon(1e-12));
}

TEST_CASE("rayleigh_F scale/translate invariance on matched grids") {
    const WeightPair wp{2, 1.0, 0.0};
    const auto base = extremals::radial_evaluator(case1_spec(2, 1.0));
    QuadConfig cfg;
    cfg.n_rho = cfg.n_t = 257;
    const double F0 = rayleigh_F(sample_field(base, wp, cfg), wp);
    for (double lam : {0.5, 2.0}) {
        const double g = 0.5 * (wp.n + wp.alpha - 1.0);
        RadialFn scaled = [&base, lam, g](double rho, double t) {
            return std::pow(lam, g) * base(lam * rho, lam * t);
        };
        const double F1 = rayleigh_F(sample_field(scaled, wp, cfg), wp);
        CHECK(std::fabs(F1 - F0) / F0 < 1e-4);
    }
}

TEST_CASE("fields never dip below the verified sharp constants") {
    // 500 random smooth compactly supported fields per closed-form regime
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> c_rho(0.0, 2.0), c_t(0.3, 2.5), wdt(0.3, 1.2),
        amp(0.2, 1.0);
    for (bool case1 : {true, false}) {
        const WeightPair wp{2, 1.0, case1 ? 0.0 : 1.0};
        const double S = case1 ? special::sharp_constant_case1(2, 1.0).value
                               : special::sharp_constant_case2(2, 1.0).value;
        QuadConfig cfg;
        cfg.n_rho = cfg.n_t = 129;
        double worst = 1e300;
        for (int it = 0; it < 250; ++it) {
            const double r0 = c_rho(rng), t0 = c_t(rng), w1 = wdt(rng), w2 = wdt(rng),
                         a2 = amp(rng);
            const double r1 = c_rho(rng), t1 = c_t(rng);
            RadialFn u = [=](double rho, double t) {
                const double d1 = (rho - r0) * (rho - r0) + (t - t0) * (t - t0);
                const double d2 = (rho - r1) * (rho - r1) + (t - t1) * (t - t1);
                return std::exp(-d1 / (2 * w1 * w1)) + a2 * std::exp(-d2 / (2 * w2 * w2));
            };
            worst = std::min(worst, rayleigh_F(sample_field(u, wp, cfg), wp));
        }
        CHECK(worst >= (1.0 - 1e-3) * S);
    }
}

TEST_CASE("rescaled-field growth shows the weighted inequality needs l <= (n+1)k/n") {
    // L^1 variant ratio (int t^l |u|^p)^{(n+k)/(n+l+1)} / int t^k |grad u|
    // evaluated on u(y, t) shifted ever deeper into the interior: for
    // l > (n+1)k/n the ratio grows without bound along t0 = 1, 10, 100.
    const int n = 1;
    const double k = 1.0, l = 3.0;  // l > (n+1)k/n = 2
    const double p = (n + l + 1) / (n + k);
    double prev = 0.0;
    for (double t0 : {1.0, 10.0, 100.0}) {
        RadialFn u = [t0](double rho, double t) {
            const double d = rho * rho + (t - t0) * (t - t0);
            return std::exp(-d);
        };
        // rho geometric, t linear around the bump so deep centers stay resolved
        WeightPair wp{n, k, l};
        Field2D f;
        f.wp = wp;
        f.rho_grid = log_grid(1e-8, 30.0, 513);
        const int nt = 2049;
        const double t_hi = t0 + 15.0;
        f.t_grid.resize(nt);
        for (int j = 0; j < nt; ++j)
            f.t_grid[j] = 1e-8 + (t_hi - 1e-8) * j / (nt - 1.0);
        f.values.resize(static_cast<size_t>(f.nr()) * f.nt());
        for (int i = 0; i < f.nr(); ++i)
            for (int j = 0; j < f.nt(); ++j) f.at(i, j) = u(f.rho_grid[i], f.t_grid[j]);
        Field2D g = gradient_sq(f);
        for (auto& v : g.values) v = std::sqrt(v);
        Field2D up = f;
        for (auto& v : up.values) v = std::pow(std::fabs(v), p);
        const double num = std::pow(integrate_weighted(up, n - 1.0, l), (n + k) / (n + l + 1));
        const double den = integrate_weighted(g, n - 1.0, k);
        const double ratio = num / den;
        CHECK(ratio > prev);
        prev = ratio;
    }
}

TEST_CASE("power-law tail correction recovers truncated mass") {
    const WeightPair wp{2, 1.0, 0.0};
    const auto u = extremals::radial_evaluator(case1_spec(2, 1.0));
    const double pstar = critical_exponent(wp);
    // reference with a huge geometric domain
    QuadConfig big;
    big.n_rho = big.n_t = 513;
    Field2D fb = sample_field(u, wp, big);
    Field2D fbp = fb;
    for (auto& v : fbp.values) v = std::pow(std::fabs(v), pstar);
    const double ref = integrate_weighted(fbp, wp.n - 1.0, wp.beta);
    // truncated at R = 25 with and without the fitted tail
    QuadConfig small;
    small.n_rho = small.n_t = 513;
    small.R = small.T = 25.0;
    Field2D fs = sample_field(u, wp, small);
    for (auto& v : fs.values) v = std::pow(std::fabs(v), pstar);
    const double bare = integrate_weighted(fs, wp.n - 1.0, wp.beta, TailMode::None);
    const double with_tail = integrate_weighted(fs, wp.n - 1.0, wp.beta, TailMode::PowerLaw);
    CHECK(std::fabs(bare - ref) / ref > 1e-4);        // truncation visibly hurts
    CHECK(std::fabs(with_tail - ref) / ref < 2e-4);   // correction recovers it
    CHECK(std::fabs(with_tail - ref) < std::fabs(bare - ref) / 3.0);
}

TEST_CASE("poincare quotient") {
    const WeightPair wp{2, 1.0, 0.0};
    QuadConfig cfg;
    cfg.n_rho = cfg.n_t = 257;
    cfg.R = cfg.T = 16.0;
    {
        RadialFn u = [](double, double) { return 1.0; };
        Field2D f = sample_field(u, wp, cfg);
        CHECK(poincare_check(f, 2.0, 1.0, wp) == doctest::Approx(0.0).epsilon(1e-20));
    }
    {
        RadialFn u = [](double, double t) { return t; };
        QuadConfig base = cfg;
        base.n_rho = base.n_t = 513;
        const double q1 = poincare_check(sample_field(u, wp, base), 2.0, 1.0, wp);
        CHECK(q1 > 0.0);
        CHECK(std::isfinite(q1));
        QuadConfig fine = cfg;
        fine.n_rho = fine.n_t = 1025;
        const double q2 = poincare_check(sample_field(u, wp, fine), 2.0, 1.0, wp);
        CHECK(std::fabs(q1 - q2) / q1 < 0.05);
    }
    {
        RadialFn u = [](double, double t) { return t; };
        Field2D f = sample_field(u, wp, cfg);
        CHECK_THROWS_AS(poincare_check(f, 2.0, 100.0, wp), std::domain_error);
    }
}

TEST_CASE("poincare envelope over random bumps stays bounded") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> cc(0.5, 3.0), ww(0.4, 1.5);
    for (double alpha : {0.5, 1.0, 2.0}) {
        const WeightPair wp{2, alpha, 0.0};
        QuadConfig cfg;
        cfg.n_rho = cfg.n_t = 193;
        cfg.R = cfg.T = 16.0;
        double worst = 0.0;
        for (int it = 0; it < 67; ++it) {
            const double r0 = cc(rng), t0 = cc(rng), w = ww(rng);
            RadialFn u = [=](double rho, double t) {
                const double d = (rho - r0) * (rho - r0) + (t - t0) * (t - t0);
                return std::exp(-d / (2 * w * w));
            };
            worst = std::max(worst, poincare_check(sample_field(u, wp, cfg), 1.5, 1.0, wp));
        }
        CHECK(worst < 50.0);
    }
}
