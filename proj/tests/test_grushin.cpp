#include <cmath>
#include <random>

#include "doctest.h"
#include "wsob/extremals.hpp"
#include "wsob/grushin.hpp"
#include "wsob/ode.hpp"
#include "wsob/quadrature.hpp"
#include "wsob/special.hpp"

using namespace wsob;
using namespace wsob::grushin;

namespace {

quad::RadialFn case1_radial(int n, double a) {
    extremals::ExtremalSpec s;
    s.wp = {n, a, a - 1.0};
    s.case_id = extremals::ExtremalCase::Case1;
    return extremals::radial_evaluator(s);
}

// integral rho^{ga} r^{gb} f(rho, r) over the quarter plane on wide
// geometric grids
double quarter_integral(const std::function<double(double, double)>& f, double ga,
                        double gb, double hi_a, double hi_b, int nn = 1537) {
    quad::Field2D fld;
    fld.wp = {1, 1.0, 0.0};
    fld.rho_grid = quad::log_grid(1e-14, hi_a, nn);
    fld.t_grid = quad::log_grid(1e-14, hi_b, nn);
    fld.values.resize(static_cast<size_t>(nn) * nn);
    for (int i = 0; i < nn; ++i)
        for (int j = 0; j < nn; ++j)
            fld.at(i, j) = f(fld.rho_grid[i], fld.t_grid[j]);
    return quad::integrate_weighted(fld, ga, gb);
}

}  // namespace

TEST_CASE("lift substitutes t = |z|^{tau+1}") {
    const GrushinParams gp{2, 2, 1.0};
    const auto uh = case1_radial(2, 1.0);
    const auto f = lift(uh, gp);
    CHECK(f.radial(0.7, 1.0) == doctest::Approx(uh(0.7, 1.0)).epsilon(1e-15));
    CHECK(f.radial(0.7, 1.3) == doctest::Approx(uh(0.7, 1.69)).epsilon(1e-14));
}

TEST_CASE("lift norm identity (weighted p* integrals)") {
    // int t^b |u~|^{p*} dy dt = (tau+1)/(m om_m) int |z|^{(tau+1)(b+1)-m} |u|^{p*}
    const int n = 2, m = 2;
    const double tau = 1.0;
    const GrushinParams gp{n, m, tau};
    const WeightPair wp = grushin_to_weight(gp);  // (1, 0) here
    const auto uh = case1_radial(n, wp.alpha);
    const double pstar = critical_exponent(wp);
    const double Sn = special::unit_sphere_area(n);
    const double Sm = m * special::unit_ball_volume(m);

    const auto lifted = lift(uh, gp);
    const double lhs = Sn * quarter_integral(
                                [&](double rho, double t) {
                                    return std::pow(uh(rho, t), pstar);
                                },
                                n - 1.0, wp.beta, 1e10, 1e10);
    const double zexp = (tau + 1.0) * (wp.beta + 1.0) - m;
    const double rhs =
        (tau + 1.0) / (m * special::unit_ball_volume(m)) * Sn * Sm *
        quarter_integral(
            [&](double rho, double r) { return std::pow(lifted.radial(rho, r), pstar); },
            n - 1.0, m - 1.0 + zexp, 1e10, 1e5);
    CHECK(std::fabs(lhs - rhs) / lhs < 1e-4);
}

TEST_CASE("lift energy identity") {
    const int n = 2, m = 2;
    const double tau = 1.0;
    const GrushinParams gp{n, m, tau};
    const WeightPair wp = grushin_to_weight(gp);
    const double Sn = special::unit_sphere_area(n);
    const double Sm = m * special::unit_ball_volume(m);
    const double g = 0.5 * (n + wp.alpha - 1.0);

    // analytic gradients of the case1 bubble and its lift
    auto grad2_half = [&](double rho, double t) {
        const double D = (1.0 + t) * (1.0 + t) + rho * rho;
        const double c = -2.0 * g * std::pow(D, -g - 1.0);
        const double ur = c * rho, ut = c * (1.0 + t);
        return ur * ur + ut * ut;
    };
    auto grushin_energy_density = [&](double rho, double r) {
        const double t = std::pow(r, tau + 1.0);
        const double D = (1.0 + t) * (1.0 + t) + rho * rho;
        const double c = -2.0 * g * std::pow(D, -g - 1.0);
        const double ux = c * rho;
        const double uz = c * (1.0 + t) * (tau + 1.0) * std::pow(r, tau);
        return uz * uz + (tau + 1.0) * (tau + 1.0) * std::pow(r, 2.0 * tau) * ux * ux;
    };
    const double lhs =
        Sn * quarter_integral(grad2_half, n - 1.0, wp.alpha, 1e10, 1e10);
    const double zexp = (tau + 1.0) * wp.alpha - tau - (m - 1.0);
    const double rhs = 1.0 / (Sm * (tau + 1.0)) * Sn * Sm *
                       quarter_integral(grushin_energy_density, n - 1.0,
                                        m - 1.0 + zexp, 1e10, 1e5);
    CHECK(std::fabs(lhs - rhs) / lhs < 1e-3);
}

TEST_CASE("tau=1 extremal equals the lift of the case1 bubble") {
    const GrushinParams gp{2, 2, 1.0};
    const auto uh = case1_radial(2, 1.0);  // alpha = m/2 = 1, A matched
    const auto lifted = lift(uh, gp);
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> c(-3.0, 3.0);
    for (int it = 0; it < 200; ++it) {
        const double x[2] = {c(rng), c(rng)};
        const double z[2] = {c(rng), c(rng)};
        const double lhs = eval_grushin_extremal(gp, 1.0, {}, std::span<const double>(x, 2),
                                                 std::span<const double>(z, 2));
        const double xr = std::hypot(x[0], x[1]), zr = std::hypot(z[0], z[1]);
        CHECK(lhs == doctest::Approx(lifted.radial(xr, zr)).epsilon(1e-12));
    }
    CHECK_THROWS_AS(eval_grushin_extremal({1, 2, 1.0}, 1.0, {}, {}, {}),
                    special::unsupported_case);
    CHECK_THROWS_AS(eval_grushin_extremal({2, 2, 2.0}, 1.0, {}, {}, {}),
                    std::domain_error);
}

TEST_CASE("rayleigh_G_radial of the extremal hits the closed-form constant") {
    const GrushinParams gp{1, 1, 1.0};
    quad::GrushinRadialFn u = [](double xr, double zr) {
        const double D = xr * xr + (zr * zr + 1.0) * (zr * zr + 1.0);
        return std::pow(1.0 / D, 0.25);
    };
    const double G = quad::rayleigh_G_radial(u, gp);
    const double S = special::grushin_sharp_constant_tau1(1, 1).value;
    CHECK(std::fabs(G - S) / S < 1e-4);
}

TEST_CASE("general form exponent identity") {
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> tau(0.1, 4.0);
    std::uniform_int_distribution<int> dim(1, 5);
    for (int it = 0; it < 200; ++it) {
        const GrushinParams gp{dim(rng), dim(rng), tau(rng)};
        const WeightPair wp = grushin_to_weight(gp);
        const double lhs = general_exponent(gp);
        const double rhs = 0.5 * (wp.n + wp.alpha - 1.0);
        CHECK(std::fabs(lhs - rhs) <= 1e-14 * rhs);
    }
}

TEST_CASE("general evaluator: tau=1 with the solved profile matches the closed form") {
    const GrushinParams gp{2, 2, 1.0};
    const WeightPair wp = grushin_to_weight(gp);  // beta = alpha - 1 regime
    const auto sol = ode::solve_bvp(wp);
    REQUIRE(sol.status == ode::SolveStatus::Converged);
    std::mt19937_64 rng(23);
    std::uniform_real_distribution<double> c(-3.0, 3.0);
    double rmin = 1e300, rmax = -1e300;
    for (int it = 0; it < 1000; ++it) {
        const double x[2] = {c(rng), c(rng)};
        const double z[2] = {c(rng), c(rng)};
        const double lhs = eval_grushin_general(gp, 1.0, {}, sol.profile,
                                                std::span<const double>(x, 2),
                                                std::span<const double>(z, 2));
        const double rhs = eval_grushin_extremal(gp, 1.0, {}, std::span<const double>(x, 2),
                                                 std::span<const double>(z, 2));
        const double ratio = lhs / rhs;
        rmin = std::min(rmin, ratio);
        rmax = std::max(rmax, ratio);
    }
    CHECK((rmax - rmin) / rmax < 1e-7);
}

TEST_CASE("grushin fields are z-radial by construction") {
    const GrushinParams gp{2, 1, 2.0};
    const WeightPair wp = grushin_to_weight(gp);
    const auto sol = ode::solve_bvp(wp);
    REQUIRE(sol.status == ode::SolveStatus::Converged);
    // m = 1: radial in z means even in z
    const double x[2] = {0.4, -0.2};
    for (double zr : {0.3, 1.0, 2.7}) {
        const double zp[1] = {zr}, zm[1] = {-zr};
        const double a = eval_grushin_general(gp, 1.0, {}, sol.profile,
                                              std::span<const double>(x, 2),
                                              std::span<const double>(zp, 1));
        const double b = eval_grushin_general(gp, 1.0, {}, sol.profile,
                                              std::span<const double>(x, 2),
                                              std::span<const double>(zm, 1));
        CHECK(a == doctest::Approx(b).epsilon(1e-12));
    }
    CHECK(classify(wp).strict_valid);
}

TEST_CASE("functional bridge: G equals the converted F") {
    const GrushinParams gp{2, 2, 1.0};
    {
        const auto uh = case1_radial(2, 1.0);
        CHECK(quad::functional_bridge_check(uh, gp) < 1e-3);
    }
    {
        quad::RadialFn bump = [](double rho, double t) {
            return std::exp(-(rho * rho + (t - 1.0) * (t - 1.0)) / 2.0);
        };
        CHECK(quad::functional_bridge_check(bump, gp) < 1e-3);
    }
}

TEST_CASE("to_lattice materializes the evaluator") {
    const GrushinParams gp{1, 1, 1.0};
    const auto uh = case1_radial(1, 0.5);
    const auto f = lift(uh, gp);
    const auto lat = to_lattice(f, 4.0, 17);
    CHECK(lat.n == 1);
    CHECK(lat.m == 1);
    const int c = lat.center();
    CHECK(lat.values[static_cast<size_t>(c) * 17 + c] ==
          doctest::Approx(uh(0.0, 0.0)).epsilon(1e-12));
}
