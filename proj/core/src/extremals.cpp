#include "wsob/extremals.hpp"

#include <cmath>
#include <stdexcept>

namespace wsob::extremals {

namespace {

double dist2(std::span<const double> y, std::span<const double> y0) {
    double d2 = 0.0;
    for (size_t i = 0; i < y.size(); ++i) {
        const double c = i < y0.size() ? y0[i] : 0.0;
        const double d = y[i] - c;
        d2 += d * d;
    }
    return d2;
}

}  // namespace

double eval_case1(const ExtremalSpec& spec, std::span<const double> y, double t) {
    const double g = 0.5 * (spec.wp.n + spec.wp.alpha - 1.0);
    const double D = (spec.A + t) * (spec.A + t) + dist2(y, spec.y0);
    return spec.k * std::pow(spec.A / D, g);
}

double eval_case2(const ExtremalSpec& spec, std::span<const double> y, double t) {
    const double g = 0.5 * (spec.wp.n + spec.wp.alpha - 1.0);
    const double D = spec.A * spec.A + t * t + dist2(y, spec.y0);
    return spec.k * std::pow(spec.A / D, g);
}

quad::RadialFn radial_evaluator(const ExtremalSpec& spec) {
    for (double c : spec.y0)
        if (c != 0.0)
            throw std::invalid_argument("radial_evaluator: spec must be centered");
    ExtremalSpec s = spec;
    if (s.case_id == ExtremalCase::General) {
        if (!s.profile) throw std::invalid_argument("radial_evaluator: missing profile");
        const ode::RadialProfile* prof = s.profile;
        WeightPair wp = s.wp;
        double A = s.A, k = s.k;
        return [prof, wp, A, k](double rho, double t) {
            const double y[1] = {rho};
            return ball_to_halfspace(*prof, wp, A, {}, std::span<const double>(y, 1), t, k);
        };
    }
    return [s](double rho, double t) {
        const double y[1] = {rho};
        return s.case_id == ExtremalCase::Case1
                   ? eval_case1(s, std::span<const double>(y, 1), t)
                   : eval_case2(s, std::span<const double>(y, 1), t);
    };
}

HalfSpaceFn evaluator(const ExtremalSpec& spec) {
    ExtremalSpec s = spec;
    if (s.case_id == ExtremalCase::General) {
        if (!s.profile) throw std::invalid_argument("evaluator: missing profile");
        const ode::RadialProfile* prof = s.profile;
        return [prof, s](std::span<const double> y, double t) {
            return ball_to_halfspace(*prof, s.wp, s.A, s.y0, y, t, s.k);
        };
    }
    return [s](std::span<const double> y, double t) {
        return s.case_id == ExtremalCase::Case1 ? eval_case1(s, y, t) : eval_case2(s, y, t);
    };
}

std::vector<double> halfspace_to_ball_point(std::span<const double> y, double t) {
    const size_t n = y.size();
    std::vector<double> w(n + 1);
    for (size_t i = 0; i < n; ++i) w[i] = y[i];
    w[n] = t + 1.0;  // (y,t) + e_{n+1}
    double norm2 = 0.0;
    for (double c : w) norm2 += c * c;
    for (auto& c : w) c /= norm2;
    w[n] -= 1.0;  // -e_{n+1} + .../|...|^2
    return w;
}

double kelvin_to_ball(const HalfSpaceFn& u, const WeightPair& wp,
                      std::span<const double> x) {
    const size_t n1 = x.size();
    if (n1 != static_cast<size_t>(wp.n) + 1)
        throw std::invalid_argument("kelvin_to_ball: point must have n+1 coordinates");
    // check membership in the closed ball B_{1/2}(-e_{n+1}/2)
    double ball2 = 0.0;
    for (size_t i = 0; i + 1 < n1; ++i) ball2 += x[i] * x[i];
    const double xc = x[n1 - 1] + 0.5;
    ball2 += xc * xc;
    if (ball2 > 0.25 * (1.0 + 1e-12))
        throw std::domain_error("kelvin_to_ball: point outside the closed ball");

    std::vector<double> w(x.begin(), x.end());
    w[n1 - 1] += 1.0;  // x + e_{n+1}
    double norm2 = 0.0;
    for (double c : w) norm2 += c * c;
    std::vector<double> img(n1);
    for (size_t i = 0; i < n1; ++i) img[i] = w[i] / norm2;
    img[n1 - 1] -= 1.0;
    const double t = std::max(img[n1 - 1], 0.0);
    const double g = wp.n + wp.alpha - 1.0;
    const double uval = u(std::span<const double>(img.data(), n1 - 1), t);
    return std::pow(norm2, -0.5 * g) * uval;
}

double ball_to_halfspace(const ode::RadialProfile& profile, const WeightPair& wp,
                         double A, std::span<const double> y0,
                         std::span<const double> y, double t, double k) {
    if (!(A > 0.0)) throw std::domain_error("ball_to_halfspace: A must be positive");
    const double g = 0.5 * (wp.n + wp.alpha - 1.0);
    const double s = dist2(y, y0) + (t + A) * (t + A);
    // |v - (0, 1/(2A))|^2 with v = (y-y0, t+A)/s
    const double arg2 = 1.0 / s - (t + A) / (A * s) + 1.0 / (4.0 * A * A);
    const double arg = std::sqrt(std::max(arg2, 0.0));
    const double r = A * arg;  // rescaled into the unit profile domain [0, 1/2]
    if (r > 0.5 * (1.0 + 1e-9))
        throw std::out_of_range("ball_to_halfspace: profile argument out of range");
    return k * std::pow(A, g) * std::pow(s, -g) * profile.psi_at(std::min(r, 0.5));
}

HalfSpaceFn scale_translate(const HalfSpaceFn& u, double lambda, std::vector<double> z,
                            const WeightPair& wp) {
    if (!(lambda > 0.0)) throw std::domain_error("scale_translate: lambda must be positive");
    const double g = 0.5 * (wp.n + wp.alpha - 1.0);
    const double pref = std::pow(lambda, g);
    return [u, lambda, z = std::move(z), pref](std::span<const double> y, double t) {
        std::vector<double> yy(y.size());
        for (size_t i = 0; i < y.size(); ++i)
            yy[i] = lambda * y[i] + (i < z.size() ? z[i] : 0.0);
        return pref * u(yy, lambda * t);
    };
}

double moving_sphere_check(const HalfSpaceFn& u, const WeightPair& wp,
                           std::span<const double> b,
                           std::span<const std::vector<double>> samples) {
    const size_t n1 = b.size();
    if (std::fabs(b[n1 - 1]) > 0.0)
        throw std::invalid_argument("moving_sphere_check: b must lie on the boundary");
    double b2 = 0.0;
    for (double c : b) b2 += c * c;
    const double lam2 = 1.0 + b2;
    const double g = wp.n + wp.alpha - 1.0;

    double worst = 0.0;
    std::vector<double> img(n1);
    for (const auto& X : samples) {
        double d2 = 0.0;
        for (size_t i = 0; i < n1; ++i) {
            const double d = X[i] - b[i];
            d2 += d * d;
        }
        if (d2 < 1e-24) continue;  // sample coincides with b
        for (size_t i = 0; i < n1; ++i) img[i] = b[i] + lam2 * (X[i] - b[i]) / d2;
        const double t_img = std::max(img[n1 - 1], 0.0);
        const double lhs = u(std::span<const double>(X.data(), n1 - 1), X[n1 - 1]);
        const double rhs = std::pow(lam2, 0.5 * g) / std::pow(d2, 0.5 * g) *
                           u(std::span<const double>(img.data(), n1 - 1), t_img);
        if (lhs > 0.0) worst = std::max(worst, std::fabs(lhs - rhs) / lhs);
    }
    return worst;
}

namespace {

// second-order stencil of the divergence-form ratio at one point
double residual_ratio_at(const quad::RadialFn& u, const WeightPair& wp, double rho,
                         double t, double h, double pstar) {
    const double upp = u(rho + h, t), upm = u(rho - h, t);
    const double utp = u(rho, t + h), utm = u(rho, t - h);
    const double u0 = u(rho, t);
    const double u_rr = (upp - 2.0 * u0 + upm) / (h * h);
    const double u_r = (upp - upm) / (2.0 * h);
    const double u_tt = (utp - 2.0 * u0 + utm) / (h * h);
    const double u_t = (utp - utm) / (2.0 * h);
    const double div_term = std::pow(t, wp.alpha) *
                                (u_rr + (wp.n - 1.0) * u_r / rho + u_tt) +
                            wp.alpha * std::pow(t, wp.alpha - 1.0) * u_t;
    const double rhs = std::pow(t, wp.beta) * std::pow(u0, pstar - 1.0);
    return -div_term / rhs;
}

}  // namespace

ResidualStats pde_residual_ratio(const quad::RadialFn& u, const WeightPair& wp,
                                 const ResidualGrid& grid) {
    const double pstar = critical_exponent(wp);
    std::vector<double> ratios;
    ratios.reserve(static_cast<size_t>(grid.n) * grid.n);
    const double h_rho = (grid.rho_max - grid.rho_min) / grid.n;
    const double h_t = (grid.t_max - grid.t_min) / grid.n;
    const double h = 0.5 * std::min(h_rho, h_t);
    for (int i = 0; i < grid.n; ++i) {
        const double rho = grid.rho_min + (grid.rho_max - grid.rho_min) * (i + 0.5) / grid.n;
        for (int j = 0; j < grid.n; ++j) {
            const double t = grid.t_min + (grid.t_max - grid.t_min) * (j + 0.5) / grid.n;
            if (u(rho, t) <= 0.0)
                throw std::domain_error("pde_residual_ratio: field must be positive");
            const double r_h = residual_ratio_at(u, wp, rho, t, h, pstar);
            const double r_h2 = residual_ratio_at(u, wp, rho, t, 0.5 * h, pstar);
            ratios.push_back(r_h2 + (r_h2 - r_h) / 3.0);  // h^2 Richardson
        }
    }
    double mean = 0.0;
    for (double v : ratios) mean += v;
    mean /= ratios.size();
    double spread = 0.0;
    for (double v : ratios) spread = std::max(spread, std::fabs(v - mean));
    return {mean, spread / std::fabs(mean)};
}

std::vector<double> neumann_flux(const quad::RadialFn& u, const WeightPair& wp, double rho,
                                 std::span<const double> ts) {
    std::vector<double> out;
    out.reserve(ts.size());
    for (double t : ts) {
        const double h = 0.25 * t;
        const double ut = (u(rho, t + h) - u(rho, t - h)) / (2.0 * h);
        out.push_back(std::pow(t, wp.alpha) * ut);
    }
    return out;
}

}  // namespace wsob::extremals
