#pragma once

#include <functional>
#include <span>
#include <vector>

#include "wsob/ode.hpp"
#include "wsob/params.hpp"
#include "wsob/quadrature.hpp"

namespace wsob::extremals {

/// Evaluator over the full half space (y in R^n, t >= 0).
using HalfSpaceFn = std::function<double(std::span<const double> y, double t)>;

enum class ExtremalCase { Case1, Case2, General };

struct ExtremalSpec {
    WeightPair wp;
    double A = 1.0;
    std::vector<double> y0;  // center; empty means origin
    double k = 1.0;
    ExtremalCase case_id = ExtremalCase::Case1;
    const ode::RadialProfile* profile = nullptr;  // General case only
};

/// k (A/((A+t)^2 + |y-y0|^2))^{(n+alpha-1)/2}  (the beta = alpha-1 extremal).
double eval_case1(const ExtremalSpec& spec, std::span<const double> y, double t);

/// k (A/(A^2 + t^2 + |y-y0|^2))^{(n+alpha-1)/2}  (the beta = alpha extremal).
double eval_case2(const ExtremalSpec& spec, std::span<const double> y, double t);

/// Radial closure u(rho, t) of a centered spec (y0 must be the origin).
quad::RadialFn radial_evaluator(const ExtremalSpec& spec);

/// Full-point closure of a spec.
HalfSpaceFn evaluator(const ExtremalSpec& spec);

/// Inversion sending the half space onto the ball B_{1/2}(-e_{n+1}/2):
/// x = -e_{n+1} + ((y,t)+e_{n+1})/|(y,t)+e_{n+1}|^2; returns the n+1 vector.
std::vector<double> halfspace_to_ball_point(std::span<const double> y, double t);

/// |x + e_{n+1}|^{-(n+alpha-1)} u(-e_{n+1} + (x+e_{n+1})/|x+e_{n+1}|^2).
/// x must lie in the closed ball B_{1/2}(-e_{n+1}/2) (throws otherwise).
double kelvin_to_ball(const HalfSpaceFn& u, const WeightPair& wp,
                      std::span<const double> x);

/// General extremal built from a unit-ball radial profile psi on [0, 1/2]:
///   u(y,t) = k A^g s^{-g} psi(A * |(y-y0, t+A)/s - (0, 1/(2A))|),
/// s = |y-y0|^2 + (t+A)^2, g = (n+alpha-1)/2. Throws when the rescaled
/// argument leaves the profile domain.
double ball_to_halfspace(const ode::RadialProfile& profile, const WeightPair& wp,
                         double A, std::span<const double> y0,
                         std::span<const double> y, double t, double k = 1.0);

/// u^{lambda,z}(y,t) = lambda^{(n+alpha-1)/2} u(lambda y + z, lambda t).
HalfSpaceFn scale_translate(const HalfSpaceFn& u, double lambda,
                            std::vector<double> z, const WeightPair& wp);

/// Max over samples of the relative deviation in the sphere-inversion
/// identity at boundary center b (n+1 vector with last coordinate 0):
///   u(X) = (1+|b|^2)^{g} / |X-b|^{2g} * u(b + (1+|b|^2)(X-b)/|X-b|^2).
/// Samples coinciding with b are skipped.
double moving_sphere_check(const HalfSpaceFn& u, const WeightPair& wp,
                           std::span<const double> b,
                           std::span<const std::vector<double>> samples);

struct ResidualStats {
    double mean;    // mean of -div(t^a grad u) / (t^b u^{p*-1})
    double spread;  // max relative deviation from the mean
};

struct ResidualGrid {
    double rho_min = 0.05, rho_max = 2.0;
    double t_min = 0.05, t_max = 2.0;
    int n = 400;
};

/// Pointwise ratio of the divergence-form operator to the nonlinearity by
/// centered second differences, Richardson-extrapolated over h and h/2.
/// For an exact extremal the ratio is a constant (the normalization of the
/// bubble); the spread measures how far the field is from solving the PDE.
ResidualStats pde_residual_ratio(const quad::RadialFn& u, const WeightPair& wp,
                                 const ResidualGrid& grid = {});

/// t^alpha du/dt at (rho, t) for a sequence of t values; the degenerate
/// Neumann condition demands a decreasing trend toward 0.
std::vector<double> neumann_flux(const quad::RadialFn& u, const WeightPair& wp,
                                 double rho, std::span<const double> ts);

}  // namespace wsob::extremals
