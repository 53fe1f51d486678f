#pragma once

#include <span>
#include <vector>

#include "wsob/params.hpp"

namespace wsob::ode {

/// Solution samples of the radial ball problem on (0, 1/2), with derivative
/// data for C^1 interpolation and the series coefficients for extension
/// below the startup radius.
struct RadialProfile {
    std::vector<double> r;
    std::vector<double> psi;
    std::vector<double> dpsi;
    double K = 0.0;      // boundary value psi(1/2)
    double psi0 = 0.0;   // center value
    double c2 = 0.0;     // psi ~ psi0 + c2 r^2 near 0

    double psi_at(double rr) const;
    double dpsi_at(double rr) const;
};

struct FrobeniusStart {
    double psi;
    double dpsi;
};

/// Series coefficient of the r^2 term at the center, obtained by balancing
/// the equation at r = 0.
double frobenius_c2(const WeightPair& wp, double psi0);

/// Startup values (psi, psi') at r_eps from the second-order series.
FrobeniusStart frobenius_start(const WeightPair& wp, double psi0, double r_eps);

enum class ShotStatus { Completed, HitZero, Overflow };

struct ShotResult {
    ShotStatus status = ShotStatus::Completed;
    double crossing_r = 0.0;  // failure location for HitZero / Overflow
    double B_end = 0.0;       // (1/4 - r^2)^alpha psi'(r) at the last stop
    double B_limit = 0.0;     // extrapolated limit of the boundary functional
    double K_end = 0.0;       // psi at the last stop
    double K_limit = 0.0;     // extrapolated psi(1/2)
    RadialProfile profile;    // filled when requested
};

struct ShootOptions {
    double r_eps = 1e-4;
    double delta0 = 8e-3;   // outermost endpoint gap; n_dyadic dyadic halvings
    int n_dyadic = 4;
    double rtol = 1e-11;
    double atol = 1e-13;
    double overflow_guard = 1e8;
    bool store_profile = false;
    double r_stop_override = 0.0;  // when > 0, integrate only to this radius
};

/// Integrate from the series startup to the endpoint approach radii,
/// recording the boundary functional at each dyadic stop and extrapolating
/// its limit with the local power model  B(d) = L + c0 d^a + c1 d^{a+1} + c2 d^{a+2}.
ShotResult shoot(const WeightPair& wp, double psi0, const ShootOptions& opt = {});

enum class SolveStatus { Converged, NoSolution, Stagnation };

struct ShootingResult {
    SolveStatus status = SolveStatus::NoSolution;
    double K = 0.0;
    double psi0 = 0.0;
    double residual = 0.0;  // |B_limit| at the accepted shot
    int iters = 0;
    RadialProfile profile;
    bool uniqueness_guaranteed = true;
    bool nonexistence_regime = false;
};

/// Shooting solve: geometric sweep over psi0, bracketing of the boundary
/// functional's sign change among completed shots (with adaptive refinement
/// toward the failure boundary), then bisection. Reports NoSolution when no
/// completed sign change exists anywhere in [1e-6, 1e6].
ShootingResult solve_bvp(const WeightPair& wp, const ShootOptions& opt = {});

/// v(s) = w(tanh(s/2)), w(r) = ((1-r^2)/4)^{(n+alpha-1)/2} psi(r/2), sampled
/// with analytic derivative on a uniform s grid.
struct HyperbolicProfile {
    std::vector<double> s;
    std::vector<double> v;
    std::vector<double> dv;
    double lambda_coef = 0.0;  // (n^2 - (1-alpha)^2)/4
    double K = 0.0;

    double v_at(double s) const;
    double dv_at(double s) const;
};

HyperbolicProfile to_hyperbolic(const RadialProfile& profile, const WeightPair& wp,
                                double s_max = 20.0, int n_samples = 20001);

/// Max relative residual of v'' + (n/tanh s) v' + lambda v + v^{p*-1} = 0 by
/// finite differences, over s in [s_lo, s_hi].
double hyperbolic_residual(const HyperbolicProfile& hp, const WeightPair& wp,
                           double s_lo = 0.5, double s_hi = 12.0);

struct EnergyParams {
    double a;  // 2n/(p*+2)
    double b;  // a(p*-2)
    double A;  // (n^2-(1-alpha)^2)/4 - a^2 p*/2
    double B;  // (a/2)(2 - a p*)
};

EnergyParams energy_params(const WeightPair& wp);

struct EnergySamples {
    std::vector<double> s;
    std::vector<double> E;
    std::vector<double> dE_numeric;   // five-point finite difference of E
    std::vector<double> dE_identity;  // (1/2) G'(s) vhat^2
};

/// Energy function E(s) = (1/2) sinh^b(s) vhat'^2 + |vhat|^{p*}/p* + (1/2) G vhat^2
/// with vhat = sinh^a(s) v, G = A sinh^b + B sinh^{b-2}, along the profile.
EnergySamples energy_function(const HyperbolicProfile& hp, const WeightPair& wp,
                              double s_lo = 0.5, double s_hi = 10.0, int n = 381);

}  // namespace wsob::ode
