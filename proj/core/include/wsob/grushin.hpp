#pragma once

#include <cmath>
#include <functional>
#include <span>

#include "wsob/ode.hpp"
#include "wsob/params.hpp"
#include "wsob/quadrature.hpp"
#include "wsob/rearrange.hpp"

namespace wsob::grushin {

/// Lazily evaluated function on R^n_x x R^m_z, radial in z (and here also in
/// x, since every field this module builds comes from a y-radial half-space
/// function).
struct GrushinField {
    GrushinParams gp;
    quad::GrushinRadialFn radial;  // (|x|, |z|) -> value

    double operator()(std::span<const double> x, std::span<const double> z) const {
        double xr = 0.0, zr = 0.0;
        for (double c : x) xr += c * c;
        for (double c : z) zr += c * c;
        return radial(std::sqrt(xr), std::sqrt(zr));
    }
};

/// u(x, z) = u_half(|x|, |z|^{tau+1}).
GrushinField lift(const quad::RadialFn& u_half, const GrushinParams& gp);

/// (A/(|x-x0|^2 + (|z|^2+A)^2))^{(2n+m-2)/4}; requires tau == 1 and the pair
/// (m=2, n=1) is rejected.
double eval_grushin_extremal(const GrushinParams& gp, double A,
                             std::span<const double> x0, std::span<const double> x,
                             std::span<const double> z);

/// Exponent (Q-2)/(2(tau+1)) of the general form; equals (n+alpha-1)/2 under
/// the parameter mapping.
double general_exponent(const GrushinParams& gp);

/// General extremal built from the unit-ball profile: the half-space form
/// evaluated at (x - x0, |z|^{tau+1}).
double eval_grushin_general(const GrushinParams& gp, double A,
                            std::span<const double> x0, const ode::RadialProfile& profile,
                            std::span<const double> x, std::span<const double> z);

/// Materialize on a lattice (only sensible for small n+m).
rearrange::LatticeField to_lattice(const GrushinField& f, double extent, int res);

}  // namespace wsob::grushin
