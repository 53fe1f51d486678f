#include "wsob/grushin.hpp"

#include <cmath>
#include <stdexcept>

#include "wsob/extremals.hpp"
#include "wsob/special.hpp"

namespace wsob::grushin {

GrushinField lift(const quad::RadialFn& u_half, const GrushinParams& gp) {
    if (!(gp.tau > 0.0)) throw std::domain_error("lift: tau must be positive");
    const double tp1 = gp.tau + 1.0;
    GrushinField f;
    f.gp = gp;
    f.radial = [u_half, tp1](double xr, double zr) { return u_half(xr, std::pow(zr, tp1)); };
    return f;
}

double eval_grushin_extremal(const GrushinParams& gp, double A,
                             std::span<const double> x0, std::span<const double> x,
                             std::span<const double> z) {
    if (std::fabs(gp.tau - 1.0) > 1e-12)
        throw std::domain_error("eval_grushin_extremal: closed form requires tau = 1");
    if (gp.m == 2 && gp.n == 1)
        throw special::unsupported_case(
            "eval_grushin_extremal: the pair (n=1, m=2) is outside the covered family");
    if (!(A > 0.0)) throw std::domain_error("eval_grushin_extremal: A must be positive");
    double d2 = 0.0;
    for (size_t i = 0; i < x.size(); ++i) {
        const double c = i < x0.size() ? x0[i] : 0.0;
        const double d = x[i] - c;
        d2 += d * d;
    }
    double z2 = 0.0;
    for (double c : z) z2 += c * c;
    const double D = d2 + (z2 + A) * (z2 + A);
    return std::pow(A / D, (2.0 * gp.n + gp.m - 2.0) / 4.0);
}

double general_exponent(const GrushinParams& gp) {
    return (gp.homogeneous_dim() - 2.0) / (2.0 * (gp.tau + 1.0));
}

double eval_grushin_general(const GrushinParams& gp, double A,
                            std::span<const double> x0, const ode::RadialProfile& profile,
                            std::span<const double> x, std::span<const double> z) {
    const WeightPair wp = grushin_to_weight(gp);
    double z2 = 0.0;
    for (double c : z) z2 += c * c;
    const double t = std::pow(std::sqrt(z2), gp.tau + 1.0);
    return extremals::ball_to_halfspace(profile, wp, A, x0, x, t);
}

rearrange::LatticeField to_lattice(const GrushinField& f, double extent, int res) {
    rearrange::LatticeField out =
        rearrange::LatticeField::zeros(f.gp.n, f.gp.m, extent, res);
    const int d = out.dims_total();
    std::vector<int> idx(d);
    for (size_t k = 0; k < out.values.size(); ++k) {
        out.unflatten(k, idx);
        double xr = 0.0, zr = 0.0;
        for (int a = 0; a < f.gp.n; ++a) {
            const double c = out.coord(idx[a]);
            xr += c * c;
        }
        for (int a = f.gp.n; a < d; ++a) {
            const double c = out.coord(idx[a]);
            zr += c * c;
        }
        out.values[k] = f.radial(std::sqrt(xr), std::sqrt(zr));
    }
    return out;
}

}  // namespace wsob::grushin
