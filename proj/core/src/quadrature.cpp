#include "wsob/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "wsob/rearrange.hpp"
#include "wsob/special.hpp"

namespace wsob::quad {

namespace {

// Target: neglected exterior mass of power-law integrands below ~e^{-32}.
constexpr double kLogReach = 32.0;

struct Weights1D {
    // I = sum_j w[j] * g(x_j) approximates integral x^gamma g dx.
    std::vector<double> w;
};

// Product-Simpson with exact weight moments: on each node triple the smooth
// factor g is interpolated quadratically and integral x^gamma * poly is done
// in closed form. Exact for polynomial g of degree <= 2 and any gamma > -1;
// the per-triple scaling by the middle node keeps magnitudes representable
// on wide geometric grids.
Weights1D weighted_weights(const std::vector<double>& x, double gamma) {
    const int n = static_cast<int>(x.size());
    if (n < 3) throw std::invalid_argument("weighted_weights: need at least 3 nodes");
    if (gamma <= -1.0) throw std::domain_error("weighted_weights: weight exponent <= -1 diverges");
    Weights1D W;
    W.w.assign(n, 0.0);

    auto add_triple = [&](int j) {
        const double mu = x[j + 1];
        const double xi0 = x[j] / mu - 1.0, xi1 = 0.0, xi2 = x[j + 2] / mu - 1.0;
        // I_p = integral (1+xi)^{gamma+p} dxi over [xi0, xi2]
        auto Ip = [&](int p) {
            const double e = gamma + p + 1.0;
            return (std::pow(1.0 + xi2, e) - std::pow(1.0 + xi0, e)) / e;
        };
        const double I0 = Ip(0), I1 = Ip(1), I2 = Ip(2);
        const double m0 = I0, m1 = I1 - I0, m2 = I2 - 2.0 * I1 + I0;
        const double scale = std::pow(mu, gamma + 1.0);
        const double D0 = (xi0 - xi1) * (xi0 - xi2);
        const double D1 = (xi1 - xi0) * (xi1 - xi2);
        const double D2 = (xi2 - xi0) * (xi2 - xi1);
        W.w[j] += scale * (m2 - (xi1 + xi2) * m1 + xi1 * xi2 * m0) / D0;
        W.w[j + 1] += scale * (m2 - (xi0 + xi2) * m1 + xi0 * xi2 * m0) / D1;
        W.w[j + 2] += scale * (m2 - (xi0 + xi1) * m1 + xi0 * xi1 * m0) / D2;
    };
    auto add_linear_cell = [&](int j) {
        // exact moments on [x_j, x_{j+1}] with g linear
        const double mu = x[j + 1];
        const double r0 = x[j] / mu;
        const double e1 = gamma + 1.0, e2 = gamma + 2.0;
        const double M0 = std::pow(mu, e1) * (1.0 - std::pow(r0, e1)) / e1;
        const double M1 = std::pow(mu, e2) * (1.0 - std::pow(r0, e2)) / e2;  // of x
        const double a = x[j], h = x[j + 1] - x[j];
        // g(x) = g0 + (g1-g0)(x-a)/h
        W.w[j] += M0 - (M1 - a * M0) / h;
        W.w[j + 1] += (M1 - a * M0) / h;
    };

    int j = 0;
    for (; j + 2 < n; j += 2) add_triple(j);
    if (j + 1 < n) add_linear_cell(j);  // even node count: trailing cell
    return W;
}

double masked_pairwise(const std::vector<double>& v) { return pairwise_sum(v.data(), v.size()); }

// Least-squares fit g ~ c r^{-q} over grid nodes with r in [r_lo, r_hi].
struct PowerFit {
    double c = 0.0, q = 0.0;
    bool ok = false;
};

PowerFit fit_power_tail(const Field2D& f, const std::vector<double>& g, double r_lo,
                        double r_hi) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    size_t cnt = 0;
    for (int i = 0; i < f.nr(); ++i) {
        for (int j = 0; j < f.nt(); ++j) {
            const double r = std::hypot(f.rho_grid[i], f.t_grid[j]);
            const double gv = g[static_cast<size_t>(i) * f.nt() + j];
            if (r < r_lo || r > r_hi || !(gv > 0.0)) continue;
            const double lx = std::log(r), ly = std::log(gv);
            sx += lx; sy += ly; sxx += lx * lx; sxy += lx * ly;
            ++cnt;
        }
    }
    PowerFit fit;
    if (cnt < 8) return fit;
    const double det = cnt * sxx - sx * sx;
    if (std::fabs(det) < 1e-30) return fit;
    const double slope = (cnt * sxy - sx * sy) / det;
    const double icpt = (sy - slope * sx) / cnt;
    fit.q = -slope;
    fit.c = std::exp(icpt);
    fit.ok = true;
    return fit;
}

// integral over the quarter plane minus the box [0,R]x[0,T] of
// rho^{g_rho} t^{g_t} c r^{-q}, in polar coordinates.
double exterior_power_integral(double R, double T, double g_rho, double g_t, double c,
                               double q) {
    const double nu = g_rho + g_t + 2.0 - q;
    if (nu >= 0.0) return 0.0;  // fitted tail not integrable; skip correction
    // substitute u = sin^2 phi: 1/2 u^{(g_t-1)/2} (1-u)^{(g_rho-1)/2} Rb(u)^nu/(-nu)
    // integrate each half in a graded grid from its endpoint.
    auto rb = [&](double u) {
        const double s = std::sqrt(u), cphi = std::sqrt(1.0 - u);
        return std::min(R / std::max(cphi, 1e-300), T / std::max(s, 1e-300));
    };
    auto f = [&](double u) {
        return 0.5 * std::pow(u, 0.5 * (g_t - 1.0)) * std::pow(1.0 - u, 0.5 * (g_rho - 1.0)) *
               std::pow(rb(u), nu) / (-nu);
    };
    // exact-moment weighted rule on each half (weight exponents (g_t-1)/2 and (g_rho-1)/2)
    double total = 0.0;
    for (int half = 0; half < 2; ++half) {
        const double we = half == 0 ? 0.5 * (g_t - 1.0) : 0.5 * (g_rho - 1.0);
        std::vector<double> xs = log_grid(1e-12, 0.5, 200);
        Weights1D W = weighted_weights(xs, we);
        double acc = 0.0;
        for (size_t k = 0; k < xs.size(); ++k) {
            const double u = half == 0 ? xs[k] : 1.0 - xs[k];
            const double smooth =
                half == 0 ? 0.5 * std::pow(1.0 - u, 0.5 * (g_rho - 1.0)) * std::pow(rb(u), nu) / (-nu)
                          : 0.5 * std::pow(u, 0.5 * (g_t - 1.0)) * std::pow(rb(u), nu) / (-nu);
            acc += W.w[k] * smooth;
        }
        total += acc;
    }
    (void)f;
    return c * total;
}

double integrate_with_weights(const Field2D& f, const std::vector<double>& g,
                              const Weights1D& wr, const Weights1D& wt) {
    std::vector<double> terms(g.size());
    const int nt = f.nt();
    for (int i = 0; i < f.nr(); ++i)
        for (int j = 0; j < nt; ++j) {
            const double gv = g[static_cast<size_t>(i) * nt + j];
            terms[static_cast<size_t>(i) * nt + j] =
                gv == 0.0 ? 0.0 : wr.w[i] * wt.w[j] * gv;
        }
    return masked_pairwise(terms);
}

}  // namespace

double pairwise_sum(const double* data, size_t n) {
    if (n <= 8) {
        double s = 0.0;
        for (size_t i = 0; i < n; ++i) s += data[i];
        return s;
    }
    const size_t half = n / 2;
    return pairwise_sum(data, half) + pairwise_sum(data + half, n - half);
}

std::vector<double> log_grid(double x_min, double x_max, int n) {
    if (!(x_min > 0.0) || !(x_max > x_min) || n < 2)
        throw std::invalid_argument("log_grid: bad range");
    std::vector<double> x(n);
    const double s0 = std::log(x_min), s1 = std::log(x_max);
    for (int i = 0; i < n; ++i)
        x[i] = std::exp(s0 + (s1 - s0) * i / (n - 1));
    x.front() = x_min;
    x.back() = x_max;
    return x;
}

namespace {

// Geometric grid with three density zones: the unit-scale core gets the full
// resolution h_core, the flat inner shoulder (toward 0) and the smoothly
// decaying outer shoulder are coarser by fixed factors so that the whole
// family scales with one parameter and Richardson extrapolation stays clean.
std::vector<double> zoned_log_grid(double x_min, double x_max, double h_core) {
    const double smin = std::log(x_min), smax = std::log(x_max);
    const double c_lo = std::clamp(-5.0, smin, smax);
    const double c_hi = std::clamp(9.0, smin, smax);
    std::vector<double> sig;
    auto fill = [&sig](double lo, double hi, double h) {
        if (hi <= lo) return;
        const int k = std::max(1, static_cast<int>(std::ceil((hi - lo) / h)));
        for (int i = 0; i < k; ++i) sig.push_back(lo + (hi - lo) * i / k);
    };
    fill(smin, c_lo, 8.0 * h_core);
    fill(c_lo, c_hi, h_core);
    fill(c_hi, smax, 3.0 * h_core);
    sig.push_back(smax);
    std::vector<double> x(sig.size());
    for (size_t i = 0; i < sig.size(); ++i) x[i] = std::exp(sig[i]);
    return x;
}

}  // namespace

GridSpec resolve_grids(const WeightPair& wp, const QuadConfig& cfg) {
    const double a = wp.alpha, b = wp.beta;
    const int n = wp.n;
    const double decay = cfg.decay_rate > 0.0 ? cfg.decay_rate : (n + a - 1.0);
    // slowest exterior decay among the gradient and norm integrands
    const double rate = std::min(n + a - 1.0, std::min(n + b + 1.0, decay));
    const double R = cfg.R > 0.0 ? cfg.R : std::exp(kLogReach / std::max(rate, 0.05) + 3.0);
    const double T = cfg.T > 0.0 ? cfg.T : R;
    const double rho_min = std::exp(-kLogReach / n - 2.0);
    const double t_min = std::exp(-kLogReach / (std::min(a, b) + 1.0) - 2.0);
    GridSpec gs;
    gs.rho = zoned_log_grid(rho_min, R, 18.0 / (cfg.n_rho - 1));
    gs.t = zoned_log_grid(t_min, T, 18.0 / (cfg.n_t - 1));
    return gs;
}

Field2D sample_field(const RadialFn& u, const WeightPair& wp, const QuadConfig& cfg) {
    GridSpec gs = resolve_grids(wp, cfg);
    Field2D f;
    f.wp = wp;
    f.rho_grid = std::move(gs.rho);
    f.t_grid = std::move(gs.t);
    f.values.resize(static_cast<size_t>(f.nr()) * f.nt());
    for (int i = 0; i < f.nr(); ++i)
        for (int j = 0; j < f.nt(); ++j)
            f.at(i, j) = u(f.rho_grid[i], f.t_grid[j]);
    return f;
}

double integrate_weighted(const Field2D& f, double g_rho, double g_t, TailMode tail) {
    Weights1D wr = weighted_weights(f.rho_grid, g_rho);
    Weights1D wt = weighted_weights(f.t_grid, g_t);
    double I = integrate_with_weights(f, f.values, wr, wt);
    if (tail == TailMode::PowerLaw) {
        const double R = f.rho_grid.back(), T = f.t_grid.back();
        const double r_hi = std::min(R, T);
        PowerFit fit = fit_power_tail(f, f.values, r_hi / 3.0, r_hi);
        if (fit.ok) I += exterior_power_integral(R, T, g_rho, g_t, fit.c, fit.q);
    }
    return I;
}

double weighted_lp_norm(const Field2D& f, double gamma, double p, TailMode tail) {
    if (gamma <= -1.0)
        throw std::domain_error("weighted_lp_norm: exponent <= -1 diverges");
    if (p < 1.0) throw std::domain_error("weighted_lp_norm: p must be >= 1");
    Field2D absp = f;
    for (auto& v : absp.values) v = std::pow(std::fabs(v), p);
    const double I =
        special::unit_sphere_area(f.wp.n) * integrate_weighted(absp, f.wp.n - 1.0, gamma, tail);
    return std::pow(I, 1.0 / p);
}

namespace {

// d/dx along one grid line by 3-point stencils on arbitrary nodes. When the
// nodal differences sit below double rounding the stencil would amplify pure
// noise (notably 1/t on geometric grids reaching t ~ 1e-40); such
// derivatives are indistinguishable from zero and are clamped.
void derivative_line(const double* g, const std::vector<double>& x, int stride, int count,
                     double* out, int out_stride) {
    auto G = [&](int k) { return g[static_cast<size_t>(k) * stride]; };
    auto diff = [](double a, double b) {
        const double d = a - b;
        return std::fabs(d) <= 32.0 * 1e-16 * (std::fabs(a) + std::fabs(b)) ? 0.0 : d;
    };
    for (int k = 0; k < count; ++k) {
        double d;
        if (k == 0) {
            const double h1 = x[1] - x[0], h2 = x[2] - x[1];
            const double d1 = diff(G(1), G(0)), d2 = diff(G(2), G(1));
            d = (2.0 * h1 + h2) / (h1 * (h1 + h2)) * d1 - h1 / (h2 * (h1 + h2)) * d2;
        } else if (k == count - 1) {
            const double h1 = x[k - 1] - x[k - 2], h2 = x[k] - x[k - 1];
            const double e1 = diff(G(k - 1), G(k - 2)), e2 = diff(G(k), G(k - 1));
            d = -h2 / (h1 * (h1 + h2)) * (e1 + e2) + (h1 + h2) / (h1 * h2) * e2;
        } else {
            const double hm = x[k] - x[k - 1], hp = x[k + 1] - x[k];
            d = (hm * hm * diff(G(k + 1), G(k)) + hp * hp * diff(G(k), G(k - 1))) /
                (hm * hp * (hm + hp));
        }
        out[static_cast<size_t>(k) * out_stride] = d;
    }
}

}  // namespace

Field2D gradient_sq(const Field2D& f) {
    const int nr = f.nr(), nt = f.nt();
    Field2D g = f;
    std::vector<double> dr(static_cast<size_t>(nr) * nt), dt(static_cast<size_t>(nr) * nt);
    for (int j = 0; j < nt; ++j)
        derivative_line(f.values.data() + j, f.rho_grid, nt, nr, dr.data() + j, nt);
    for (int i = 0; i < nr; ++i)
        derivative_line(f.values.data() + static_cast<size_t>(i) * nt, f.t_grid, 1, nt,
                        dt.data() + static_cast<size_t>(i) * nt, 1);
    for (size_t k = 0; k < g.values.size(); ++k)
        g.values[k] = dr[k] * dr[k] + dt[k] * dt[k];
    return g;
}

double rayleigh_F(const Field2D& u, const WeightPair& wp, TailMode tail) {
    const double pstar = critical_exponent(wp);
    const double Sn = special::unit_sphere_area(wp.n);
    Field2D g = gradient_sq(u);
    const double num = Sn * integrate_weighted(g, wp.n - 1.0, wp.alpha, tail);
    Field2D absp = u;
    for (auto& v : absp.values) v = std::pow(std::fabs(v), pstar);
    const double den = Sn * integrate_weighted(absp, wp.n - 1.0, wp.beta, tail);
    if (!(den > 0.0)) throw std::domain_error("rayleigh_F: degenerate field");
    return num / std::pow(den, 2.0 / pstar);
}

double rayleigh_F_richardson(const RadialFn& u, const WeightPair& wp, QuadConfig cfg) {
    QuadConfig fine = cfg;
    fine.n_rho = 2 * cfg.n_rho - 1;
    fine.n_t = 2 * cfg.n_t - 1;
    const double Fc = rayleigh_F(sample_field(u, wp, cfg), wp, cfg.tail_mode);
    const double Ff = rayleigh_F(sample_field(u, wp, fine), wp, cfg.tail_mode);
    return Ff + (Ff - Fc) / 3.0;
}

// ---------------------------------------------------------------------------
// Grushin functional
// ---------------------------------------------------------------------------

double rayleigh_G(const rearrange::LatticeField& u, const GrushinParams& gp) {
    using rearrange::LatticeField;
    const int d = u.dims_total();
    const int res = u.res;
    const double h = u.spacing();
    const double Q = gp.homogeneous_dim();
    const double s = 2.0 * Q / (Q - 2.0);
    const double tp1 = gp.tau + 1.0;

    std::vector<double> num_terms(u.values.size()), den_terms(u.values.size());
    std::vector<int> idx(d);
    const size_t total = u.values.size();
    std::vector<double> coord(d);
    for (size_t flat = 0; flat < total; ++flat) {
        u.unflatten(flat, idx);
        double wtrap = 1.0;
        for (int ax = 0; ax < d; ++ax)
            if (idx[ax] == 0 || idx[ax] == res - 1) wtrap *= 0.5;
        double z2 = 0.0;
        for (int ax = gp.n; ax < d; ++ax) {
            const double c = u.coord(idx[ax]);
            z2 += c * c;
        }
        double gx = 0.0, gz = 0.0;
        for (int ax = 0; ax < d; ++ax) {
            const size_t stride = u.stride(ax);
            double der;
            if (idx[ax] == 0)
                der = (u.values[flat + stride] - u.values[flat]) / h;
            else if (idx[ax] == res - 1)
                der = (u.values[flat] - u.values[flat - stride]) / h;
            else
                der = (u.values[flat + stride] - u.values[flat - stride]) / (2.0 * h);
            if (ax < gp.n)
                gx += der * der;
            else
                gz += der * der;
        }
        const double weight_x = tp1 * tp1 * std::pow(z2, gp.tau);
        num_terms[flat] = wtrap * (gz + weight_x * gx);
        den_terms[flat] = wtrap * std::pow(std::fabs(u.values[flat]), s);
    }
    const double cell = std::pow(h, d);
    const double num = cell * pairwise_sum(num_terms.data(), num_terms.size());
    const double den = cell * pairwise_sum(den_terms.data(), den_terms.size());
    if (!(den > 0.0)) throw std::domain_error("rayleigh_G: degenerate field");
    return num / std::pow(den, (Q - 2.0) / Q);
}

namespace {

double rayleigh_G_radial_at(const GrushinRadialFn& u, const GrushinParams& gp, double h) {
    const double Q = gp.homogeneous_dim();
    const double s = 2.0 * Q / (Q - 2.0);
    const double tp1 = gp.tau + 1.0;
    const double Sn = special::unit_sphere_area(gp.n);
    const double Sm = gp.m * special::unit_ball_volume(gp.m);  // |S^{m-1}|

    const double rate = (Q - 2.0) / (2.0 * tp1);  // slowest plausible integrand decay
    const double smax = kLogReach / std::max(rate, 0.05) + 4.0;
    const double sig_min = -kLogReach / gp.n - 2.0;
    const double tau_min = -kLogReach / gp.m - 2.0;

    const int nr = static_cast<int>((smax - sig_min) / h) + 2;
    const int nz = static_cast<int>((smax - tau_min) / h) + 2;
    std::vector<double> xr(nr), zr(nz);
    for (int i = 0; i < nr; ++i) xr[i] = std::exp(sig_min + i * h);
    for (int j = 0; j < nz; ++j) zr[j] = std::exp(tau_min + j * h);

    std::vector<double> U(static_cast<size_t>(nr) * nz);
    for (int i = 0; i < nr; ++i)
        for (int j = 0; j < nz; ++j) U[static_cast<size_t>(i) * nz + j] = u(xr[i], zr[j]);

    std::vector<double> num_terms(U.size()), den_terms(U.size());
    for (int i = 0; i < nr; ++i) {
        for (int j = 0; j < nz; ++j) {
            const size_t k = static_cast<size_t>(i) * nz + j;
            double dsig, dtau;
            if (i == 0) dsig = (U[k + nz] - U[k]) / h;
            else if (i == nr - 1) dsig = (U[k] - U[k - nz]) / h;
            else dsig = (U[k + nz] - U[k - nz]) / (2.0 * h);
            if (j == 0) dtau = (U[k + 1] - U[k]) / h;
            else if (j == nz - 1) dtau = (U[k] - U[k - 1]) / h;
            else dtau = (U[k + 1] - U[k - 1]) / (2.0 * h);
            const double ux = dsig / xr[i];
            const double uz = dtau / zr[j];
            const double wx = std::pow(xr[i], gp.n);      // rho^{n-1} drho = rho^n dsig
            const double wz = std::pow(zr[j], gp.m);
            const double wtrap = (i == 0 || i == nr - 1 ? 0.5 : 1.0) *
                                 (j == 0 || j == nz - 1 ? 0.5 : 1.0);
            const double g = uz * uz + tp1 * tp1 * std::pow(zr[j], 2.0 * gp.tau) * ux * ux;
            num_terms[k] = wtrap * wx * wz * g;
            den_terms[k] = wtrap * wx * wz * std::pow(std::fabs(U[k]), s);
        }
    }
    const double scale = Sn * Sm * h * h;
    const double num = scale * pairwise_sum(num_terms.data(), num_terms.size());
    const double den = scale * pairwise_sum(den_terms.data(), den_terms.size());
    if (!(den > 0.0)) throw std::domain_error("rayleigh_G_radial: degenerate field");
    return num / std::pow(den, (Q - 2.0) / Q);
}

}  // namespace

double rayleigh_G_radial(const GrushinRadialFn& u, const GrushinParams& gp, int n_nodes) {
    (void)n_nodes;
    const double Gc = rayleigh_G_radial_at(u, gp, 0.08);
    const double Gf = rayleigh_G_radial_at(u, gp, 0.04);
    return Gf + (Gf - Gc) / 3.0;
}

double functional_bridge_check(const RadialFn& u_half, const GrushinParams& gp) {
    const double tp1 = gp.tau + 1.0;
    GrushinRadialFn lifted = [u_half, tp1](double xr, double zrad) {
        return u_half(xr, std::pow(zrad, tp1));
    };
    const double G = rayleigh_G_radial(lifted, gp);
    const WeightPair wp = grushin_to_weight(gp);
    QuadConfig cfg;
    cfg.n_rho = cfg.n_t = 513;
    const double F = rayleigh_F_richardson(u_half, wp, cfg);
    const double conv = constant_conversion(gp, F);
    return std::fabs(G - conv) / G;
}

double poincare_check(const Field2D& u, double t_center, double r, const WeightPair& wp) {
    if (!(r > 0.0)) throw std::domain_error("poincare_check: r must be positive");
    const double rho_max = u.rho_grid.back(), t_max = u.t_grid.back();
    if (3.0 * r > rho_max || t_center + 3.0 * r > t_max)
        throw std::domain_error("poincare_check: 3r-ball not contained in the grid");

    auto masked = [&](double radius, const std::vector<double>& g) {
        std::vector<double> out(g.size(), 0.0);
        for (int i = 0; i < u.nr(); ++i)
            for (int j = 0; j < u.nt(); ++j) {
                const double dr = u.rho_grid[i];
                const double dt = u.t_grid[j] - t_center;
                if (dr * dr + dt * dt <= radius * radius)
                    out[static_cast<size_t>(i) * u.nt() + j] =
                        g[static_cast<size_t>(i) * u.nt() + j];
            }
        return out;
    };

    Weights1D wr = weighted_weights(u.rho_grid, wp.n - 1.0);
    Weights1D wt = weighted_weights(u.t_grid, wp.alpha);
    Field2D tmp = u;

    std::vector<double> ones(u.values.size(), 1.0);
    tmp.values = masked(r, ones);
    const double vol = integrate_with_weights(u, tmp.values, wr, wt);
    if (!(vol > 0.0)) throw std::domain_error("poincare_check: empty ball");
    tmp.values = masked(r, u.values);
    const double mean = integrate_with_weights(u, tmp.values, wr, wt) / vol;

    std::vector<double> dev(u.values.size());
    for (size_t k = 0; k < dev.size(); ++k) {
        const double d = u.values[k] - mean;
        dev[k] = d * d;
    }
    tmp.values = masked(r, dev);
    const double lhs = integrate_with_weights(u, tmp.values, wr, wt);

    Field2D g = gradient_sq(u);
    tmp.values = masked(3.0 * r, g.values);
    const double rhs = integrate_with_weights(u, tmp.values, wr, wt);
    if (!(rhs > 0.0)) return 0.0;
    return lhs / (r * r * rhs);
}

}  // namespace wsob::quad
