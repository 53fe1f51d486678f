#include "wsob/ode.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>

namespace wsob::ode {

namespace {

// cubic Hermite on sorted knots
double hermite(const std::vector<double>& xs, const std::vector<double>& ys,
               const std::vector<double>& ds, double x, bool derivative) {
    const auto it = std::upper_bound(xs.begin(), xs.end(), x);
    size_t i1 = std::min<size_t>(std::max<ptrdiff_t>(it - xs.begin(), 1), xs.size() - 1);
    const size_t i0 = i1 - 1;
    const double h = xs[i1] - xs[i0];
    const double u = (x - xs[i0]) / h;
    const double y0 = ys[i0], y1 = ys[i1], d0 = ds[i0] * h, d1 = ds[i1] * h;
    if (!derivative) {
        const double h00 = (1 + 2 * u) * (1 - u) * (1 - u);
        const double h10 = u * (1 - u) * (1 - u);
        const double h01 = u * u * (3 - 2 * u);
        const double h11 = u * u * (u - 1);
        return h00 * y0 + h10 * d0 + h01 * y1 + h11 * d1;
    }
    const double g00 = 6 * u * (u - 1);
    const double g10 = (1 - u) * (1 - 3 * u);
    const double g01 = -6 * u * (u - 1);
    const double g11 = u * (3 * u - 2);
    return (g00 * y0 + g10 * d0 + g01 * y1 + g11 * d1) / h;
}

struct Rhs {
    int n;
    double alpha, beta, pstar;

    void operator()(double r, double psi, double dpsi, double& out_dpsi,
                    double& out_ddpsi) const {
        const double q = (0.5 - r) * (0.5 + r);
        const double sgn_pow = std::pow(std::fabs(psi), pstar - 2.0) * psi;
        out_dpsi = dpsi;
        out_ddpsi = -(n / r - 2.0 * alpha * r / q) * dpsi +
                    alpha * (n + alpha - 1.0) / q * psi -
                    std::pow(q, beta - alpha) * sgn_pow;
    }
};

// Dormand-Prince 5(4) tableau
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                 a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                 a64 = 49.0 / 176, a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                 b5 = -2187.0 / 6784, b6 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                 e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

struct StepOut {
    double psi, dpsi, err;
    double k1_psi, k1_dpsi;  // FSAL-style reuse of the end derivative
};

StepOut dopri_step(const Rhs& f, double r, double psi, double dpsi, double h) {
    double k1p, k1d, k2p, k2d, k3p, k3d, k4p, k4d, k5p, k5d, k6p, k6d, k7p, k7d;
    f(r, psi, dpsi, k1p, k1d);
    f(r + c2 * h, psi + h * a21 * k1p, dpsi + h * a21 * k1d, k2p, k2d);
    f(r + c3 * h, psi + h * (a31 * k1p + a32 * k2p), dpsi + h * (a31 * k1d + a32 * k2d), k3p,
      k3d);
    f(r + c4 * h, psi + h * (a41 * k1p + a42 * k2p + a43 * k3p),
      dpsi + h * (a41 * k1d + a42 * k2d + a43 * k3d), k4p, k4d);
    f(r + c5 * h, psi + h * (a51 * k1p + a52 * k2p + a53 * k3p + a54 * k4p),
      dpsi + h * (a51 * k1d + a52 * k2d + a53 * k3d + a54 * k4d), k5p, k5d);
    f(r + h, psi + h * (a61 * k1p + a62 * k2p + a63 * k3p + a64 * k4p + a65 * k5p),
      dpsi + h * (a61 * k1d + a62 * k2d + a63 * k3d + a64 * k4d + a65 * k5d), k6p, k6d);
    const double psi5 = psi + h * (b1 * k1p + b3 * k3p + b4 * k4p + b5 * k5p + b6 * k6p);
    const double dpsi5 = dpsi + h * (b1 * k1d + b3 * k3d + b4 * k4d + b5 * k5d + b6 * k6d);
    f(r + h, psi5, dpsi5, k7p, k7d);
    const double ep = h * (e1 * k1p + e3 * k3p + e4 * k4p + e5 * k5p + e6 * k6p + e7 * k7p);
    const double ed = h * (e1 * k1d + e3 * k3d + e4 * k4d + e5 * k5d + e6 * k6d + e7 * k7d);
    StepOut out;
    out.psi = psi5;
    out.dpsi = dpsi5;
    out.err = std::max(std::fabs(ep), std::fabs(ed));
    out.k1_psi = k7p;
    out.k1_dpsi = k7d;
    return out;
}

// solve the 4x4 system for the constant term of B(d) = L + sum c_i d^{e_i}
double power_model_limit(const std::vector<double>& deltas, const std::vector<double>& B,
                         std::array<double, 3> expo) {
    const int n = 4;
    double M[4][5];
    for (int i = 0; i < n; ++i) {
        M[i][0] = 1.0;
        M[i][1] = std::pow(deltas[i], expo[0]);
        M[i][2] = std::pow(deltas[i], expo[1]);
        M[i][3] = std::pow(deltas[i], expo[2]);
        M[i][4] = B[i];
    }
    for (int col = 0; col < n; ++col) {
        int piv = col;
        for (int row = col + 1; row < n; ++row)
            if (std::fabs(M[row][col]) > std::fabs(M[piv][col])) piv = row;
        std::swap(M[col], M[piv]);
        if (std::fabs(M[col][col]) < 1e-300) return B.back();
        for (int row = col + 1; row < n; ++row) {
            const double f = M[row][col] / M[col][col];
            for (int c = col; c <= n; ++c) M[row][c] -= f * M[col][c];
        }
    }
    double x[4];
    for (int row = n - 1; row >= 0; --row) {
        double s = M[row][4];
        for (int c = row + 1; c < n; ++c) s -= M[row][c] * x[c];
        x[row] = s / M[row][row];
    }
    return x[0];
}

// three leading exponents of a local expansion, deduplicated and padded
std::array<double, 3> leading_exponents(double e_a, double e_b) {
    std::vector<double> es = {e_a, e_b, e_a + 1.0, e_b + 1.0, e_a + 2.0};
    std::sort(es.begin(), es.end());
    std::array<double, 3> out{};
    int k = 0;
    double last = -1e300;
    for (double e : es) {
        if (e - last < 1e-9) continue;
        out[k++] = e;
        last = e;
        if (k == 3) break;
    }
    while (k < 3) out[k++] = last + 1.0;
    return out;
}

}  // namespace

double RadialProfile::psi_at(double rr) const {
    if (r.empty()) throw std::logic_error("RadialProfile: empty");
    if (rr <= r.front()) return psi0 + c2 * rr * rr;
    if (rr >= r.back()) return psi.back() + dpsi.back() * (rr - r.back());
    return hermite(r, psi, dpsi, rr, false);
}

double RadialProfile::dpsi_at(double rr) const {
    if (r.empty()) throw std::logic_error("RadialProfile: empty");
    if (rr <= r.front()) return 2.0 * c2 * rr;
    if (rr >= r.back()) return dpsi.back();
    return hermite(r, psi, dpsi, rr, true);
}

double frobenius_c2(const WeightPair& wp, double psi0) {
    if (!(psi0 > 0.0)) throw std::domain_error("frobenius: psi0 must be positive");
    const double pstar = critical_exponent(wp);
    return (4.0 * wp.alpha * (wp.n + wp.alpha - 1.0) * psi0 -
            std::pow(4.0, wp.alpha - wp.beta) * std::pow(psi0, pstar - 1.0)) /
           (2.0 * (wp.n + 1.0));
}

FrobeniusStart frobenius_start(const WeightPair& wp, double psi0, double r_eps) {
    if (!(r_eps > 0.0) || r_eps > 1e-3)
        throw std::domain_error("frobenius: r_eps must lie in (0, 1e-3]");
    const double c2v = frobenius_c2(wp, psi0);
    return {psi0 + c2v * r_eps * r_eps, 2.0 * c2v * r_eps};
}

ShotResult shoot(const WeightPair& wp, double psi0, const ShootOptions& opt) {
    const double pstar = critical_exponent(wp);
    const Rhs f{wp.n, wp.alpha, wp.beta, pstar};

    // endpoint approach radii (increasing)
    std::vector<double> stops;
    if (opt.r_stop_override > 0.0) {
        stops.push_back(opt.r_stop_override);
    } else {
        for (int k = opt.n_dyadic - 1; k >= 0; --k)
            stops.push_back(0.5 - opt.delta0 * std::pow(0.5, opt.n_dyadic - 1 - k));
        std::sort(stops.begin(), stops.end());
    }

    ShotResult res;
    FrobeniusStart st = frobenius_start(wp, psi0, opt.r_eps);
    double r = opt.r_eps, psi = st.psi, dpsi = st.dpsi;
    double h = 1e-6;

    if (opt.store_profile) {
        res.profile.psi0 = psi0;
        res.profile.c2 = frobenius_c2(wp, psi0);
        res.profile.r.push_back(r);
        res.profile.psi.push_back(psi);
        res.profile.dpsi.push_back(dpsi);
    }

    std::vector<double> Bs, Ks, deltas;
    size_t stop_idx = 0;
    const int max_steps = 2000000;
    for (int step = 0; step < max_steps && stop_idx < stops.size(); ++step) {
        const double target = stops[stop_idx];
        bool hit_target = false;
        double h_eff = h;
        if (r + h_eff >= target) {
            h_eff = target - r;
            hit_target = true;
        }
        StepOut s = dopri_step(f, r, psi, dpsi, h_eff);
        const double scale =
            opt.atol + opt.rtol * std::max({std::fabs(psi), std::fabs(s.psi), 1e-30});
        const double err = s.err / scale;
        if (err <= 1.0) {
            // accepted
            const double r_new = r + h_eff;
            if (s.psi <= 0.0) {
                res.status = ShotStatus::HitZero;
                res.crossing_r = r_new;
                return res;
            }
            if (std::fabs(s.psi) > opt.overflow_guard ||
                std::fabs(s.dpsi) > 1e6 * opt.overflow_guard) {
                res.status = ShotStatus::Overflow;
                res.crossing_r = r_new;
                // classify by motion: growing psi means the blow-up branch
                res.B_end = s.dpsi > 0.0 ? 1.0 : -1.0;
                res.B_limit = res.B_end;
                return res;
            }
            r = r_new;
            psi = s.psi;
            dpsi = s.dpsi;
            if (opt.store_profile) {
                res.profile.r.push_back(r);
                res.profile.psi.push_back(psi);
                res.profile.dpsi.push_back(dpsi);
            }
            if (hit_target) {
                const double q = (0.5 - r) * (0.5 + r);
                Bs.push_back(std::pow(q, wp.alpha) * dpsi);
                Ks.push_back(psi);
                deltas.push_back(0.5 - r);
                ++stop_idx;
            }
        }
        if (!hit_target || err > 1.0) {
            double fac = 0.9 * std::pow(std::max(err, 1e-10), -0.2);
            fac = std::clamp(fac, 0.2, 5.0);
            h = std::min(h_eff * fac, opt.store_profile ? 5e-4 : 0.05);
        }
        if (h < 1e-15) h = 1e-15;
    }
    if (stop_idx < stops.size()) {
        res.status = ShotStatus::Overflow;  // did not reach the endpoint
        res.crossing_r = r;
        return res;
    }

    res.status = ShotStatus::Completed;
    res.B_end = Bs.back();
    res.K_end = Ks.back();
    if (Bs.size() >= 4) {
        std::vector<double> d4(deltas.end() - 4, deltas.end());
        std::vector<double> B4(Bs.end() - 4, Bs.end());
        std::vector<double> K4(Ks.end() - 4, Ks.end());
        // local expansion psi = K + c1 x + c2 x^{beta+2-alpha} + ... gives
        // B = q^alpha psi' the exponent pairs below
        res.B_limit = power_model_limit(d4, B4, leading_exponents(wp.alpha, wp.beta + 1.0));
        const double eK = std::max(std::min(1.0, wp.beta + 2.0 - wp.alpha), 0.05);
        res.K_limit = power_model_limit(
            d4, K4, leading_exponents(eK, std::max(wp.beta + 2.0 - wp.alpha, eK)));
    } else {
        res.B_limit = res.B_end;
        res.K_limit = res.K_end;
    }
    if (opt.store_profile) {
        res.profile.K = res.K_limit;
    }
    return res;
}

namespace {

int classify_shot(const ShotResult& s) {
    if (s.status == ShotStatus::HitZero) return -1;
    if (s.status == ShotStatus::Overflow) return s.B_limit >= 0.0 ? +1 : -1;
    return s.B_limit >= 0.0 ? +1 : -1;
}

}  // namespace

ShootingResult solve_bvp(const WeightPair& wp, const ShootOptions& opt) {
    ShootingResult out;
    out.nonexistence_regime = in_nonexistence_regime(wp);
    const AdmissibilityClass cls = classify(wp);
    if (!cls.gn_valid)
        throw std::domain_error("solve_bvp: weight pair outside the admissible range");
    out.uniqueness_guaranteed = wp.n >= 2 ? true : cls.n1_unique;

    int iters = 0;
    auto probe = [&](double psi0) {
        ++iters;
        return shoot(wp, psi0, opt);
    };

    // geometric sweep
    const int n_sweep = 25;
    std::vector<double> psis(n_sweep);
    std::vector<int> signs(n_sweep);
    std::vector<bool> completed(n_sweep);
    for (int i = 0; i < n_sweep; ++i) {
        psis[i] = std::pow(10.0, -6.0 + 12.0 * i / (n_sweep - 1));
        ShotResult s = probe(psis[i]);
        signs[i] = classify_shot(s);
        completed[i] = s.status == ShotStatus::Completed;
    }

    // bracket: prefer a completed sign change; otherwise refine toward the
    // failure boundary hunting for one.
    double lo = 0.0, hi = 0.0;
    bool have_bracket = false;
    for (int i = 0; i + 1 < n_sweep && !have_bracket; ++i) {
        if (completed[i] && completed[i + 1] && signs[i] > 0 && signs[i + 1] < 0) {
            lo = psis[i];
            hi = psis[i + 1];
            have_bracket = true;
        }
    }
    if (!have_bracket) {
        for (int i = 0; i + 1 < n_sweep && !have_bracket; ++i) {
            if (!(signs[i] > 0 && signs[i + 1] < 0)) continue;
            // refine inside [psis[i], psis[i+1]] for a completed negative shot
            double a = psis[i], b = psis[i + 1];
            for (int depth = 0; depth < 6 && !have_bracket; ++depth) {
                const int m = 8;
                double prev = a;
                bool prev_pos_completed = true;
                for (int k = 1; k <= m; ++k) {
                    const double p = a * std::pow(b / a, double(k) / m);
                    ShotResult s = probe(p);
                    const int sg = classify_shot(s);
                    if (s.status == ShotStatus::Completed && sg < 0) {
                        lo = prev;
                        hi = p;
                        have_bracket = true;
                        break;
                    }
                    if (sg > 0) {
                        prev = p;
                        prev_pos_completed = s.status == ShotStatus::Completed;
                    } else {
                        // failure with negative class: tighten the hunt window
                        b = p;
                        break;
                    }
                }
                a = prev;
                (void)prev_pos_completed;
                if (b / a < 1.0 + 1e-12) break;
            }
        }
    }

    if (!have_bracket) {
        out.status = SolveStatus::NoSolution;
        out.iters = iters;
        return out;
    }

    // bisection on the classifier
    ShotResult best;
    double best_psi = lo;
    for (int it = 0; it < 70 && (hi - lo) > 1e-14 * hi; ++it) {
        const double mid = 0.5 * (lo + hi);
        ShotResult s = probe(mid);
        if (classify_shot(s) > 0) {
            lo = mid;
            if (s.status == ShotStatus::Completed) {
                best = s;
                best_psi = mid;
            }
        } else {
            hi = mid;
            if (s.status == ShotStatus::Completed &&
                (best.status != ShotStatus::Completed ||
                 std::fabs(s.B_limit) < std::fabs(best.B_limit))) {
                best = s;
                best_psi = mid;
            }
        }
    }

    if (best.status != ShotStatus::Completed) {
        out.status = SolveStatus::NoSolution;
        out.iters = iters;
        return out;
    }

    out.psi0 = best_psi;
    out.residual = std::fabs(best.B_limit);
    out.K = best.K_limit;
    const bool degenerate = !(out.K > 1e-3 * best_psi) || !(out.residual < 1e-8);
    if (degenerate) {
        out.status = out.nonexistence_regime ? SolveStatus::NoSolution : SolveStatus::Stagnation;
        out.iters = iters;
        return out;
    }

    // final dense pass for the stored profile
    ShootOptions fin = opt;
    fin.store_profile = true;
    fin.r_stop_override = 0.5 - 1e-9;
    fin.rtol = std::min(opt.rtol, 1e-11);
    ++iters;
    ShotResult dense = shoot(wp, out.psi0, fin);
    if (dense.status == ShotStatus::Completed) {
        out.profile = std::move(dense.profile);
        out.profile.K = out.K;
    } else {
        // fall back to the bisection shot's stops
        ShootOptions fb = opt;
        fb.store_profile = true;
        dense = shoot(wp, out.psi0, fb);
        out.profile = std::move(dense.profile);
        out.profile.K = out.K;
    }
    out.status = SolveStatus::Converged;
    out.iters = iters;
    return out;
}

// ---------------------------------------------------------------------------
// hyperbolic picture
// ---------------------------------------------------------------------------

double HyperbolicProfile::v_at(double ss) const { return hermite(s, v, dv, ss, false); }
double HyperbolicProfile::dv_at(double ss) const { return hermite(s, v, dv, ss, true); }

HyperbolicProfile to_hyperbolic(const RadialProfile& profile, const WeightPair& wp,
                                double s_max, int n_samples) {
    HyperbolicProfile hp;
    const double g = 0.5 * (wp.n + wp.alpha - 1.0);
    hp.lambda_coef = (wp.n * wp.n - (1.0 - wp.alpha) * (1.0 - wp.alpha)) / 4.0;
    hp.K = profile.K;
    hp.s.resize(n_samples);
    hp.v.resize(n_samples);
    hp.dv.resize(n_samples);
    for (int i = 0; i < n_samples; ++i) {
        const double s = s_max * i / (n_samples - 1.0);
        const double th = std::tanh(0.5 * s);
        const double r = 0.5 * th;
        const double sech2 = 1.0 - th * th;
        // v = (2 cosh(s/2))^{-2g} psi(r); log form avoids overflow
        const double ch = std::cosh(0.5 * s);
        const double pref = std::exp(-2.0 * g * std::log(2.0 * ch));
        const double psi = profile.psi_at(r);
        const double dpsi = profile.dpsi_at(r);
        hp.s[i] = s;
        hp.v[i] = pref * psi;
        hp.dv[i] = pref * (-g * th * psi + 0.25 * sech2 * dpsi);
    }
    return hp;
}

double hyperbolic_residual(const HyperbolicProfile& hp, const WeightPair& wp,
                           double s_lo, double s_hi) {
    const double pstar = critical_exponent(wp);
    const double lam = hp.lambda_coef;
    double worst = 0.0;
    const double h = 1e-3;
    for (double s = s_lo; s <= s_hi; s += (s_hi - s_lo) / 200.0) {
        const double v0 = hp.v_at(s);
        const double vp = (hp.v_at(s + h) - hp.v_at(s - h)) / (2.0 * h);
        const double vpp = (hp.v_at(s + h) - 2.0 * v0 + hp.v_at(s - h)) / (h * h);
        const double res = vpp + wp.n / std::tanh(s) * vp + lam * v0 +
                           std::pow(std::fabs(v0), pstar - 2.0) * v0;
        const double scale = std::fabs(lam * v0) + std::pow(std::fabs(v0), pstar - 1.0) +
                             std::fabs(vpp) + 1e-300;
        worst = std::max(worst, std::fabs(res) / scale);
    }
    return worst;
}

EnergyParams energy_params(const WeightPair& wp) {
    const double pstar = critical_exponent(wp);
    EnergyParams ep;
    ep.a = 2.0 * wp.n / (pstar + 2.0);
    ep.b = ep.a * (pstar - 2.0);
    ep.B = 0.5 * ep.a * (2.0 - ep.a * pstar);
    ep.A = (wp.n * wp.n - (1.0 - wp.alpha) * (1.0 - wp.alpha)) / 4.0 -
           0.5 * ep.a * ep.a * pstar;
    return ep;
}

EnergySamples energy_function(const HyperbolicProfile& hp, const WeightPair& wp,
                              double s_lo, double s_hi, int n) {
    const double pstar = critical_exponent(wp);
    const EnergyParams ep = energy_params(wp);

    auto energy_at = [&](double s) {
        const double sh = std::sinh(s), ch = std::cosh(s);
        const double v = hp.v_at(s), dv = hp.dv_at(s);
        const double vhat = std::pow(sh, ep.a) * v;
        const double dvhat = ep.a * std::pow(sh, ep.a - 1.0) * ch * v + std::pow(sh, ep.a) * dv;
        const double G = ep.A * std::pow(sh, ep.b) + ep.B * std::pow(sh, ep.b - 2.0);
        return 0.5 * std::pow(sh, ep.b) * dvhat * dvhat +
               std::pow(std::fabs(vhat), pstar) / pstar + 0.5 * G * vhat * vhat;
    };

    EnergySamples out;
    out.s.resize(n);
    out.E.resize(n);
    out.dE_numeric.resize(n);
    out.dE_identity.resize(n);
    const double hfd = 2e-3;
    for (int i = 0; i < n; ++i) {
        const double s = s_lo + (s_hi - s_lo) * i / (n - 1.0);
        out.s[i] = s;
        out.E[i] = energy_at(s);
        out.dE_numeric[i] = (-energy_at(s + 2 * hfd) + 8 * energy_at(s + hfd) -
                             8 * energy_at(s - hfd) + energy_at(s - 2 * hfd)) /
                            (12.0 * hfd);
        const double sh = std::sinh(s), ch = std::cosh(s);
        const double v = hp.v_at(s);
        const double vhat = std::pow(sh, ep.a) * v;
        const double Gp = ep.A * ep.b * std::pow(sh, ep.b - 1.0) * ch +
                          ep.B * (ep.b - 2.0) * std::pow(sh, ep.b - 3.0) * ch;
        out.dE_identity[i] = 0.5 * Gp * vhat * vhat;
    }
    return out;
}

}  // namespace wsob::ode
