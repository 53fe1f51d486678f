#include "wsob/minimize.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "wsob/special.hpp"

namespace wsob::minimize {

namespace {

// Finite-volume machinery on a rectilinear (geometric) grid. Cells are
// bounded by edges (the first edge sits at 0, interior edges at geometric
// midpoints); weight factors rho^{n-1}, t^alpha, t^beta are integrated
// exactly per cell, so the scheme is insensitive to the grading. On a
// geometric grid the scale invariance of the quotient turns into discrete
// translation invariance along log rho / log t, which keeps the flow from
// collapsing into sub-resolution spikes.
struct GridWork {
    int nr, nt;
    std::vector<double> rho, t;        // node positions (cell centers)
    std::vector<double> re, te;        // cell edges, size +1
    std::vector<double> v_rho;         // cell integrals of rho^{n-1}
    std::vector<double> w_alpha;       // cell integrals of t^alpha
    std::vector<double> w_beta;        // cell integrals of t^beta
    std::vector<double> face_rho;      // rho^{n-1} at edge i (flux face between i-1 and i)
    std::vector<double> face_t;        // t^alpha at edge j
    std::vector<double> drho, dt;      // node spacings (distance between neighbors)
    std::vector<double> diag;          // clamped Jacobi scale per cell
    double pstar;
    double sphere;
};

std::vector<double> edges_of(const std::vector<double>& x) {
    const int n = static_cast<int>(x.size());
    std::vector<double> e(n + 1);
    e[0] = 0.0;
    for (int i = 1; i < n; ++i) e[i] = std::sqrt(x[i - 1] * x[i]);
    e[n] = x[n - 1] * std::sqrt(x[n - 1] / x[n - 2]);
    return e;
}

GridWork make_work(const quad::Field2D& f, const WeightPair& wp) {
    GridWork w;
    w.nr = f.nr();
    w.nt = f.nt();
    w.rho = f.rho_grid;
    w.t = f.t_grid;
    w.re = edges_of(w.rho);
    w.te = edges_of(w.t);
    w.pstar = critical_exponent(wp);
    w.sphere = special::unit_sphere_area(wp.n);

    auto cell_moment = [](const std::vector<double>& e, int j, double gamma) {
        return (std::pow(e[j + 1], gamma + 1.0) - std::pow(e[j], gamma + 1.0)) /
               (gamma + 1.0);
    };
    w.v_rho.resize(w.nr);
    for (int i = 0; i < w.nr; ++i) w.v_rho[i] = cell_moment(w.re, i, wp.n - 1.0);
    w.w_alpha.resize(w.nt);
    w.w_beta.resize(w.nt);
    for (int j = 0; j < w.nt; ++j) {
        w.w_alpha[j] = cell_moment(w.te, j, wp.alpha);
        w.w_beta[j] = cell_moment(w.te, j, wp.beta);
    }
    w.face_rho.resize(w.nr + 1);
    for (int i = 0; i <= w.nr; ++i)
        w.face_rho[i] = std::pow(w.re[i], wp.n - 1.0);
    w.face_rho[0] = 0.0;  // no flux through the axis (also for n = 1)
    w.face_t.resize(w.nt + 1);
    for (int j = 0; j <= w.nt; ++j) w.face_t[j] = std::pow(w.te[j], wp.alpha);

    w.drho.resize(w.nr + 1);
    for (int i = 1; i < w.nr; ++i) w.drho[i] = w.rho[i] - w.rho[i - 1];
    w.drho[0] = w.rho[0];                      // unused (zero flux)
    w.drho[w.nr] = w.re[w.nr] - w.rho[w.nr - 1];  // ghost-zero distance
    w.dt.resize(w.nt + 1);
    for (int j = 1; j < w.nt; ++j) w.dt[j] = w.t[j] - w.t[j - 1];
    w.dt[0] = w.t[0];
    w.dt[w.nt] = w.te[w.nt] - w.t[w.nt - 1];

    w.diag.resize(static_cast<size_t>(w.nr) * w.nt);
    for (int i = 0; i < w.nr; ++i) {
        for (int j = 0; j < w.nt; ++j) {
            double d = w.face_rho[i + 1] * w.w_alpha[j] / w.drho[i + 1];
            d += w.face_rho[i] * w.w_alpha[j] / w.drho[i];
            d += w.v_rho[i] * w.face_t[j + 1] / w.dt[j + 1];
            d += w.v_rho[i] * w.face_t[j] / w.dt[j];
            w.diag[static_cast<size_t>(i) * w.nt + j] = d / (w.v_rho[i] * w.w_beta[j]);
        }
    }
    return w;
}

// face-flux energy; outer boundaries hold ghost zeros, the axis and the
// degenerate t = 0 face carry no flux.
double energy_num(const quad::Field2D& f, const GridWork& w) {
    double acc = 0.0;
    for (int i = 0; i < w.nr; ++i) {
        for (int j = 0; j < w.nt; ++j) {
            const double u = f.at(i, j);
            const double ur = i + 1 < w.nr ? f.at(i + 1, j) : 0.0;
            const double du_r = (ur - u) / w.drho[i + 1];
            acc += w.face_rho[i + 1] * w.w_alpha[j] * du_r * du_r * w.drho[i + 1];
            const double ut = j + 1 < w.nt ? f.at(i, j + 1) : 0.0;
            const double du_t = (ut - u) / w.dt[j + 1];
            acc += w.v_rho[i] * w.face_t[j + 1] * du_t * du_t * w.dt[j + 1];
        }
    }
    return w.sphere * acc;
}

double energy_den(const quad::Field2D& f, const GridWork& w) {
    double acc = 0.0;
    for (int i = 0; i < w.nr; ++i)
        for (int j = 0; j < w.nt; ++j)
            acc += w.v_rho[i] * w.w_beta[j] * std::pow(std::fabs(f.at(i, j)), w.pstar);
    return w.sphere * acc;
}

double rayleigh_of(const quad::Field2D& f, const GridWork& w) {
    const double den = energy_den(f, w);
    if (!(den > 0.0)) throw std::domain_error("minimize: degenerate field");
    return energy_num(f, w) / std::pow(den, 2.0 / w.pstar);
}

// Euler-Lagrange residual in the cell-volume metric, Jacobi-scaled
void residual(const quad::Field2D& f, const GridWork& w, double F,
              std::vector<double>& g) {
    g.assign(f.values.size(), 0.0);
    for (int i = 0; i < w.nr; ++i) {
        for (int j = 0; j < w.nt; ++j) {
            const double u = f.at(i, j);
            double acc = 0.0;
            const double un_r = i + 1 < w.nr ? f.at(i + 1, j) : 0.0;
            acc += w.face_rho[i + 1] * w.w_alpha[j] / w.drho[i + 1] * (u - un_r);
            if (i > 0)
                acc += w.face_rho[i] * w.w_alpha[j] / w.drho[i] * (u - f.at(i - 1, j));
            const double un_t = j + 1 < w.nt ? f.at(i, j + 1) : 0.0;
            acc += w.v_rho[i] * w.face_t[j + 1] / w.dt[j + 1] * (u - un_t);
            if (j > 0)
                acc += w.v_rho[i] * w.face_t[j] / w.dt[j] * (u - f.at(i, j - 1));
            const double cell = w.v_rho[i] * w.w_beta[j];
            const double Au = acc / cell;
            const size_t k = static_cast<size_t>(i) * w.nt + j;
            g[k] = (Au - F * std::pow(std::fabs(u), w.pstar - 2.0) * u) / w.diag[k];
        }
    }
}

quad::Field2D make_grid(const WeightPair& wp, const FlowConfig& cfg) {
    quad::Field2D f;
    f.wp = wp;
    const double sig_lo = -4.5;
    f.rho_grid.resize(cfg.n_rho);
    f.t_grid.resize(cfg.n_t);
    const double sr = std::log(cfg.R), st = std::log(cfg.T);
    for (int i = 0; i < cfg.n_rho; ++i)
        f.rho_grid[i] = std::exp(sig_lo + (sr - sig_lo) * (i + 0.5) / cfg.n_rho);
    for (int j = 0; j < cfg.n_t; ++j)
        f.t_grid[j] = std::exp(sig_lo + (st - sig_lo) * (j + 0.5) / cfg.n_t);
    f.values.assign(static_cast<size_t>(cfg.n_rho) * cfg.n_t, 0.0);
    return f;
}

void normalize(quad::Field2D& f, const GridWork& w) {
    // the public norm is the normalization gauge so the unit-norm invariant
    // holds for callers measuring with weighted_lp_norm
    const double nrm = quad::weighted_lp_norm(f, f.wp.beta, w.pstar);
    if (!(nrm > 0.0)) throw std::domain_error("minimize: degenerate field");
    for (auto& v : f.values) v /= nrm;
}

}  // namespace

double discrete_rayleigh(const quad::Field2D& field, const WeightPair& wp) {
    return rayleigh_of(field, make_work(field, wp));
}

FlowState init_flow_from(const WeightPair& wp, const FlowConfig& cfg,
                         const quad::RadialFn& starter) {
    FlowState st;
    st.field = make_grid(wp, cfg);
    for (int i = 0; i < st.field.nr(); ++i)
        for (int j = 0; j < st.field.nt(); ++j)
            st.field.at(i, j) = starter(st.field.rho_grid[i], st.field.t_grid[j]);
    GridWork w = make_work(st.field, wp);
    normalize(st.field, w);
    st.lr = cfg.lr_safety;
    st.F_history.push_back(rayleigh_of(st.field, w));
    return st;
}

FlowState init_flow(const WeightPair& wp, const FlowConfig& cfg) {
    const double t0 = cfg.T / 4.0, width = cfg.T / 3.0;
    return init_flow_from(wp, cfg, [t0, width](double rho, double t) {
        const double r2 = rho * rho + (t - t0) * (t - t0);
        return std::exp(-r2 / (2.0 * width * width));
    });
}

StepOutcome flow_step(FlowState& state, const WeightPair& wp) {
    GridWork w = make_work(state.field, wp);
    const double F0 = state.F_history.empty() ? rayleigh_of(state.field, w)
                                              : state.F_history.back();
    std::vector<double> g;
    residual(state.field, w, F0, g);

    // heavy-ball memory accelerates the near-flat invariance modes; it is
    // reset whenever a step is rejected, which keeps F monotone
    if (state.momentum.size() != g.size()) state.momentum.assign(g.size(), 0.0);
    constexpr double kMu = 0.9;
    std::vector<double> d(g.size());
    for (size_t k = 0; k < g.size(); ++k) d[k] = g[k] + kMu * state.momentum[k];

    quad::Field2D trial = state.field;
    StepOutcome out;
    bool with_momentum = true;
    while (state.lr >= 1e-12) {
        const std::vector<double>& dir = with_momentum ? d : g;
        // per-step amplitude trust region
        double gmax = 0.0, umax = 0.0;
        for (size_t k = 0; k < dir.size(); ++k) {
            gmax = std::max(gmax, std::fabs(dir[k]));
            umax = std::max(umax, std::fabs(state.field.values[k]));
        }
        const double lr_eff =
            gmax > 0.0 ? std::min(state.lr, 0.25 * umax / gmax) : state.lr;
        for (size_t k = 0; k < trial.values.size(); ++k)
            trial.values[k] = std::max(state.field.values[k] - lr_eff * dir[k], 0.0);
        double F1;
        bool bad = false;
        try {
            normalize(trial, w);
            F1 = rayleigh_of(trial, w);
        } catch (const std::domain_error&) {
            bad = true;
            F1 = 0.0;
        }
        if (!bad && F1 <= F0 + 1e-10) {
            for (size_t k = 0; k < dir.size(); ++k) state.momentum[k] = lr_eff * dir[k] / state.lr;
            state.field = trial;
            state.F_history.push_back(F1);
            ++state.step;
            ++state.accepted_streak;
            if (state.accepted_streak >= 20) {
                state.lr *= 1.1;
                state.accepted_streak = 0;
            }
            out.accepted = true;
            out.F = F1;
            return out;
        }
        if (with_momentum) {
            with_momentum = false;  // retry as plain descent before shrinking
            std::fill(state.momentum.begin(), state.momentum.end(), 0.0);
            continue;
        }
        state.lr *= 0.5;
        state.accepted_streak = 0;
    }
    out.stagnated = true;
    out.F = F0;
    return out;
}

namespace {

quad::Field2D prolong(const quad::Field2D& coarse, const quad::Field2D& fine_template) {
    quad::Field2D fine = fine_template;
    for (int i = 0; i < fine.nr(); ++i) {
        for (int j = 0; j < fine.nt(); ++j) {
            const double rho = fine.rho_grid[i], t = fine.t_grid[j];
            const auto locate = [](const std::vector<double>& g, double x) {
                const auto it = std::upper_bound(g.begin(), g.end(), x);
                return std::clamp<int>(static_cast<int>(it - g.begin()), 1,
                                       static_cast<int>(g.size()) - 1);
            };
            const int i1 = locate(coarse.rho_grid, rho), j1 = locate(coarse.t_grid, t);
            const int i0 = i1 - 1, j0 = j1 - 1;
            const double fx = std::clamp(
                (rho - coarse.rho_grid[i0]) / (coarse.rho_grid[i1] - coarse.rho_grid[i0]),
                0.0, 1.0);
            const double ft = std::clamp(
                (t - coarse.t_grid[j0]) / (coarse.t_grid[j1] - coarse.t_grid[j0]), 0.0, 1.0);
            fine.at(i, j) = (1 - fx) * (1 - ft) * coarse.at(i0, j0) +
                            fx * (1 - ft) * coarse.at(i1, j0) +
                            (1 - fx) * ft * coarse.at(i0, j1) + fx * ft * coarse.at(i1, j1);
        }
    }
    return fine;
}

bool run_level(FlowState& st, const WeightPair& wp, const FlowConfig& cfg, long budget,
               bool& stagnated) {
    const size_t start = st.F_history.size();
    for (long it = 0; it < budget; ++it) {
        StepOutcome so = flow_step(st, wp);
        if (so.stagnated) {
            stagnated = true;
            return false;
        }
        const size_t k = st.F_history.size();
        if (k > start + static_cast<size_t>(cfg.window)) {
            const double dF = std::fabs(st.F_history[k - 1] -
                                        st.F_history[k - 1 - cfg.window]);
            if (dF < cfg.df_tol) return true;
        }
    }
    return false;
}

}  // namespace

MinimizeResult minimize_constant(const WeightPair& wp, const FlowConfig& cfg) {
    if (!classify(wp).strict_valid)
        throw std::domain_error("minimize_constant: weight pair must be strictly admissible");

    MinimizeResult res;
    std::vector<int> levels;
    if (cfg.cascade) {
        int n = cfg.n_rho;
        while (n > 32) n /= 2;
        for (; n < cfg.n_rho; n *= 2) levels.push_back(n);
    }
    levels.push_back(cfg.n_rho);

    FlowState st;
    bool have_state = false;
    bool stagnated = false;
    bool converged = false;
    for (size_t li = 0; li < levels.size(); ++li) {
        FlowConfig lcfg = cfg;
        lcfg.n_rho = lcfg.n_t = levels[li];
        if (!have_state) {
            st = init_flow(wp, lcfg);
            have_state = true;
        } else {
            FlowState fine;
            fine.field = prolong(st.field, make_grid(wp, lcfg));
            GridWork w = make_work(fine.field, wp);
            normalize(fine.field, w);
            fine.lr = lcfg.lr_safety;
            fine.F_history.push_back(rayleigh_of(fine.field, w));
            st = std::move(fine);
        }
        const long budget = li + 1 == levels.size() ? cfg.max_steps
                                                    : std::min<long>(30000, cfg.max_steps);
        converged = run_level(st, wp, lcfg, budget, stagnated);
        if (stagnated && li + 1 < levels.size()) stagnated = false;  // retry finer
        res.iters += st.step;
    }

    res.S_estimate = st.F_history.back();
    res.field = std::move(st.field);
    res.converged = converged;
    res.stagnated = stagnated;
    res.F_history = std::move(st.F_history);
    return res;
}

}  // namespace wsob::minimize
