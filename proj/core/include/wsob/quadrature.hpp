#pragma once

#include <functional>
#include <vector>

#include "wsob/params.hpp"

namespace wsob::rearrange {
struct LatticeField;
}

namespace wsob::quad {

/// Evaluator of a y-radial half-space function u(|y|, t).
using RadialFn = std::function<double(double rho, double t)>;

/// Sampled y-radial function on a tensor grid. Grids are strictly increasing
/// and nonnegative; values are rho-major.
struct Field2D {
    std::vector<double> rho_grid;
    std::vector<double> t_grid;
    std::vector<double> values;
    WeightPair wp;

    int nr() const { return static_cast<int>(rho_grid.size()); }
    int nt() const { return static_cast<int>(t_grid.size()); }
    double at(int i, int j) const { return values[static_cast<size_t>(i) * nt() + j]; }
    double& at(int i, int j) { return values[static_cast<size_t>(i) * nt() + j]; }
};

enum class TailMode { None, PowerLaw };

/// Grid/truncation parameters. R and T are the outer truncation radii; when
/// left at 0 they are chosen from the weight pair so that the neglected mass
/// of power-law extremal integrands is below ~1e-12 (the grids are
/// geometric, so large R is cheap). decay_rate is the asymptotic |u| ~
/// r^{-decay_rate} hint used for that choice.
struct QuadConfig {
    double R = 0.0;
    double T = 0.0;
    int n_rho = 769;
    int n_t = 769;
    TailMode tail_mode = TailMode::None;
    double decay_rate = 0.0;  // 0 = derive from wp (extremal decay n+alpha-1)
};

/// Geometric grid with n nodes from x_min to x_max.
std::vector<double> log_grid(double x_min, double x_max, int n);

/// Resolved geometric grids for the weight pair (see QuadConfig).
struct GridSpec {
    std::vector<double> rho;
    std::vector<double> t;
};
GridSpec resolve_grids(const WeightPair& wp, const QuadConfig& cfg);

Field2D sample_field(const RadialFn& u, const WeightPair& wp, const QuadConfig& cfg = {});

/// integral of rho^g_rho t^g_t f over the quarter plane, trapezoid in log
/// coordinates (exact weight handling at a zero first node). PowerLaw adds a
/// fitted c r^{-q} exterior correction outside the grid box.
double integrate_weighted(const Field2D& f, double g_rho, double g_t,
                          TailMode tail = TailMode::None);

/// ( |S^{n-1}| integral rho^{n-1} t^gamma |f|^p )^{1/p}; gamma > -1.
double weighted_lp_norm(const Field2D& f, double gamma, double p,
                        TailMode tail = TailMode::None);

/// |grad u|^2 = u_rho^2 + u_t^2 per node, finite differences along the grid
/// lines (centered in log coordinates, one-sided at the edges).
Field2D gradient_sq(const Field2D& f);

/// Rayleigh quotient F[u] = int t^a |grad u|^2 / (int t^b |u|^{p*})^{2/p*}.
double rayleigh_F(const Field2D& u, const WeightPair& wp,
                  TailMode tail = TailMode::None);

/// rayleigh_F of an evaluator, Richardson-extrapolated over two grid
/// resolutions (n and 2n-1 nodes per axis).
double rayleigh_F_richardson(const RadialFn& u, const WeightPair& wp,
                             QuadConfig cfg = {});

/// Rayleigh quotient of the Grushin functional on a lattice field,
/// trapezoid quadrature with centered-difference gradients.
double rayleigh_G(const rearrange::LatticeField& u, const GrushinParams& gp);

/// Evaluator radial in both |x| and |z|.
using GrushinRadialFn = std::function<double(double xr, double zr)>;

/// Grushin Rayleigh quotient of an (x,z)-radial evaluator via the reduced
/// double integral; high accuracy path used for extremal checks.
double rayleigh_G_radial(const GrushinRadialFn& u, const GrushinParams& gp,
                         int n_nodes = 769);

/// |G[u] - (m omega_m)^{2/Q} (tau+1)^{(2Q-2)/Q} F[u~]| / G[u] for the lift of
/// a half-space evaluator; both sides computed through their own quadratures.
double functional_bridge_check(const RadialFn& u_half, const GrushinParams& gp);

/// LHS/(r^2 RHS) for the weighted Poincare quotient on axis-centered half
/// balls B_r^+((0, t_center)) vs B_{3r}^+.
double poincare_check(const Field2D& u, double t_center, double r,
                      const WeightPair& wp);

/// Deterministic pairwise sum.
double pairwise_sum(const double* data, size_t n);

}  // namespace wsob::quad
