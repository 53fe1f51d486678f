#pragma once

#include <vector>

#include "wsob/params.hpp"
#include "wsob/quadrature.hpp"

namespace wsob::minimize {

struct FlowConfig {
    double R = 32.0;
    double T = 32.0;
    int n_rho = 256;
    int n_t = 256;
    double lr_safety = 0.8;   // initial step in the Jacobi-scaled metric
    long max_steps = 400000;
    double df_tol = 1e-9;     // convergence: |dF| below this over `window` steps
    int window = 100;
    bool cascade = true;      // coarse-to-fine warm start
};

/// Normalized gradient-flow state on a staggered uniform grid over
/// [0,R]x[0,T] (cell centers; the t = 0 face carries the zero-flux
/// degenerate Neumann condition, outer faces are homogeneous Dirichlet).
struct FlowState {
    quad::Field2D field;
    long step = 0;
    std::vector<double> F_history;
    double lr = 0.0;
    int accepted_streak = 0;
    std::vector<double> momentum;  // heavy-ball direction memory
};

/// Bump-initialized state, unit L^{p*}_beta norm.
FlowState init_flow(const WeightPair& wp, const FlowConfig& cfg);

/// State from an arbitrary starter field sampled at the flow grid.
FlowState init_flow_from(const WeightPair& wp, const FlowConfig& cfg,
                         const quad::RadialFn& starter);

struct StepOutcome {
    bool accepted = false;
    bool stagnated = false;
    double F = 0.0;
};

/// One accepted descent step (backtracking inside): move along the discrete
/// Euler-Lagrange residual, clip at zero, renormalize; F never increases.
/// Learning-rate underflow reports stagnation.
StepOutcome flow_step(FlowState& state, const WeightPair& wp);

struct MinimizeResult {
    double S_estimate = 0.0;  // discrete Rayleigh quotient at the final field
    quad::Field2D field;
    long iters = 0;
    bool converged = false;
    bool stagnated = false;
    std::vector<double> F_history;
};

MinimizeResult minimize_constant(const WeightPair& wp, const FlowConfig& cfg = {});

/// The flow's own discrete Rayleigh quotient (face-flux numerator, exact
/// weight moments in the denominator).
double discrete_rayleigh(const quad::Field2D& field, const WeightPair& wp);

}  // namespace wsob::minimize
