#pragma once

#include <stdexcept>
#include <string>

namespace wsob::special {

/// Thrown for parameter combinations the closed forms do not cover
/// (currently only the Grushin case m=2, n=1).
struct unsupported_case : std::domain_error {
    using std::domain_error::domain_error;
};

/// ln Gamma(x) for x > 0, Lanczos approximation evaluated in log space.
/// Relative error below 1e-13 on [0.5, 200]; throws std::domain_error for
/// nonpositive or non-finite x.
double ln_gamma(double x);

/// Volume of the unit ball in R^m.
double unit_ball_volume(int m);

/// Surface measure of the unit sphere S^{n-1} in R^n.
double unit_sphere_area(int n);

enum class FormulaId { BetaAlphaMinus1, BetaEqAlpha, GrushinTau1 };

struct ConstantResult {
    double value;
    FormulaId formula_id;
    // parameter echo
    int n;
    double alpha;  // unused for the Grushin formula
    int m;         // unused for the half-space formulas
};

/// Best constant for the weighted inequality with beta = alpha - 1:
///   alpha (n+alpha-1) [pi^{n/2} G(alpha) G(n/2+alpha) / G(n+2 alpha)]^{1/(n+alpha)}.
ConstantResult sharp_constant_case1(int n, double alpha);

/// Best constant for beta = alpha:
///   (n+alpha-1)(n+alpha+1) [pi^{n/2}/2 G((alpha+1)/2) G((n+alpha+1)/2) / G(n+alpha+1)]^{2/(n+alpha+1)}.
ConstantResult sharp_constant_case2(int n, double alpha);

/// Best constant for the tau=1 Grushin inequality:
///   m (2n+m-2) [pi^{(n+m)/2} G((n+m)/2) / G(n+m)]^{2/(2n+m)}.
/// The pair (m=2, n=1) is outside the covered family and throws unsupported_case.
ConstantResult grushin_sharp_constant_tau1(int n, int m);

}  // namespace wsob::special
