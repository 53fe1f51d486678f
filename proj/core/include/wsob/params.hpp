#pragma once

#include <stdexcept>

namespace wsob {

/// Weight exponent pair (alpha, beta) on the half space R^{n+1}_+, with the
/// dimension n of the tangential variable y.
struct WeightPair {
    int n;
    double alpha;
    double beta;
};

/// Critical exponent p* = 2(n+beta+1)/(n+alpha-1). Throws std::domain_error
/// when n+alpha-1 <= 0.
double critical_exponent(const WeightPair& wp);

struct AdmissibilityClass {
    bool gn_valid;     // alpha>0, beta>-1, (n-1)beta/(n+1) <= alpha <= beta+2
    bool strict_valid; // same with strict inner inequalities
    bool reg_valid;    // adds alpha+beta >= 0 and alpha < beta+2
    bool n1_unique;    // n=1 extra condition (1-(1-alpha)^2)/4 <= alpha(2+beta)/(alpha+beta+2)^2
};

AdmissibilityClass classify(const WeightPair& wp);

/// Parameters of the Baouendi-Grushin operator on R^n_x x R^m_z.
struct GrushinParams {
    int n;
    int m;
    double tau;

    double homogeneous_dim() const { return m + n * (tau + 1.0); }
};

/// Weight pair matched to the Grushin parameters:
///   alpha = (m+tau-1)/(tau+1),  beta = m/(tau+1) - 1.
WeightPair grushin_to_weight(const GrushinParams& gp);

/// Converts a half-space sharp constant to the Grushin one:
///   (m omega_m)^{2/Q} (tau+1)^{(2Q-2)/Q} * s_weighted.
double constant_conversion(const GrushinParams& gp, double s_weighted);

/// True when beta routes to the beta = alpha - 1 closed form (exact or
/// within 1e-12).
bool is_case1_pair(const WeightPair& wp);

/// True when beta routes to the beta = alpha closed form.
bool is_case2_pair(const WeightPair& wp);

/// The analytically known nonexistence regime of the radial problem:
/// n >= 2, alpha >= 2, beta = (n+1)alpha/(n-1).
bool in_nonexistence_regime(const WeightPair& wp);

}  // namespace wsob
