#include "wsob/params.hpp"

#include <cmath>

#include "wsob/special.hpp"

namespace wsob {

double critical_exponent(const WeightPair& wp) {
    const double d = wp.n + wp.alpha - 1.0;
    if (!(d > 0.0))
        throw std::domain_error("critical_exponent: n + alpha - 1 must be positive");
    return 2.0 * (wp.n + wp.beta + 1.0) / d;
}

AdmissibilityClass classify(const WeightPair& wp) {
    const double a = wp.alpha, b = wp.beta;
    const int n = wp.n;
    const double lower = (n - 1.0) * b / (n + 1.0);
    AdmissibilityClass c{};
    c.gn_valid = a > 0.0 && b > -1.0 && lower <= a && a <= b + 2.0;
    c.strict_valid = a > 0.0 && b > -1.0 && lower < a && a < b + 2.0;
    c.reg_valid = a > 0.0 && b > -1.0 && a + b >= 0.0 && lower <= a && a < b + 2.0;
    if (n >= 2) {
        c.n1_unique = true;  // vacuous off n = 1
    } else {
        const double lhs = (1.0 - (1.0 - a) * (1.0 - a)) / 4.0;
        const double denom = (a + b + 2.0) * (a + b + 2.0);
        c.n1_unique = lhs <= a * (2.0 + b) / denom;
    }
    return c;
}

WeightPair grushin_to_weight(const GrushinParams& gp) {
    const double tp1 = gp.tau + 1.0;
    return {gp.n, (gp.m + gp.tau - 1.0) / tp1, gp.m / tp1 - 1.0};
}

double constant_conversion(const GrushinParams& gp, double s_weighted) {
    if (!(s_weighted > 0.0))
        throw std::domain_error("constant_conversion: s_weighted must be positive");
    const double Q = gp.homogeneous_dim();
    const double m_omega = gp.m * special::unit_ball_volume(gp.m);
    return std::pow(m_omega, 2.0 / Q) * std::pow(gp.tau + 1.0, (2.0 * Q - 2.0) / Q) *
           s_weighted;
}

namespace {
constexpr double kCaseTol = 1e-12;
}

bool is_case1_pair(const WeightPair& wp) {
    return std::fabs(wp.beta - (wp.alpha - 1.0)) <= kCaseTol;
}

bool is_case2_pair(const WeightPair& wp) {
    return std::fabs(wp.beta - wp.alpha) <= kCaseTol;
}

bool in_nonexistence_regime(const WeightPair& wp) {
    if (wp.n < 2 || wp.alpha < 2.0) return false;
    const double beta_crit = (wp.n + 1.0) * wp.alpha / (wp.n - 1.0);
    return std::fabs(wp.beta - beta_crit) <= 1e-12 * std::max(1.0, std::fabs(beta_crit));
}

}  // namespace wsob
