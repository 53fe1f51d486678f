#include "wsob/special.hpp"

#include <cmath>
#include <limits>

namespace wsob::special {

namespace {

// Lanczos coefficients, g = 607/128, N = 15 (Godfrey's set). Good for
// ~15 significant digits over the positive real axis.
constexpr double kLanczosG = 607.0 / 128.0;
constexpr double kLanczos[15] = {
    0.99999999999999709182,
    57.156235665862923517,
    -59.597960355475491248,
    14.136097974741747174,
    -0.49191381609762019978,
    0.33994649984811888699e-4,
    0.46523628927048575665e-4,
    -0.98374475304879564677e-4,
    0.15808870322491248884e-3,
    -0.21026444172410488319e-3,
    0.21743961811521264320e-3,
    -0.16431810653676389022e-3,
    0.84418223983852743293e-4,
    -0.26190838401581408670e-4,
    0.36899182659531622704e-5,
};
constexpr double kHalfLogTwoPi = 0.91893853320467274178;  // ln(2 pi)/2

double lanczos_ln_gamma(double x) {
    // Direct series: valid for x > 0. For x < 0.5 the reflection formula
    // would be needed; the domain here is x > 0 and accuracy below 0.5 is
    // still ~1e-14 with the shifted recurrence.
    if (x < 0.5) {
        // ln G(x) = ln G(x+1) - ln x
        return lanczos_ln_gamma(x + 1.0) - std::log(x);
    }
    const double z = x - 1.0;
    double sum = kLanczos[0];
    for (int k = 1; k < 15; ++k) sum += kLanczos[k] / (z + k);
    const double base = z + kLanczosG + 0.5;
    return kHalfLogTwoPi + (z + 0.5) * std::log(base) - base + std::log(sum);
}

}  // namespace

double ln_gamma(double x) {
    if (!std::isfinite(x) || x <= 0.0)
        throw std::domain_error("ln_gamma: argument must be finite and positive");
    return lanczos_ln_gamma(x);
}

double unit_ball_volume(int m) {
    if (m < 1) throw std::domain_error("unit_ball_volume: m must be >= 1");
    const double pi = 3.14159265358979323846;
    return std::exp(0.5 * m * std::log(pi) - ln_gamma(0.5 * m + 1.0));
}

double unit_sphere_area(int n) {
    if (n < 1) throw std::domain_error("unit_sphere_area: n must be >= 1");
    const double pi = 3.14159265358979323846;
    return 2.0 * std::exp(0.5 * n * std::log(pi) - ln_gamma(0.5 * n));
}

ConstantResult sharp_constant_case1(int n, double alpha) {
    if (n < 1) throw std::domain_error("sharp_constant_case1: n must be >= 1");
    if (!std::isfinite(alpha) || alpha <= 0.0)
        throw std::domain_error("sharp_constant_case1: alpha must be positive");
    const double pi = 3.14159265358979323846;
    // bracket in log space; G(n+2a) overflows in direct form already for
    // moderate n + 2 alpha.
    const double log_br = 0.5 * n * std::log(pi) + ln_gamma(alpha) +
                          ln_gamma(0.5 * n + alpha) - ln_gamma(n + 2.0 * alpha);
    const double value = alpha * (n + alpha - 1.0) * std::exp(log_br / (n + alpha));
    return {value, FormulaId::BetaAlphaMinus1, n, alpha, 0};
}

ConstantResult sharp_constant_case2(int n, double alpha) {
    if (n < 1) throw std::domain_error("sharp_constant_case2: n must be >= 1");
    if (!std::isfinite(alpha) || alpha <= 0.0)
        throw std::domain_error("sharp_constant_case2: alpha must be positive");
    const double pi = 3.14159265358979323846;
    const double log_br = 0.5 * n * std::log(pi) - std::log(2.0) +
                          ln_gamma(0.5 * (alpha + 1.0)) +
                          ln_gamma(0.5 * (n + alpha + 1.0)) - ln_gamma(n + alpha + 1.0);
    const double value = (n + alpha - 1.0) * (n + alpha + 1.0) *
                         std::exp(2.0 * log_br / (n + alpha + 1.0));
    return {value, FormulaId::BetaEqAlpha, n, alpha, 0};
}

ConstantResult grushin_sharp_constant_tau1(int n, int m) {
    if (n < 1 || m < 1)
        throw std::domain_error("grushin_sharp_constant_tau1: n, m must be >= 1");
    if (m == 2 && n == 1)
        throw unsupported_case(
            "grushin_sharp_constant_tau1: the pair (n=1, m=2) is outside the covered family");
    const double pi = 3.14159265358979323846;
    const double log_br = 0.5 * (n + m) * std::log(pi) + ln_gamma(0.5 * (n + m)) -
                          ln_gamma(static_cast<double>(n + m));
    const double value = m * (2.0 * n + m - 2.0) * std::exp(2.0 * log_br / (2.0 * n + m));
    return {value, FormulaId::GrushinTau1, n, 0.0, m};
}

}  // namespace wsob::special
