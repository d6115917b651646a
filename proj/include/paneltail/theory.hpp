#ifndef PANELTAIL_THEORY_HPP
#define PANELTAIL_THEORY_HPP

#include <cmath>
#include <optional>

#include "paneltail/common.hpp"
#include "paneltail/numeric.hpp"

namespace paneltail {

// Tail constants of the beta-type coefficient law at x = 1:
//   P(a > 1 - x) = kappa x^beta (1 + tau x^nu + o(x^nu)).
struct TailConstants {
    double kappa = 0.0;
    double nu = 0.0;
    double tau = 0.0;
    double rho = 0.0;      // -nu / beta
    double b_const = 0.0;  // (nu/beta) kappa^(-nu/beta) tau
    double g1 = 0.0;       // kappa * beta
};

// Density of a when a^2 ~ Beta(alpha, beta).
inline double beta_type_density(double alpha, double beta, double x) {
    if (!(x > 0.0 && x < 1.0)) return 0.0;
    return 2.0 / beta_function(alpha, beta) * std::pow(x, 2.0 * alpha - 1.0) *
           std::pow(1.0 - x * x, beta - 1.0);
}

// Closed-form constants for the beta-type law. The expansion of
// P(a > 1-x) around x = 0 gives nu = 1 and tau = -c beta/(beta+1) with
// c = (2 alpha - 1) + (beta - 1)/2; c = 0 (i.e. 4 alpha + beta = 3) makes the
// first-order term vanish and is rejected. See docs/second_order.md for the
// derivation.
inline TailConstants beta_model_constants(double alpha, double beta) {
    if (!(alpha > 0.0)) throw parameter_error("beta_model_constants: alpha must be > 0");
    if (!(beta > 1.0)) throw parameter_error("beta_model_constants: beta must be > 1");
    if (std::fabs(4.0 * alpha + beta - 3.0) < 1e-9)
        throw parameter_error(
            "beta_model_constants: 4*alpha + beta = 3 is outside the nu = 1 regime");
    TailConstants c;
    c.kappa = std::exp(beta * std::log(2.0) - std::log(beta) - log_beta(alpha, beta));
    c.nu = 1.0;
    const double lin = (2.0 * alpha - 1.0) + 0.5 * (beta - 1.0);
    c.tau = -lin * beta / (beta + 1.0);
    c.rho = -c.nu / beta;
    c.b_const = (c.nu / beta) * std::pow(c.kappa, -c.nu / beta) * c.tau;
    c.g1 = c.kappa * beta;
    return c;
}

// Unconditional autocovariance E X(0) X(t) = B(alpha + t/2, beta-1) / B(alpha, beta)
// for unit-variance shocks, evaluated in log space.
inline double autocovariance(double alpha, double beta, long t) {
    if (!(alpha > 0.0)) throw parameter_error("autocovariance: alpha must be > 0");
    if (!(beta > 1.0)) throw parameter_error("autocovariance: beta must be > 1");
    if (t < 0) throw parameter_error("autocovariance: t must be >= 0");
    return std::exp(log_beta(alpha + 0.5 * static_cast<double>(t), beta - 1.0) -
                    log_beta(alpha, beta));
}

// Spectral density f(lambda) = (2 pi)^{-1} int_0^1 g(x) / |1 - x e^{-i lambda}|^2 dx.
// Diverges at lambda = 0 for beta <= 2.
inline double spectral_density(double alpha, double beta, double lambda) {
    if (!(alpha > 0.0)) throw parameter_error("spectral_density: alpha must be > 0");
    if (!(beta > 1.0)) throw parameter_error("spectral_density: beta must be > 1");
    if (lambda == 0.0 && beta <= 2.0)
        throw parameter_error("spectral_density: lambda = 0 diverges for beta <= 2");
    const double cos_l = std::cos(lambda);
    const auto integrand = [alpha, beta, cos_l](double x) {
        return beta_type_density(alpha, beta, x) /
               (1.0 - 2.0 * x * cos_l + x * x);
    };
    return integrate_unit_split(integrand) / (2.0 * 3.14159265358979323846);
}

// Rate plan from the growth conditions on delta = const N^{-b} and T = N^a:
// admissible b interval 1/(beta+2) < b < 1/beta, and given b the lower bound
// on the panel-length exponent a (p = infinity allowed).
struct RatePlan {
    double b_lower = 0.0;
    double b_upper = 0.0;
    std::optional<double> b;
    bool b_admissible = true;
    std::optional<double> a_lower;
};

inline RatePlan rate_planner(double beta, double p,
                             std::optional<double> b_exp = std::nullopt) {
    if (!(beta > 1.0)) throw parameter_error("rate_planner: beta must be > 1");
    if (!(p > 2.0)) throw parameter_error("rate_planner: p must be > 2 (or infinite)");
    RatePlan plan;
    plan.b_lower = 1.0 / (beta + 2.0);
    plan.b_upper = 1.0 / beta;
    if (b_exp) {
        const double b = *b_exp;
        plan.b = b;
        plan.b_admissible = (b > plan.b_lower && b < plan.b_upper);
        const double first = 0.5 * (1.0 + b * beta);
        double second = (2.0 - beta) * b + 1.0;
        if (std::isfinite(p)) second += (1.0 + b * beta) / p;
        plan.a_lower = std::max(first, second);
    }
    return plan;
}

}  // namespace paneltail

#endif
