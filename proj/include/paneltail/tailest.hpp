#ifndef PANELTAIL_TAILEST_HPP
#define PANELTAIL_TAILEST_HPP

#include <cmath>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "paneltail/acf.hpp"
#include "paneltail/common.hpp"
#include "paneltail/numeric.hpp"

namespace paneltail {

enum class EstimatorMethod { exact, noisy };

struct EstimateResult {
    double beta_hat = 0.0;
    long exceedances = 0;            // K: #{values > 1 - delta}
    double delta = 0.0;
    std::optional<double> r;         // truncation order, noisy method only
    EstimatorMethod method = EstimatorMethod::exact;
};

struct TestResult {
    double z_stat = 0.0;
    double omega = 0.0;
    double critical = 0.0;
    bool reject_h0 = false;
};

namespace detail {

inline EstimateResult goldie_smith(std::span<const double> values, double delta,
                                   EstimatorMethod method,
                                   std::optional<double> r) {
    if (!(delta > 0.0 && delta < 1.0))
        throw parameter_error("tail index: delta must lie in (0,1)");
    const double threshold = 1.0 - delta;
    long k = 0;
    double log_sum = 0.0;
    for (double a : values) {
        if (a > threshold) {
            ++k;
            log_sum += std::log(delta / (1.0 - a));
        }
    }
    if (k == 0)
        throw no_exceedances_error("tail index: no observations above 1 - delta");
    if (!(log_sum > 0.0))
        throw degenerate_error("tail index: zero log-excess denominator");
    EstimateResult out;
    out.beta_hat = static_cast<double>(k) / log_sum;
    out.exceedances = k;
    out.delta = delta;
    out.r = r;
    out.method = method;
    return out;
}

}  // namespace detail

// Goldie-Smith tail index from exactly observed coefficients:
//   beta_N = K_N / sum_{a_i > 1-delta} ln(delta / (1 - a_i)).
inline EstimateResult tail_index_gs(std::span<const double> coeffs, double delta) {
    return detail::goldie_smith(coeffs, delta, EstimatorMethod::exact, std::nullopt);
}

// Noisy variant: every input is first truncated at 1 - delta^r, then the same
// ratio is computed from the truncated values.
inline EstimateResult tail_index_noisy(std::span<const double> a_hats,
                                       double delta, double r) {
    if (!(r > 1.0)) throw parameter_error("tail_index_noisy: r must be > 1");
    std::vector<double> truncated(a_hats.size());
    for (std::size_t i = 0; i < a_hats.size(); ++i)
        truncated[i] = truncate_estimate(a_hats[i], delta, r);
    return detail::goldie_smith(truncated, delta, EstimatorMethod::noisy, r);
}

// Self-normalized confidence interval from sqrt(K)(beta_hat - beta) -> N(0, beta^2),
// with beta replaced by beta_hat in the variance.
inline std::pair<double, double> confidence_interval(const EstimateResult& est,
                                                     double level) {
    if (est.exceedances < 1)
        throw estimation_error("confidence_interval: needs K >= 1");
    if (!(level > 0.0 && level < 1.0))
        throw parameter_error("confidence_interval: level must lie in (0,1)");
    const double z = normal_quantile(0.5 * (1.0 + level));
    const double half = z * est.beta_hat / std::sqrt(static_cast<double>(est.exceedances));
    return {est.beta_hat - half, est.beta_hat + half};
}

// One-sided test of H0: beta >= 2 against the long-memory alternative
// beta < 2, via Z = sqrt(K) (beta_hat - 2) / beta_hat; rejects when
// Z falls below the omega-quantile of the standard normal.
inline TestResult long_memory_test(const EstimateResult& est, double omega) {
    if (est.exceedances < 1) throw estimation_error("long_memory_test: needs K >= 1");
    if (!(est.beta_hat > 0.0))
        throw estimation_error("long_memory_test: needs beta_hat > 0");
    if (!(omega > 0.0 && omega < 1.0))
        throw parameter_error("long_memory_test: omega must lie in (0,1)");
    TestResult out;
    out.omega = omega;
    out.z_stat = std::sqrt(static_cast<double>(est.exceedances)) *
                 (est.beta_hat - 2.0) / est.beta_hat;
    out.critical = normal_quantile(omega);
    out.reject_h0 = out.z_stat < out.critical;
    return out;
}

}  // namespace paneltail

#endif
