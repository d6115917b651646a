#ifndef PANELTAIL_ACF_HPP
#define PANELTAIL_ACF_HPP

#include <cmath>
#include <span>

#include "paneltail/common.hpp"

namespace paneltail {

// Sample lag-1 autocorrelation
//   sum_{t=1}^{T-1} (X_t - Xbar)(X_{t+1} - Xbar) / sum_{t=1}^{T} (X_t - Xbar)^2
// computed in two passes. Bounded by 1 in absolute value (Cauchy-Schwarz) and
// invariant under affine maps of the series.
inline double lag1_autocorr(std::span<const double> series) {
    const std::size_t t_len = series.size();
    if (t_len < 2) throw parameter_error("lag1_autocorr: need at least 2 points");
    double mean = 0.0;
    for (double v : series) mean += v;
    mean /= static_cast<double>(t_len);
    double num = 0.0, den = 0.0;
    double prev = series[0] - mean;
    den = prev * prev;
    for (std::size_t t = 1; t < t_len; ++t) {
        const double cur = series[t] - mean;
        num += prev * cur;
        den += cur * cur;
        prev = cur;
    }
    if (den < 1e-300) throw degenerate_error("lag1_autocorr: constant series");
    double r = num / den;
    if (r > 1.0) r = 1.0;
    if (r < -1.0) r = -1.0;
    return r;
}

// Truncation at level 1 - delta^r used by the noisy tail estimator.
inline double truncate_estimate(double a_hat, double delta, double r) {
    if (!(delta > 0.0 && delta < 1.0))
        throw parameter_error("truncate_estimate: delta must lie in (0,1)");
    if (!(r > 1.0)) throw parameter_error("truncate_estimate: r must be > 1");
    const double cap = 1.0 - std::pow(delta, r);
    return a_hat < cap ? a_hat : cap;
}

}  // namespace paneltail

#endif
