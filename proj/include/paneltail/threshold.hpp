#ifndef PANELTAIL_THRESHOLD_HPP
#define PANELTAIL_THRESHOLD_HPP

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <span>
#include <vector>

#include "paneltail/common.hpp"

namespace paneltail {

struct SecondOrderFit {
    double rho_hat = -1.0;  // clamped to [-5, -0.01]
    double b_hat = 0.0;
    int tau_choice = 1;
    long k_rho = 0;   // order-statistic level the fit was evaluated at
    long n = 0;       // sample size actually used
    long excluded = 0;  // inputs >= 1 dropped before the Y-transform
};

struct ThresholdChoice {
    double delta = 0.0;
    double k_star = 0.0;
    double epsilon = 0.0;
    long used_order_stat_index = 0;  // 1-based: delta = 1 - x_(index)
};

// How the third-moment-ratio statistic rho_tau(k) is turned into one number.
//  - fixed_tau_one: tau = 1, evaluated at k = min(floor(n^0.999), n-2); the
//    tuning that reproduces the panel-scale reference experiments.
//  - dispersion: tau in {0,1} picked by minimal sum of squared deviations of
//    rho_tau(k) from its median over k in [floor(n^0.90), floor(n^0.995)],
//    ties to tau = 0, evaluated at the range's upper end.
enum class TauPolicy { fixed_tau_one, dispersion };

namespace detail {

// log-excess moments M_j(k) = (1/k) sum_{i<=k} (z_i - z_{k})^j over the k
// largest z in descending order, via prefix sums.
struct LogExcessMoments {
    double m1, m2, m3;
};

class RhoCurve {
public:
    explicit RhoCurve(std::vector<double> z_desc) : z_(std::move(z_desc)) {
        s1_.resize(z_.size());
        s2_.resize(z_.size());
        s3_.resize(z_.size());
        double a1 = 0.0, a2 = 0.0, a3 = 0.0;
        for (std::size_t i = 0; i < z_.size(); ++i) {
            const double z = z_[i];
            a1 += z;
            a2 += z * z;
            a3 += z * z * z;
            s1_[i] = a1;
            s2_[i] = a2;
            s3_[i] = a3;
        }
    }

    std::size_t size() const { return z_.size(); }
    const std::vector<double>& values() const { return z_; }

    LogExcessMoments moments(std::size_t k) const {
        const double b = z_[k];
        const double kk = static_cast<double>(k);
        const double s1 = s1_[k - 1] / kk;
        const double s2 = s2_[k - 1] / kk;
        const double s3 = s3_[k - 1] / kk;
        return {s1 - b, s2 - 2.0 * b * s1 + b * b,
                s3 - 3.0 * b * s2 + 3.0 * b * b * s1 - b * b * b};
    }

    // rho_tau(k) = -|3 (T-1) / (T-3)| with the FAGH moment-ratio statistic T.
    double rho_at(std::size_t k, int tau) const {
        const auto m = moments(k);
        if (!(m.m1 > 0.0) || !(m.m2 > 0.0) || !(m.m3 > 0.0))
            return std::numeric_limits<double>::quiet_NaN();
        double t_stat;
        if (tau == 1) {
            const double h2 = std::sqrt(0.5 * m.m2);
            const double h3 = std::cbrt(m.m3 / 6.0);
            t_stat = (m.m1 - h2) / (h2 - h3);
        } else {
            const double l1 = std::log(m.m1);
            const double l2 = 0.5 * std::log(0.5 * m.m2);
            const double l3 = std::log(m.m3 / 6.0) / 3.0;
            t_stat = (l1 - l2) / (l2 - l3);
        }
        const double rho = -std::fabs(3.0 * (t_stat - 1.0) / (t_stat - 3.0));
        return std::isfinite(rho) ? rho : std::numeric_limits<double>::quiet_NaN();
    }

private:
    std::vector<double> z_;  // descending ln(1/(1-a))
    std::vector<double> s1_, s2_, s3_;
};

inline double median_of(std::vector<double> v) {
    const std::size_t n = v.size();
    auto mid = v.begin() + static_cast<std::ptrdiff_t>(n / 2);
    std::nth_element(v.begin(), mid, v.end());
    double hi = *mid;
    if (n % 2 == 1) return hi;
    double lo = *std::max_element(v.begin(), mid);
    return 0.5 * (lo + hi);
}

// Gomes-Martins scaled-log-spacing estimator of the second-order scale at
// level k for a given rho.
inline double gm_scale(const RhoCurve& curve, std::size_t n, std::size_t k,
                       double rho) {
    const auto& z = curve.values();
    double d0 = 0.0, dr = 0.0, d2r = 0.0;   // d_k at 0, rho, 2 rho
    double g0 = 0.0, gr = 0.0, g2r = 0.0;   // D_k at 0, rho, 2 rho
    const double kk = static_cast<double>(k);
    for (std::size_t i = 1; i <= k; ++i) {
        const double u = static_cast<double>(i) * (z[i - 1] - z[i]);
        const double w = std::pow(static_cast<double>(i) / kk, -rho);
        d0 += 1.0;
        dr += w;
        d2r += w * w;
        g0 += u;
        gr += w * u;
        g2r += w * w * u;
    }
    d0 /= kk; dr /= kk; d2r /= kk;
    g0 /= kk; gr /= kk; g2r /= kk;
    const double denom = dr * gr - g2r;
    if (denom == 0.0 || !std::isfinite(denom))
        throw degenerate_error("second-order fit: singular scale regression");
    const double b = std::pow(kk / static_cast<double>(n), rho) *
                     (dr * g0 - gr) / denom;
    if (!std::isfinite(b) || b == 0.0)
        throw degenerate_error("second-order fit: degenerate scale estimate");
    return b;
}

}  // namespace detail

// Second-order tail parameters (rho, B) of Y = 1/(1-a) from the top order
// statistics: third-moment-ratio rho estimator and scaled-log-spacing B
// estimator, evaluated per the selected TauPolicy.
inline SecondOrderFit estimate_second_order(
    std::span<const double> coeffs, TauPolicy policy = TauPolicy::fixed_tau_one) {
    std::vector<double> z;
    z.reserve(coeffs.size());
    long excluded = 0;
    for (double a : coeffs) {
        if (a >= 1.0) {
            ++excluded;
            continue;
        }
        z.push_back(-std::log1p(-a));  // ln(1/(1-a))
    }
    const std::size_t n = z.size();
    if (n < 100)
        throw parameter_error("estimate_second_order: needs at least 100 usable values");
    std::sort(z.begin(), z.end(), std::greater<>());
    detail::RhoCurve curve(std::move(z));

    const double nd = static_cast<double>(n);
    std::size_t k_rho;
    int tau;
    if (policy == TauPolicy::fixed_tau_one) {
        k_rho = std::min<std::size_t>(
            static_cast<std::size_t>(std::floor(std::pow(nd, 0.999))), n - 2);
        tau = 1;
    } else {
        const auto k_lo = static_cast<std::size_t>(std::floor(std::pow(nd, 0.90)));
        k_rho = std::min<std::size_t>(
            static_cast<std::size_t>(std::floor(std::pow(nd, 0.995))), n - 2);
        double best_ssd = std::numeric_limits<double>::infinity();
        tau = 0;
        for (int cand : {0, 1}) {
            std::vector<double> vals;
            vals.reserve(k_rho - k_lo + 1);
            for (std::size_t k = k_lo; k <= k_rho; ++k) {
                const double r = curve.rho_at(k, cand);
                if (std::isfinite(r)) vals.push_back(r);
            }
            if (vals.empty()) continue;
            const double med = detail::median_of(vals);
            double ssd = 0.0;
            for (double r : vals) ssd += (r - med) * (r - med);
            if (ssd < best_ssd) {  // strict: ties keep tau = 0
                best_ssd = ssd;
                tau = cand;
            }
        }
        if (!std::isfinite(best_ssd))
            throw degenerate_error("estimate_second_order: no valid rho values");
    }

    double rho = curve.rho_at(k_rho, tau);
    if (!std::isfinite(rho)) {
        // fall back on the central tendency of the usable part of the curve
        std::vector<double> vals;
        const auto k_lo = std::min<std::size_t>(
            static_cast<std::size_t>(std::floor(std::pow(nd, 0.90))), k_rho);
        for (std::size_t k = std::max<std::size_t>(k_lo, 2); k <= k_rho; ++k) {
            const double r = curve.rho_at(k, tau);
            if (std::isfinite(r)) vals.push_back(r);
        }
        if (vals.empty())
            throw degenerate_error("estimate_second_order: degenerate log-excess moments");
        rho = detail::median_of(vals);
    }
    rho = std::clamp(rho, -5.0, -0.01);

    SecondOrderFit fit;
    fit.rho_hat = rho;
    fit.b_hat = detail::gm_scale(curve, n, k_rho, rho);
    fit.tau_choice = tau;
    fit.k_rho = static_cast<long>(k_rho);
    fit.n = static_cast<long>(n);
    fit.excluded = excluded;
    return fit;
}

// AMSE-optimal number of upper order statistics,
//   k* = ((1-rho)^2 n^{-2 rho} / ((-2 rho) B^2))^{1/(1-2 rho)},
// computed in logs and clamped to [5, n/2] to keep the pipeline total on
// pathological samples.
inline double k_star(std::size_t n, const SecondOrderFit& fit) {
    if (!(fit.rho_hat < 0.0)) throw parameter_error("k_star: rho_hat must be < 0");
    if (!(fit.b_hat != 0.0) || !std::isfinite(fit.b_hat))
        throw parameter_error("k_star: b_hat must be finite and nonzero");
    const double rho = fit.rho_hat;
    const double log_k =
        (2.0 * std::log1p(-rho) - 2.0 * rho * std::log(static_cast<double>(n)) -
         std::log(-2.0 * rho) - 2.0 * std::log(std::fabs(fit.b_hat))) /
        (1.0 - 2.0 * rho);
    const double k = std::exp(log_k);
    if (std::isnan(k)) throw numeric_error("k_star: non-finite result");
    return std::clamp(k, 5.0, 0.5 * static_cast<double>(n));
}

// delta = 1 - x_(n-m), the (m+1)-th largest observation; the subsequent
// estimator then sees exactly the top m values when inputs are distinct.
inline ThresholdChoice threshold_from_order_stat(std::span<const double> values,
                                                 long m, double k_star_used,
                                                 double epsilon) {
    const long n = static_cast<long>(values.size());
    if (n < 2) throw parameter_error("threshold_from_order_stat: need n >= 2");
    m = std::clamp(m, 1L, n - 1);
    std::vector<double> sorted(values.begin(), values.end());
    std::stable_sort(sorted.begin(), sorted.end());
    const double x = sorted[static_cast<std::size_t>(n - m - 1)];
    const double delta = 1.0 - x;
    if (!(delta > 0.0))
        throw estimation_error("threshold selection: order statistic >= 1");
    ThresholdChoice out;
    out.delta = delta;
    out.k_star = k_star_used;
    out.epsilon = epsilon;
    out.used_order_stat_index = n - m;
    return out;
}

// Data-driven threshold: k* from the second-order fit shrunk to the sample
// fraction floor((k*)^epsilon), then delta read off the order statistics.
inline ThresholdChoice adaptive_delta(std::span<const double> coeffs,
                                      double epsilon,
                                      TauPolicy policy = TauPolicy::fixed_tau_one) {
    if (!(epsilon > 0.0 && epsilon < 1.0))
        throw parameter_error("adaptive_delta: epsilon must lie in (0,1)");
    const auto fit = estimate_second_order(coeffs, policy);
    const double ks = k_star(coeffs.size(), fit);
    const long m = static_cast<long>(std::floor(std::pow(ks, epsilon)));
    return threshold_from_order_stat(coeffs, m, ks, epsilon);
}

// Threshold minimizing the asymptotic MSE when the second-order expansion
// P(a > 1-x) = kappa x^beta (1 + tau x^nu + o(x^nu)) holds with known
// constants.
inline double delta_star(double beta, double nu, double tau, double kappa,
                         std::size_t n) {
    if (!(beta > 1.0)) throw parameter_error("delta_star: beta must be > 1");
    if (!(nu > 0.0)) throw parameter_error("delta_star: nu must be > 0");
    if (tau == 0.0) throw parameter_error("delta_star: tau must be nonzero");
    if (!(kappa > 0.0)) throw parameter_error("delta_star: kappa must be > 0");
    if (n < 1) throw parameter_error("delta_star: n must be >= 1");
    const double num = beta * (beta + nu) * (beta + nu);
    const double den = 2.0 * tau * tau * nu * nu * nu * kappa * static_cast<double>(n);
    return std::pow(num / den, 1.0 / (beta + 2.0 * nu));
}

}  // namespace paneltail

#endif
