#ifndef PANELTAIL_MODEL_HPP
#define PANELTAIL_MODEL_HPP

#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "paneltail/common.hpp"
#include "paneltail/rng.hpp"

namespace paneltail {

// Beta-type law of the AR coefficient: a^2 ~ Beta(alpha, beta), so the
// density of a is (2/B(alpha,beta)) x^(2 alpha - 1) (1 - x^2)^(beta - 1)
// on (0,1). beta > 1 keeps the stationary variance finite.
struct CoefficientLaw {
    double alpha = 1.0;
    double beta = 2.0;

    void validate() const {
        if (!(alpha > 0.0)) throw parameter_error("CoefficientLaw: alpha must be > 0");
        if (!(beta > 1.0)) throw parameter_error("CoefficientLaw: beta must be > 1");
    }
};

enum class ShockMode { idiosyncratic, common, mixed };
enum class InnovationDist { gaussian, student_t, rademacher };

// Innovation decomposition zeta_i(t) = b_i eta(t) + c_i xi_i(t) with a shared
// eta stream and per-series xi streams. Weights: idiosyncratic (b,c)=(0,1),
// common (b,c)=(1,0), mixed draws b=sqrt(W), c=sqrt(1-W), W ~ U(0,1).
struct InnovationSpec {
    ShockMode shock_mode = ShockMode::idiosyncratic;
    InnovationDist dist = InnovationDist::gaussian;
    double df = 0.0;              // student_t only
    double moment_order_p = 2.0;  // finite 2p-th moment marker

    void validate() const {
        if (!(moment_order_p > 1.0))
            throw parameter_error("InnovationSpec: moment_order_p must be > 1");
        if (dist == InnovationDist::student_t && !(df > 2.0 * moment_order_p))
            throw parameter_error(
                "InnovationSpec: student_t requires df > 2 * moment_order_p");
    }
};

struct PanelConfig {
    int n_series = 1;
    int series_len = 2;
    CoefficientLaw law;
    InnovationSpec innovations;
    std::uint64_t seed = 0;

    void validate() const {
        if (n_series < 1) throw parameter_error("PanelConfig: n_series must be >= 1");
        if (series_len < 2) throw parameter_error("PanelConfig: series_len must be >= 2");
        law.validate();
        innovations.validate();
    }
};

// N x T panel, row i = series i.
struct Panel {
    std::vector<double> values;  // row-major, n_series rows of series_len
    std::optional<std::vector<double>> true_coeffs;
    PanelConfig config;

    std::span<const double> series(int i) const {
        return {values.data() + static_cast<std::size_t>(i) * config.series_len,
                static_cast<std::size_t>(config.series_len)};
    }
    std::span<double> series(int i) {
        return {values.data() + static_cast<std::size_t>(i) * config.series_len,
                static_cast<std::size_t>(config.series_len)};
    }
};

namespace detail {

inline double draw_standardized(Rng& rng, const InnovationSpec& spec) {
    switch (spec.dist) {
        case InnovationDist::gaussian: return rng.normal();
        case InnovationDist::student_t: return rng.student_t_unit(spec.df);
        case InnovationDist::rademacher: return rng.rademacher();
    }
    throw parameter_error("unknown innovation distribution");
}

// Burn-in length for non-gaussian starts: enough steps that the initial
// state's weight a^m drops below 1e-6, capped at 1e5 as a -> 1.
inline long burn_in_steps(double a) {
    if (a <= 0.0) return 0;
    const double m = std::ceil(std::log(1e-6) / std::log(a));
    if (!(m > 0.0)) return 1;
    return static_cast<long>(std::min(m, 1e5));
}

}  // namespace detail

// I.i.d. draws of a with a^2 ~ Beta(alpha, beta). Draws that round to the
// closed endpoints are rejected so 1/(1-a^2) stays finite.
inline std::vector<double> sample_coefficients(const CoefficientLaw& law,
                                               std::size_t n, Rng& rng) {
    law.validate();
    if (n < 1) throw parameter_error("sample_coefficients: n must be >= 1");
    std::vector<double> out(n);
    for (auto& a : out) {
        do {
            a = std::sqrt(rng.beta(law.alpha, law.beta));
        } while (!(a > 0.0) || !(a < 1.0));
    }
    return out;
}

// One stationary RCAR(1) trajectory X(t) = a X(t-1) + b eta(t) + c xi(t),
// t = 1..T. Gaussian innovations use the exact stationary start
// X(0) ~ N(0, (b^2+c^2)/(1-a^2)); other distributions use a variance-matched
// start plus burn-in (private draws stand in for the pre-sample shocks).
inline std::vector<double> simulate_series(
    double a, double b, double c,
    std::span<const double> common_shocks,  // length T when b > 0, else may be empty
    int t_len, const InnovationSpec& spec, Rng& rng) {
    if (!(a >= 0.0 && a < 1.0))
        throw parameter_error("simulate_series: a must lie in [0,1)");
    if (t_len < 2) throw parameter_error("simulate_series: T must be >= 2");
    if (b < 0.0 || c < 0.0 || (b == 0.0 && c == 0.0))
        throw parameter_error("simulate_series: weights must be >= 0, not both 0");
    if (b > 0.0 && common_shocks.size() != static_cast<std::size_t>(t_len))
        throw parameter_error("simulate_series: common shocks of length T required");
    spec.validate();

    const double stat_sd = std::sqrt((b * b + c * c) / (1.0 - a * a));
    double x;
    if (spec.dist == InnovationDist::gaussian) {
        x = stat_sd * rng.normal();
    } else {
        x = stat_sd * detail::draw_standardized(rng, spec);
        const long burn = detail::burn_in_steps(a);
        for (long s = 0; s < burn; ++s) {
            double shock = 0.0;
            if (b > 0.0) shock += b * detail::draw_standardized(rng, spec);
            if (c > 0.0) shock += c * detail::draw_standardized(rng, spec);
            x = a * x + shock;
        }
    }
    std::vector<double> out(static_cast<std::size_t>(t_len));
    for (int t = 0; t < t_len; ++t) {
        double shock = 0.0;
        if (b > 0.0) shock += b * common_shocks[static_cast<std::size_t>(t)];
        if (c > 0.0) shock += c * detail::draw_standardized(rng, spec);
        x = a * x + shock;
        out[static_cast<std::size_t>(t)] = x;
    }
    return out;
}

inline Panel simulate_panel(const PanelConfig& config, bool keep_truth) {
    config.validate();
    const int n = config.n_series;
    const int t_len = config.series_len;

    Rng coeff_rng = Rng::substream(config.seed, stream::coefficients, 0);
    auto coeffs =
        sample_coefficients(config.law, static_cast<std::size_t>(n), coeff_rng);

    const bool needs_common = config.innovations.shock_mode != ShockMode::idiosyncratic;
    std::vector<double> common;
    if (needs_common) {
        Rng common_rng = Rng::substream(config.seed, stream::common_shocks, 0);
        common.resize(static_cast<std::size_t>(t_len));
        for (auto& e : common)
            e = detail::draw_standardized(common_rng, config.innovations);
    }

    Panel panel;
    panel.config = config;
    panel.values.resize(static_cast<std::size_t>(n) * t_len);
    for (int i = 0; i < n; ++i) {
        double b = 0.0, c = 1.0;
        switch (config.innovations.shock_mode) {
            case ShockMode::idiosyncratic: break;
            case ShockMode::common: b = 1.0; c = 0.0; break;
            case ShockMode::mixed: {
                Rng wrng = Rng::substream(config.seed, stream::weights,
                                          static_cast<std::uint64_t>(i));
                const double w = wrng.uniform();
                b = std::sqrt(w);
                c = std::sqrt(1.0 - w);
                break;
            }
        }
        Rng series_rng = Rng::substream(config.seed, stream::series,
                                        static_cast<std::uint64_t>(i));
        auto traj = simulate_series(coeffs[static_cast<std::size_t>(i)], b, c,
                                    common, t_len, config.innovations, series_rng);
        std::copy(traj.begin(), traj.end(), panel.series(i).begin());
    }
    if (keep_truth) panel.true_coeffs = std::move(coeffs);
    return panel;
}

// Contemporaneous aggregate N^{-1/2} sum_i X_i(t).
inline std::vector<double> aggregate_panel(const Panel& panel) {
    const int n = panel.config.n_series;
    const int t_len = panel.config.series_len;
    if (n < 1) throw parameter_error("aggregate_panel: empty panel");
    std::vector<double> out(static_cast<std::size_t>(t_len), 0.0);
    for (int i = 0; i < n; ++i) {
        auto row = panel.series(i);
        for (int t = 0; t < t_len; ++t)
            out[static_cast<std::size_t>(t)] += row[static_cast<std::size_t>(t)];
    }
    const double scale = 1.0 / std::sqrt(static_cast<double>(n));
    for (auto& v : out) v *= scale;
    return out;
}

}  // namespace paneltail

#endif
