#ifndef PANELTAIL_MC_HPP
#define PANELTAIL_MC_HPP

#include <chrono>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "paneltail/acf.hpp"
#include "paneltail/common.hpp"
#include "paneltail/model.hpp"
#include "paneltail/tailest.hpp"
#include "paneltail/threshold.hpp"

namespace paneltail {

struct Scenario {
    double alpha = 1.0;
    double beta = 2.0;
    int n_series = 1;
    int series_len = 2;
    ShockMode shock_mode = ShockMode::idiosyncratic;
    InnovationDist dist = InnovationDist::gaussian;
    double df = 0.0;  // student_t only
};

enum class ExperimentMode { noisy_only, exact_only, both };

struct ExperimentSpec {
    std::vector<Scenario> scenarios;
    std::vector<double> epsilon_grid;
    std::vector<double> r_grid;
    double omega = 0.05;
    int replications = 1;
    std::uint64_t master_seed = 0;
    ExperimentMode mode = ExperimentMode::both;

    bool wants_noisy() const { return mode != ExperimentMode::exact_only; }
    bool wants_exact() const { return mode != ExperimentMode::noisy_only; }

    void validate() const {
        if (scenarios.empty()) throw parameter_error("ExperimentSpec: no scenarios");
        if (replications < 1)
            throw parameter_error("ExperimentSpec: replications must be >= 1");
        if (epsilon_grid.empty())
            throw parameter_error("ExperimentSpec: epsilon_grid must be non-empty");
        if (wants_noisy() && r_grid.empty())
            throw parameter_error("ExperimentSpec: r_grid must be non-empty");
        if (!(omega > 0.0 && omega < 1.0))
            throw parameter_error("ExperimentSpec: omega must lie in (0,1)");
        for (const auto& s : scenarios) {
            PanelConfig cfg = make_config(s, 0);
            cfg.validate();
        }
        for (double e : epsilon_grid)
            if (!(e > 0.0 && e < 1.0))
                throw parameter_error("ExperimentSpec: epsilon values must lie in (0,1)");
        for (double r : r_grid)
            if (!(r > 1.0)) throw parameter_error("ExperimentSpec: r values must be > 1");
    }

    static PanelConfig make_config(const Scenario& s, std::uint64_t seed) {
        PanelConfig cfg;
        cfg.n_series = s.n_series;
        cfg.series_len = s.series_len;
        cfg.law = CoefficientLaw{s.alpha, s.beta};
        cfg.innovations.shock_mode = s.shock_mode;
        cfg.innovations.dist = s.dist;
        cfg.innovations.df = s.df;
        cfg.innovations.moment_order_p = 2.0;
        cfg.seed = seed;
        return cfg;
    }
};

struct ExperimentRow {
    int scenario = 0;
    std::string estimator;        // "noisy" or "exact"
    double epsilon = 0.0;
    std::optional<double> r;      // absent for the exact estimator
    double rmse = 0.0;
    double bias = 0.0;
    double sd = 0.0;
    double rejection_rate = 0.0;
    long failure_count = 0;
};

struct ExperimentMeta {
    std::uint64_t seed = 0;
    int replications = 0;
    double wall_time_seconds = 0.0;
};

struct ExperimentReport {
    std::vector<ExperimentRow> rows;
    ExperimentMeta meta;
};

namespace detail {

struct CellResult {
    double beta_hat = 0.0;
    bool ok = false;
    bool reject = false;
};

}  // namespace detail

// Runs every scenario x replication, estimating the tail index from sample
// lag-1 autocorrelations (noisy path) and, in oracle modes, from the true
// coefficients of the same panels (paired design). Output is identical for a
// fixed master seed at any parallelism: replication seeds are counter-derived
// and aggregation runs in slot order.
inline ExperimentReport run_experiment(const ExperimentSpec& spec,
                                       unsigned parallelism = 1) {
    spec.validate();
    const auto t_start = std::chrono::steady_clock::now();

    const std::size_t n_eps = spec.epsilon_grid.size();
    const std::size_t n_r = spec.r_grid.size();
    const std::size_t noisy_cells = spec.wants_noisy() ? n_eps * n_r : 0;
    const std::size_t exact_cells = spec.wants_exact() ? n_eps : 0;
    const std::size_t cells_per_rep = noisy_cells + exact_cells;
    const std::size_t reps = static_cast<std::size_t>(spec.replications);
    const std::size_t n_scen = spec.scenarios.size();

    std::vector<detail::CellResult> slots(n_scen * reps * cells_per_rep);

    parallel_for(n_scen * reps, parallelism, [&](std::size_t unit) {
        const std::size_t scen_idx = unit / reps;
        const std::size_t rep_idx = unit % reps;
        const Scenario& scen = spec.scenarios[scen_idx];
        const std::uint64_t rep_seed =
            substream_seed(spec.master_seed, stream::replication + scen_idx, rep_idx);
        detail::CellResult* cell = slots.data() + unit * cells_per_rep;

        Panel panel;
        std::vector<double> a_hats;
        bool panel_ok = true;
        try {
            panel = simulate_panel(ExperimentSpec::make_config(scen, rep_seed),
                                   spec.wants_exact());
            if (spec.wants_noisy()) {
                a_hats.resize(static_cast<std::size_t>(scen.n_series));
                for (int i = 0; i < scen.n_series; ++i)
                    a_hats[static_cast<std::size_t>(i)] = lag1_autocorr(panel.series(i));
            }
        } catch (const estimation_error&) {
            panel_ok = false;
        }

        if (spec.wants_noisy() && panel_ok) {
            std::optional<SecondOrderFit> fit;
            std::optional<double> ks;
            try {
                fit = estimate_second_order(a_hats);
                ks = k_star(a_hats.size(), *fit);
            } catch (const estimation_error&) {
            }
            for (std::size_t ei = 0; ei < n_eps; ++ei) {
                std::optional<ThresholdChoice> choice;
                if (ks) {
                    try {
                        const long m = static_cast<long>(
                            std::floor(std::pow(*ks, spec.epsilon_grid[ei])));
                        choice = threshold_from_order_stat(a_hats, m, *ks,
                                                           spec.epsilon_grid[ei]);
                    } catch (const estimation_error&) {
                    }
                }
                for (std::size_t ri = 0; ri < n_r; ++ri) {
                    detail::CellResult& c = cell[ei * n_r + ri];
                    if (!choice) continue;
                    try {
                        const auto est = tail_index_noisy(a_hats, choice->delta,
                                                          spec.r_grid[ri]);
                        const auto test = long_memory_test(est, spec.omega);
                        c.beta_hat = est.beta_hat;
                        c.reject = test.reject_h0;
                        c.ok = true;
                    } catch (const estimation_error&) {
                    }
                }
            }
        }

        if (spec.wants_exact() && panel_ok) {
            detail::CellResult* exact_cell = cell + noisy_cells;
            const auto& truth = *panel.true_coeffs;
            std::optional<SecondOrderFit> fit;
            std::optional<double> ks;
            try {
                fit = estimate_second_order(truth);
                ks = k_star(truth.size(), *fit);
            } catch (const estimation_error&) {
            }
            for (std::size_t ei = 0; ei < n_eps; ++ei) {
                detail::CellResult& c = exact_cell[ei];
                if (!ks) continue;
                try {
                    const long m = static_cast<long>(
                        std::floor(std::pow(*ks, spec.epsilon_grid[ei])));
                    const auto choice = threshold_from_order_stat(
                        truth, m, *ks, spec.epsilon_grid[ei]);
                    const auto est = tail_index_gs(truth, choice.delta);
                    const auto test = long_memory_test(est, spec.omega);
                    c.beta_hat = est.beta_hat;
                    c.reject = test.reject_h0;
                    c.ok = true;
                } catch (const estimation_error&) {
                }
            }
        }
    });

    ExperimentReport report;
    for (std::size_t scen_idx = 0; scen_idx < n_scen; ++scen_idx) {
        const double beta_true = spec.scenarios[scen_idx].beta;
        const auto aggregate = [&](std::size_t cell_offset, const char* tag,
                                   double eps, std::optional<double> r) {
            double sum = 0.0, sum_sq = 0.0;
            long ok_count = 0, reject_count = 0;
            for (std::size_t rep = 0; rep < reps; ++rep) {
                const auto& c =
                    slots[(scen_idx * reps + rep) * cells_per_rep + cell_offset];
                if (!c.ok) continue;
                const double d = c.beta_hat - beta_true;
                sum += d;
                sum_sq += d * d;
                ++ok_count;
                if (c.reject) ++reject_count;
            }
            ExperimentRow row;
            row.scenario = static_cast<int>(scen_idx);
            row.estimator = tag;
            row.epsilon = eps;
            row.r = r;
            row.failure_count = static_cast<long>(reps) - ok_count;
            if (ok_count > 0) {
                const double n = static_cast<double>(ok_count);
                row.bias = sum / n;
                const double msq = sum_sq / n;
                row.rmse = std::sqrt(msq);
                row.sd = std::sqrt(std::max(msq - row.bias * row.bias, 0.0));
                row.rejection_rate = static_cast<double>(reject_count) / n;
            }
            report.rows.push_back(std::move(row));
        };
        if (spec.wants_noisy())
            for (std::size_t ei = 0; ei < n_eps; ++ei)
                for (std::size_t ri = 0; ri < n_r; ++ri)
                    aggregate(ei * n_r + ri, "noisy", spec.epsilon_grid[ei],
                              spec.r_grid[ri]);
        if (spec.wants_exact())
            for (std::size_t ei = 0; ei < n_eps; ++ei)
                aggregate(noisy_cells + ei, "exact", spec.epsilon_grid[ei],
                          std::nullopt);
    }

    report.meta.seed = spec.master_seed;
    report.meta.replications = spec.replications;
    report.meta.wall_time_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start)
            .count();
    return report;
}

struct ProbePoint {
    int series_len = 0;
    double probability = 0.0;
};

// Empirical frequency of |a_hat - a| > eps over independent (coefficient,
// series) draws, per series length. Gaussian idiosyncratic innovations.
inline std::vector<ProbePoint> noise_probe(double alpha, double beta,
                                           const std::vector<int>& t_grid,
                                           double eps, int reps,
                                           std::uint64_t seed,
                                           unsigned parallelism = 1) {
    if (!(eps > 0.0)) throw parameter_error("noise_probe: eps must be > 0");
    if (reps < 1) throw parameter_error("noise_probe: reps must be >= 1");
    const CoefficientLaw law{alpha, beta};
    law.validate();
    InnovationSpec innov;  // gaussian idiosyncratic

    std::vector<ProbePoint> out(t_grid.size());
    for (std::size_t ti = 0; ti < t_grid.size(); ++ti) {
        const int t_len = t_grid[ti];
        if (t_len < 2) throw parameter_error("noise_probe: T must be >= 2");
        std::vector<unsigned char> hits(static_cast<std::size_t>(reps), 0);
        parallel_for(static_cast<std::size_t>(reps), parallelism, [&](std::size_t rep) {
            Rng rng = Rng::substream(seed, stream::replication + ti, rep);
            const double a = sample_coefficients(law, 1, rng)[0];
            const auto series = simulate_series(a, 0.0, 1.0, {}, t_len, innov, rng);
            const double a_hat = lag1_autocorr(series);
            hits[rep] = std::fabs(a_hat - a) > eps ? 1 : 0;
        });
        long count = 0;
        for (auto h : hits) count += h;
        out[ti] = {t_len, static_cast<double>(count) / static_cast<double>(reps)};
    }
    return out;
}

}  // namespace paneltail

#endif
