#ifndef PANELTAIL_CLI_HPP
#define PANELTAIL_CLI_HPP

#include <cmath>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "paneltail/io.hpp"
#include "paneltail/theory.hpp"

namespace paneltail {

namespace cli_detail {

inline void emit(const std::string& text, const std::string& out_path) {
    if (out_path.empty())
        std::cout << text;
    else
        write_text_file(out_path, text);
}

inline std::vector<double> panel_autocorrs(const Panel& panel) {
    std::vector<double> a_hats(static_cast<std::size_t>(panel.config.n_series));
    for (int i = 0; i < panel.config.n_series; ++i)
        a_hats[static_cast<std::size_t>(i)] = lag1_autocorr(panel.series(i));
    return a_hats;
}

struct EstimateOutcome {
    EstimateResult estimate;
    std::optional<ThresholdChoice> threshold;
    std::optional<SecondOrderFit> second_order;
};

inline EstimateOutcome estimate_from_panel(const Panel& panel, double epsilon,
                                           double fixed_delta, double r) {
    EstimateOutcome out;
    const auto a_hats = panel_autocorrs(panel);
    double delta = fixed_delta;
    if (fixed_delta <= 0.0) {
        out.second_order = estimate_second_order(a_hats);
        const double ks = k_star(a_hats.size(), *out.second_order);
        const long m = static_cast<long>(std::floor(std::pow(ks, epsilon)));
        out.threshold = threshold_from_order_stat(a_hats, m, ks, epsilon);
        delta = out.threshold->delta;
    }
    out.estimate = tail_index_noisy(a_hats, delta, r);
    return out;
}

}  // namespace cli_detail

// Command-line surface. Returns the process exit code:
// 0 success, 1 usage error, 2 input/data error, 3 numeric/estimation failure.
inline int run_cli(std::vector<std::string> args) {
    CLI::App app{"panel RCAR(1) tail-index toolkit"};
    app.require_subcommand(1);

    // simulate
    auto* sim = app.add_subcommand("simulate", "simulate a panel to CSV");
    std::string sim_config, sim_out;
    bool keep_truth = false;
    sim->add_option("--config", sim_config, "PanelConfig JSON file")->required();
    sim->add_option("--out", sim_out, "output panel CSV path")->required();
    sim->add_flag("--keep-truth", keep_truth, "record true coefficients in the sidecar");

    // estimate
    auto* est = app.add_subcommand("estimate", "tail index from a panel CSV");
    std::string est_panel, est_out;
    double est_eps = 0.0, est_delta = 0.0, est_r = 10.0, est_level = 0.95;
    est->add_option("--panel", est_panel, "panel CSV path")->required();
    auto* oeps = est->add_option("--epsilon", est_eps, "sample-fraction exponent in (0,1)");
    auto* odelta = est->add_option("--delta", est_delta, "explicit threshold in (0,1)");
    oeps->excludes(odelta);
    odelta->excludes(oeps);
    est->add_option("--r", est_r, "truncation order (> 1)");
    est->add_option("--level", est_level, "confidence level");
    est->add_option("--out", est_out, "output JSON path (default stdout)");

    // test
    auto* tst = app.add_subcommand("test", "long-memory test from a panel CSV");
    std::string tst_panel, tst_out;
    double tst_eps = 0.0, tst_delta = 0.0, tst_r = 10.0, tst_omega = 0.05;
    tst->add_option("--panel", tst_panel, "panel CSV path")->required();
    auto* toeps = tst->add_option("--epsilon", tst_eps, "sample-fraction exponent in (0,1)");
    auto* todelta = tst->add_option("--delta", tst_delta, "explicit threshold in (0,1)");
    toeps->excludes(todelta);
    todelta->excludes(toeps);
    tst->add_option("--r", tst_r, "truncation order (> 1)");
    tst->add_option("--omega", tst_omega, "test level in (0,1)");
    tst->add_option("--out", tst_out, "output JSON path (default stdout)");

    // theory
    auto* theo = app.add_subcommand("theory", "closed-form quantities as CSV");
    double th_alpha = 0.0, th_beta = 0.0;
    theo->require_subcommand(1);
    auto* th_const = theo->add_subcommand("constants", "tail constants");
    auto* th_acf = theo->add_subcommand("acf", "autocovariance on a lag grid");
    auto* th_spec = theo->add_subcommand("spectrum", "spectral density on a grid");
    long th_tmax = 10;
    double th_lmin = 0.01, th_lmax = 3.14159265358979323846;
    long th_points = 200;
    std::string th_out;
    for (auto* sub : {th_const, th_acf, th_spec}) {
        sub->add_option("--alpha", th_alpha, "shape alpha")->required();
        sub->add_option("--beta", th_beta, "tail index beta")->required();
        sub->add_option("--out", th_out, "output CSV path (default stdout)");
    }
    th_acf->add_option("--tmax", th_tmax, "largest lag");
    th_spec->add_option("--lambda-min", th_lmin, "grid start");
    th_spec->add_option("--lambda-max", th_lmax, "grid end");
    th_spec->add_option("--points", th_points, "grid size");

    // experiment
    auto* exp = app.add_subcommand("experiment", "Monte Carlo experiment");
    std::string exp_spec, exp_out;
    unsigned exp_threads = 1;
    std::uint64_t exp_seed = 0;
    bool exp_seed_set = false;
    exp->add_option("--spec", exp_spec, "ExperimentSpec JSON file")->required();
    exp->add_option("--out", exp_out, "output report CSV path")->required();
    exp->add_option("--threads", exp_threads, "worker threads (0 = all cores)");
    exp->add_option("--seed", exp_seed, "override master seed")
        ->each([&](const std::string&) { exp_seed_set = true; });

    // probe
    auto* prb = app.add_subcommand("probe", "autocorrelation noise probe");
    double pr_alpha = 0.0, pr_beta = 0.0, pr_eps = 0.1;
    int pr_reps = 1000;
    std::uint64_t pr_seed = 0;
    std::vector<int> pr_grid;
    std::string pr_out;
    unsigned pr_threads = 1;
    prb->add_option("--alpha", pr_alpha, "shape alpha")->required();
    prb->add_option("--beta", pr_beta, "tail index beta")->required();
    prb->add_option("--t-grid", pr_grid, "series lengths (comma separated)")
        ->required()->delimiter(',');
    prb->add_option("--eps", pr_eps, "deviation threshold");
    prb->add_option("--reps", pr_reps, "replications per length");
    prb->add_option("--seed", pr_seed, "master seed");
    prb->add_option("--threads", pr_threads, "worker threads (0 = all cores)");
    prb->add_option("--out", pr_out, "output CSV path (default stdout)");

    std::vector<const char*> argv;
    argv.reserve(args.size() + 1);
    argv.push_back("paneltail");
    for (const auto& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (*sim) {
            PanelConfig cfg = load_json(sim_config).get<PanelConfig>();
            const Panel panel = simulate_panel(cfg, keep_truth);
            write_text_file(sim_out, panel_to_csv(panel));
            nlohmann::json side;
            side["config"] = cfg;
            if (panel.true_coeffs) side["true_coeffs"] = *panel.true_coeffs;
            write_text_file(sidecar_path(sim_out), side.dump(2) + "\n");
        } else if (*est) {
            if ((oeps->count() == 0) == (odelta->count() == 0)) {
                std::cerr << "estimate: exactly one of --epsilon/--delta is required\n";
                return 1;
            }
            const Panel panel = panel_from_csv(read_text_file(est_panel));
            const auto outcome = cli_detail::estimate_from_panel(
                panel, est_eps, odelta->count() ? est_delta : 0.0, est_r);
            const auto ci = confidence_interval(outcome.estimate, est_level);
            nlohmann::json j;
            j["estimate"] = outcome.estimate;
            j["ci"] = {{"level", est_level}, {"lower", ci.first}, {"upper", ci.second}};
            if (outcome.threshold) j["threshold"] = *outcome.threshold;
            if (outcome.second_order) j["second_order"] = *outcome.second_order;
            const std::string text = j.dump(2) + "\n";
            cli_detail::emit(text, est_out);
            if (!est_out.empty()) std::cout << text;
        } else if (*tst) {
            if ((toeps->count() == 0) == (todelta->count() == 0)) {
                std::cerr << "test: exactly one of --epsilon/--delta is required\n";
                return 1;
            }
            const Panel panel = panel_from_csv(read_text_file(tst_panel));
            const auto outcome = cli_detail::estimate_from_panel(
                panel, tst_eps, todelta->count() ? tst_delta : 0.0, tst_r);
            const auto result = long_memory_test(outcome.estimate, tst_omega);
            nlohmann::json j = result;
            const std::string text = j.dump(2) + "\n";
            cli_detail::emit(text, tst_out);
            if (!tst_out.empty()) std::cout << text;
        } else if (*theo) {
            std::string csv;
            if (*th_const) {
                const auto c = beta_model_constants(th_alpha, th_beta);
                csv = "name,value\n";
                csv += "kappa," + format_double(c.kappa) + "\n";
                csv += "nu," + format_double(c.nu) + "\n";
                csv += "tau," + format_double(c.tau) + "\n";
                csv += "rho," + format_double(c.rho) + "\n";
                csv += "B," + format_double(c.b_const) + "\n";
                csv += "g1," + format_double(c.g1) + "\n";
                csv += "d," + format_double(1.0 - 0.5 * th_beta) + "\n";
            } else if (*th_acf) {
                if (th_tmax < 0) throw parameter_error("theory acf: tmax must be >= 0");
                csv = "t,value\n";
                for (long t = 0; t <= th_tmax; ++t)
                    csv += std::to_string(t) + "," +
                           format_double(autocovariance(th_alpha, th_beta, t)) + "\n";
            } else {
                if (th_points < 2) throw parameter_error("theory spectrum: need >= 2 points");
                csv = "lambda,value\n";
                for (long i = 0; i < th_points; ++i) {
                    const double lam = th_lmin + (th_lmax - th_lmin) *
                                       static_cast<double>(i) /
                                       static_cast<double>(th_points - 1);
                    csv += format_double(lam) + "," +
                           format_double(spectral_density(th_alpha, th_beta, lam)) + "\n";
                }
            }
            cli_detail::emit(csv, th_out);
        } else if (*exp) {
            ExperimentSpec spec = load_json(exp_spec).get<ExperimentSpec>();
            if (exp_seed_set) spec.master_seed = exp_seed;
            std::cerr << "experiment: " << spec.scenarios.size() << " scenario(s) x "
                      << spec.replications << " replication(s), seed "
                      << spec.master_seed << "\n";
            const auto report = run_experiment(spec, exp_threads);
            write_text_file(exp_out, report_to_csv(report));
            write_text_file(exp_out + ".meta.json",
                            report_meta_json(report, spec).dump(2) + "\n");
            std::cerr << "experiment: done in " << report.meta.wall_time_seconds
                      << "s\n";
        } else if (*prb) {
            const auto points =
                noise_probe(pr_alpha, pr_beta, pr_grid, pr_eps, pr_reps, pr_seed,
                            pr_threads);
            std::string csv = "T,probability\n";
            for (const auto& p : points)
                csv += std::to_string(p.series_len) + "," +
                       format_double(p.probability) + "\n";
            cli_detail::emit(csv, pr_out);
        }
    } catch (const parameter_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const data_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const estimation_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
    return 0;
}

}  // namespace paneltail

#endif
