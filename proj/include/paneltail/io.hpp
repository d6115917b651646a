#ifndef PANELTAIL_IO_HPP
#define PANELTAIL_IO_HPP

#include <charconv>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include <json.hpp>

#include "paneltail/common.hpp"
#include "paneltail/mc.hpp"
#include "paneltail/model.hpp"
#include "paneltail/tailest.hpp"
#include "paneltail/threshold.hpp"

namespace paneltail {

// Shortest decimal representation that round-trips to the same double.
inline std::string format_double(double v) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return {buf, res.ptr};
}

inline double parse_double(std::string_view s) {
    double v = 0.0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc{} || res.ptr != s.data() + s.size())
        throw data_error("not a number: '" + std::string(s) + "'");
    return v;
}

// ---- enum <-> string ----

inline std::string to_string(ShockMode m) {
    switch (m) {
        case ShockMode::idiosyncratic: return "idiosyncratic";
        case ShockMode::common: return "common";
        case ShockMode::mixed: return "mixed";
    }
    return "idiosyncratic";
}

inline ShockMode shock_mode_from(const std::string& s) {
    if (s == "idiosyncratic") return ShockMode::idiosyncratic;
    if (s == "common") return ShockMode::common;
    if (s == "mixed") return ShockMode::mixed;
    throw data_error("unknown shock_mode: " + s);
}

inline std::string to_string(InnovationDist d) {
    switch (d) {
        case InnovationDist::gaussian: return "gaussian";
        case InnovationDist::student_t: return "student_t";
        case InnovationDist::rademacher: return "rademacher";
    }
    return "gaussian";
}

inline InnovationDist dist_from(const std::string& s) {
    if (s == "gaussian") return InnovationDist::gaussian;
    if (s == "student_t") return InnovationDist::student_t;
    if (s == "rademacher") return InnovationDist::rademacher;
    throw data_error("unknown dist: " + s);
}

inline std::string to_string(ExperimentMode m) {
    switch (m) {
        case ExperimentMode::noisy_only: return "noisy-only";
        case ExperimentMode::exact_only: return "exact-only";
        case ExperimentMode::both: return "both";
    }
    return "both";
}

inline ExperimentMode experiment_mode_from(const std::string& s) {
    if (s == "noisy-only") return ExperimentMode::noisy_only;
    if (s == "exact-only") return ExperimentMode::exact_only;
    if (s == "both") return ExperimentMode::both;
    throw data_error("unknown mode: " + s);
}

// ---- JSON ----

inline void to_json(nlohmann::json& j, const CoefficientLaw& law) {
    j = {{"alpha", law.alpha}, {"beta", law.beta}};
}
inline void from_json(const nlohmann::json& j, CoefficientLaw& law) {
    law.alpha = j.at("alpha").get<double>();
    law.beta = j.at("beta").get<double>();
}

inline void to_json(nlohmann::json& j, const InnovationSpec& spec) {
    j = {{"shock_mode", to_string(spec.shock_mode)},
         {"dist", to_string(spec.dist)},
         {"moment_order_p", spec.moment_order_p}};
    if (spec.dist == InnovationDist::student_t) j["df"] = spec.df;
}
inline void from_json(const nlohmann::json& j, InnovationSpec& spec) {
    spec.shock_mode = shock_mode_from(j.value("shock_mode", std::string("idiosyncratic")));
    spec.dist = dist_from(j.value("dist", std::string("gaussian")));
    spec.df = j.value("df", 0.0);
    spec.moment_order_p = j.value("moment_order_p", 2.0);
}

inline void to_json(nlohmann::json& j, const PanelConfig& cfg) {
    j = {{"n_series", cfg.n_series},
         {"series_len", cfg.series_len},
         {"law", cfg.law},
         {"innovations", cfg.innovations},
         {"seed", cfg.seed}};
}
inline void from_json(const nlohmann::json& j, PanelConfig& cfg) {
    cfg.n_series = j.at("n_series").get<int>();
    cfg.series_len = j.at("series_len").get<int>();
    cfg.law = j.at("law").get<CoefficientLaw>();
    if (j.contains("innovations"))
        cfg.innovations = j.at("innovations").get<InnovationSpec>();
    cfg.seed = j.value("seed", std::uint64_t{0});
}

inline void to_json(nlohmann::json& j, const EstimateResult& est) {
    j = {{"beta_hat", est.beta_hat},
         {"exceedances", est.exceedances},
         {"delta", est.delta},
         {"method", est.method == EstimatorMethod::exact ? "exact" : "noisy"}};
    if (est.r) j["r"] = *est.r; else j["r"] = nullptr;
}

inline void to_json(nlohmann::json& j, const TestResult& t) {
    j = {{"z_stat", t.z_stat},
         {"omega", t.omega},
         {"critical", t.critical},
         {"reject_h0", t.reject_h0}};
}

inline void to_json(nlohmann::json& j, const SecondOrderFit& fit) {
    j = {{"rho_hat", fit.rho_hat}, {"b_hat", fit.b_hat},
         {"tau_choice", fit.tau_choice}, {"k_rho", fit.k_rho},
         {"n", fit.n}, {"excluded", fit.excluded}};
}

inline void to_json(nlohmann::json& j, const ThresholdChoice& c) {
    j = {{"delta", c.delta}, {"k_star", c.k_star},
         {"epsilon", c.epsilon},
         {"used_order_stat_index", c.used_order_stat_index}};
}

inline void to_json(nlohmann::json& j, const Scenario& s) {
    j = {{"alpha", s.alpha}, {"beta", s.beta}, {"N", s.n_series},
         {"T", s.series_len}, {"shock_mode", to_string(s.shock_mode)},
         {"dist", to_string(s.dist)}};
    if (s.dist == InnovationDist::student_t) j["df"] = s.df;
}
inline void from_json(const nlohmann::json& j, Scenario& s) {
    s.alpha = j.at("alpha").get<double>();
    s.beta = j.at("beta").get<double>();
    s.n_series = j.at("N").get<int>();
    s.series_len = j.at("T").get<int>();
    s.shock_mode = shock_mode_from(j.value("shock_mode", std::string("idiosyncratic")));
    s.dist = dist_from(j.value("dist", std::string("gaussian")));
    s.df = j.value("df", 0.0);
}

inline void to_json(nlohmann::json& j, const ExperimentSpec& spec) {
    j = {{"scenarios", spec.scenarios},
         {"epsilon_grid", spec.epsilon_grid},
         {"r_grid", spec.r_grid},
         {"omega", spec.omega},
         {"replications", spec.replications},
         {"master_seed", spec.master_seed},
         {"mode", to_string(spec.mode)}};
}
inline void from_json(const nlohmann::json& j, ExperimentSpec& spec) {
    spec.scenarios = j.at("scenarios").get<std::vector<Scenario>>();
    spec.epsilon_grid = j.at("epsilon_grid").get<std::vector<double>>();
    spec.r_grid = j.value("r_grid", std::vector<double>{});
    spec.omega = j.value("omega", 0.05);
    spec.replications = j.at("replications").get<int>();
    spec.master_seed = j.value("master_seed", std::uint64_t{0});
    spec.mode = experiment_mode_from(j.value("mode", std::string("both")));
}

// ---- files ----

inline std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw data_error("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw data_error("cannot write " + path);
    out << text;
}

inline nlohmann::json load_json(const std::string& path) {
    try {
        return nlohmann::json::parse(read_text_file(path));
    } catch (const nlohmann::json::exception& e) {
        throw data_error(path + ": " + e.what());
    }
}

// Wide panel CSV: header "t,s1,...,sN", one row per time index, t = 1..T.
inline std::string panel_to_csv(const Panel& panel) {
    const int n = panel.config.n_series;
    const int t_len = panel.config.series_len;
    std::string out = "t";
    for (int i = 1; i <= n; ++i) out += ",s" + std::to_string(i);
    out += "\n";
    for (int t = 0; t < t_len; ++t) {
        out += std::to_string(t + 1);
        for (int i = 0; i < n; ++i) {
            out += ',';
            out += format_double(panel.series(i)[static_cast<std::size_t>(t)]);
        }
        out += "\n";
    }
    return out;
}

inline Panel panel_from_csv(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line)) throw data_error("panel CSV: empty input");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    long n_cols = 0;
    for (char c : line) n_cols += (c == ',');
    if (n_cols < 1 || line.substr(0, 1) != "t")
        throw data_error("panel CSV: expected header t,s1,...,sN");
    const int n = static_cast<int>(n_cols);

    std::vector<std::vector<double>> columns(static_cast<std::size_t>(n));
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::size_t pos = line.find(',');
        if (pos == std::string::npos) throw data_error("panel CSV: malformed row");
        int col = 0;
        while (pos != std::string::npos) {
            const std::size_t next = line.find(',', pos + 1);
            const std::size_t len =
                (next == std::string::npos ? line.size() : next) - pos - 1;
            if (col >= n) throw data_error("panel CSV: too many columns");
            columns[static_cast<std::size_t>(col)].push_back(
                parse_double(std::string_view(line).substr(pos + 1, len)));
            ++col;
            pos = next;
        }
        if (col != n) throw data_error("panel CSV: ragged row");
    }
    const std::size_t t_len = columns[0].size();
    if (t_len < 2) throw data_error("panel CSV: need at least 2 rows");

    Panel panel;
    panel.config.n_series = n;
    panel.config.series_len = static_cast<int>(t_len);
    panel.values.resize(static_cast<std::size_t>(n) * t_len);
    for (int i = 0; i < n; ++i)
        std::copy(columns[static_cast<std::size_t>(i)].begin(),
                  columns[static_cast<std::size_t>(i)].end(),
                  panel.series(i).begin());
    return panel;
}

// Sidecar path: panel.csv -> panel.json.
inline std::string sidecar_path(const std::string& csv_path) {
    const auto dot = csv_path.rfind('.');
    const auto slash = csv_path.find_last_of("/\\");
    if (dot != std::string::npos && (slash == std::string::npos || dot > slash))
        return csv_path.substr(0, dot) + ".json";
    return csv_path + ".json";
}

inline std::string report_to_csv(const ExperimentReport& report) {
    std::string out =
        "scenario,estimator,epsilon,r,rmse,bias,sd,rejection_rate,failure_count\n";
    for (const auto& row : report.rows) {
        out += std::to_string(row.scenario);
        out += ',' + row.estimator;
        out += ',' + format_double(row.epsilon);
        out += ',';
        if (row.r) out += format_double(*row.r);
        out += ',' + format_double(row.rmse);
        out += ',' + format_double(row.bias);
        out += ',' + format_double(row.sd);
        out += ',' + format_double(row.rejection_rate);
        out += ',' + std::to_string(row.failure_count);
        out += '\n';
    }
    return out;
}

inline nlohmann::json report_meta_json(const ExperimentReport& report,
                                       const ExperimentSpec& spec) {
    nlohmann::json j;
    j["seed"] = report.meta.seed;
    j["replications"] = report.meta.replications;
    j["wall_time_seconds"] = report.meta.wall_time_seconds;
    j["scenarios"] = spec.scenarios;
    j["epsilon_grid"] = spec.epsilon_grid;
    j["r_grid"] = spec.r_grid;
    j["omega"] = spec.omega;
    j["mode"] = to_string(spec.mode);
    return j;
}

}  // namespace paneltail

#endif
