// lpglm command-line front end: simulate | fit | analyze | predict | evaluate.

#include <CLI11.hpp>

#include <cstdint>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "lpglm/errors.hpp"
#include "lpglm/pipeline.hpp"

namespace {

using lpglm::ConfigError;
using lpglm::PipelineConfig;

struct CommonOptions {
    std::string config;
    std::string data;
    std::string out;
    std::string response;
    std::string family;
    std::optional<std::uint64_t> seed;
    bool trend = false;
    std::optional<double> trend_scale;
    std::vector<std::string> harmonics;
    std::vector<std::string> columns;
};

struct AnalyzeOptions {
    std::string kinds;
    std::optional<int> bootstrap;
    std::optional<std::size_t> horizon;
    std::optional<std::size_t> arch_draws;
};

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, sep))
        if (!item.empty()) out.push_back(item);
    return out;
}

// "52" or "52:1,2,4"
lpglm::HarmonicTerm parse_harmonic(const std::string& text) {
    lpglm::HarmonicTerm h;
    const auto colon = text.find(':');
    try {
        h.period = std::stod(text.substr(0, colon));
        if (colon != std::string::npos) {
            h.multipliers.clear();
            for (const auto& k : split(text.substr(colon + 1), ',')) h.multipliers.push_back(std::stoi(k));
        }
    } catch (const std::exception&) {
        throw ConfigError("bad --harmonic value '" + text + "' (expected PERIOD or PERIOD:K1,K2,...)");
    }
    return h;
}

void add_common(CLI::App* cmd, CommonOptions& o) {
    cmd->add_option("--config", o.config, "JSON config file; flags override its fields");
    cmd->add_option("--data", o.data, "input CSV with a header row");
    cmd->add_option("--out", o.out, "output path (stdout when omitted)");
    cmd->add_option("--response", o.response, "response column name (default y)");
    cmd->add_option("--family", o.family, "poisson|gamma|gaussian|bernoulli");
    cmd->add_option("--seed", o.seed, "master RNG seed (required)");
    cmd->add_flag("--trend", o.trend, "add a t/scale trend column");
    cmd->add_option("--trend-scale", o.trend_scale, "divisor of the trend column (default n)");
    cmd->add_option("--harmonic", o.harmonics, "harmonic term PERIOD[:K1,K2,...]; repeatable");
    cmd->add_option("--column", o.columns, "explicit covariate column from the CSV; repeatable");
}

void add_analysis(CLI::App* cmd, AnalyzeOptions& a) {
    cmd->add_option("--kinds", a.kinds, "comma-separated latent kinds: lnar,gar,arch");
    cmd->add_option("--bootstrap", a.bootstrap, "parametric bootstrap replications (0 = off)");
    cmd->add_option("--horizon", a.horizon, "prediction horizon l >= 1");
    cmd->add_option("--arch-draws", a.arch_draws, "Monte Carlo draws for ARCH prediction");
}

PipelineConfig build_config(const CommonOptions& o, const AnalyzeOptions* a) {
    PipelineConfig cfg;
    if (!o.config.empty()) {
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(lpglm::read_text_file(o.config));
        } catch (const nlohmann::json::parse_error& e) {
            throw ConfigError("config " + o.config + " is not valid JSON: " + e.what());
        }
        cfg = lpglm::config_from_json(j);
    }
    if (!o.data.empty()) cfg.data_path = o.data;
    if (!o.out.empty()) cfg.out_path = o.out;
    if (!o.response.empty()) cfg.response = o.response;
    if (!o.family.empty()) cfg.family = lpglm::family_from_string(o.family);
    if (o.seed) cfg.seed = o.seed;
    if (o.trend) cfg.design.include_trend = true;
    if (o.trend_scale) cfg.design.trend_scale = o.trend_scale;
    if (!o.harmonics.empty()) {
        cfg.design.harmonics.clear();
        for (const auto& h : o.harmonics) cfg.design.harmonics.push_back(parse_harmonic(h));
    }
    if (!o.columns.empty()) cfg.design.columns = o.columns;
    if (a) {
        if (!a->kinds.empty()) {
            cfg.kinds.clear();
            for (const auto& k : split(a->kinds, ',')) cfg.kinds.push_back(lpglm::latent_kind_from_string(k));
        }
        if (a->bootstrap) cfg.bootstrap = *a->bootstrap;
        if (a->horizon) cfg.horizon = *a->horizon;
        if (a->arch_draws) cfg.arch_draws = *a->arch_draws;
    }
    return cfg;
}

void emit(const std::string& path, const std::string& text) {
    if (path.empty())
        std::cout << text;
    else
        lpglm::write_text_file(path, text);
}

int cmd_simulate(const CommonOptions& o) {
    PipelineConfig cfg = build_config(o, nullptr);
    const lpglm::SimulatedSeries s = lpglm::simulate_series(cfg);
    std::vector<double> t(static_cast<std::size_t>(s.y.size()));
    for (std::size_t i = 0; i < t.size(); ++i) t[i] = static_cast<double>(i + 1);
    const std::vector<double> y(s.y.data(), s.y.data() + s.y.size());
    const std::vector<double> mu(s.mu.data(), s.mu.data() + s.mu.size());
    const std::string path = cfg.out_path.empty() ? "/dev/stdout" : cfg.out_path;
    lpglm::write_csv(path, {"t", cfg.response, "mu", "nu"}, {t, y, mu, s.nu});
    return 0;
}

int cmd_fit(const CommonOptions& o) {
    PipelineConfig cfg = build_config(o, nullptr);
    cfg.validate(false);
    if (cfg.data_path.empty()) throw ConfigError("fit needs --data");
    const lpglm::Dataset data = lpglm::load_dataset(cfg.data_path, cfg);
    emit(cfg.out_path, lpglm::dump_json(lpglm::fit_report(cfg, data)));
    return 0;
}

int cmd_analyze(const CommonOptions& o, const AnalyzeOptions& a) {
    PipelineConfig cfg = build_config(o, &a);
    cfg.validate(true);
    if (cfg.data_path.empty()) throw ConfigError("analyze needs --data");
    const lpglm::Dataset data = lpglm::load_dataset(cfg.data_path, cfg);
    emit(cfg.out_path, lpglm::dump_json(lpglm::analyze(cfg, data)));
    return 0;
}

int cmd_predict(const std::string& report_path, const std::string& data_path, std::optional<std::size_t> horizon,
                const std::string& out) {
    const nlohmann::json report = nlohmann::json::parse(lpglm::read_text_file(report_path));
    const PipelineConfig cfg = lpglm::config_from_json(report.at("config"));
    const std::string path = data_path.empty() ? cfg.data_path : data_path;
    if (path.empty()) throw ConfigError("predict needs --data (the report does not name a data file)");
    const lpglm::Dataset data = lpglm::load_dataset(path, cfg);
    emit(out, lpglm::dump_json(lpglm::predict_from_report(report, data, horizon.value_or(cfg.horizon))));
    return 0;
}

int cmd_evaluate(const std::string& pred_path, const std::string& pred_col, const std::string& data_path,
                 const std::string& response, const std::string& out) {
    const auto to_vec = [](const std::vector<double>& v) {
        return Eigen::VectorXd(Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size())));
    };
    const Eigen::VectorXd pred = to_vec(lpglm::CsvTable::read(pred_path).numeric_column(pred_col));
    const Eigen::VectorXd obs = to_vec(lpglm::CsvTable::read(data_path).numeric_column(response));
    emit(out, lpglm::dump_json(lpglm::evaluation_json(pred, obs)));
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Latent-process GLMs for time series: simulate, fit, analyze, predict, evaluate"};
    app.require_subcommand(1);

    CommonOptions sim_o, fit_o, an_o;
    AnalyzeOptions an_a;
    auto* sim = app.add_subcommand("simulate", "emit a synthetic series (CSV) from a fully specified model");
    add_common(sim, sim_o);
    auto* fitc = app.add_subcommand("fit", "GLM pseudo-likelihood fit only");
    add_common(fitc, fit_o);
    auto* an = app.add_subcommand("analyze", "fit, moment estimation, inference and prediction per latent kind");
    add_common(an, an_o);
    add_analysis(an, an_a);

    std::string pr_report, pr_data, pr_out;
    std::optional<std::size_t> pr_horizon;
    auto* pr = app.add_subcommand("predict", "predictions from a saved analyze report");
    pr->add_option("--report", pr_report, "report JSON written by analyze")->required();
    pr->add_option("--data", pr_data, "CSV the report was fitted on (default: path stored in the report)");
    pr->add_option("--horizon", pr_horizon, "prediction horizon l >= 1");
    pr->add_option("--out", pr_out, "output JSON path");

    std::string ev_pred, ev_col = "prediction", ev_data, ev_resp = "y", ev_out;
    auto* ev = app.add_subcommand("evaluate", "RMSE and correlation of predictions against observations");
    ev->add_option("--predictions", ev_pred, "CSV holding the predictions")->required();
    ev->add_option("--column", ev_col, "prediction column name");
    ev->add_option("--data", ev_data, "CSV holding the observations")->required();
    ev->add_option("--response", ev_resp, "observation column name");
    ev->add_option("--out", ev_out, "output JSON path");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*sim) return cmd_simulate(sim_o);
        if (*fitc) return cmd_fit(fit_o);
        if (*an) return cmd_analyze(an_o, an_a);
        if (*pr) return cmd_predict(pr_report, pr_data, pr_horizon, pr_out);
        if (*ev) return cmd_evaluate(ev_pred, ev_col, ev_data, ev_resp, ev_out);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const lpglm::ParseError& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return 3;
    } catch (const lpglm::DataError& e) {
        std::cerr << "data error: " << e.what() << "\n";
        return 3;
    } catch (const nlohmann::json::exception& e) {
        std::cerr << "report error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
