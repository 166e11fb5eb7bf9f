#include "lpglm/pipeline.hpp"

#include <cmath>

#include "lpglm/errors.hpp"

namespace lpglm {

namespace {

using json = nlohmann::json;

ordered_json vec_json(const Eigen::VectorXd& v) {
    ordered_json a = ordered_json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v[i]);
    return a;
}

ordered_json mat_json(const Eigen::MatrixXd& m) {
    ordered_json a = ordered_json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) a.push_back(vec_json(m.row(r).transpose()));
    return a;
}

Eigen::VectorXd json_vec(const json& j) {
    Eigen::VectorXd v(static_cast<Eigen::Index>(j.size()));
    for (std::size_t i = 0; i < j.size(); ++i) v[static_cast<Eigen::Index>(i)] = j[i].get<double>();
    return v;
}

// Distinct, reproducible sub-seeds for each stage of a run.
std::uint64_t stage_seed(std::uint64_t master, std::uint64_t stage) {
    Rng r = substream(master, stage);
    return r();
}
constexpr std::uint64_t kBootstrapStage = 100;
constexpr std::uint64_t kArchStage = 200;
constexpr std::uint64_t kSimulationStage = 300;

template <class T>
T get_or(const json& j, const char* key, T fallback) {
    return j.contains(key) && !j.at(key).is_null() ? j.at(key).get<T>() : fallback;
}

LatentSpec latent_from_json(const json& j) {
    const LatentKind kind = latent_kind_from_string(j.at("kind").get<std::string>());
    LatentSpec s{kind, get_or<double>(j, "sigma2", 0.0), j.at("rho").get<double>()};
    s.validate();
    return s;
}

double pearson_dispersion(const Dataset& data, const Eigen::VectorXd& mu) {
    if (data.family.family == Family::Poisson || data.family.family == Family::Bernoulli) return 1.0;
    double acc = 0.0;
    for (Eigen::Index t = 0; t < mu.size(); ++t) {
        const double r = data.y[t] - mu[t];
        acc += r * r / variance_function(data.family, mu[t]);
    }
    return acc / static_cast<double>(data.n() - data.p());
}

ordered_json glm_block(const Dataset& data, const FitResult& fit) {
    ordered_json g = to_json(fit);
    const double phi = pearson_dispersion(data, fit.mu_hat);
    Eigen::VectorXd w(fit.mu_hat.size());
    for (Eigen::Index t = 0; t < w.size(); ++t) w[t] = variance_function(data.family, fit.mu_hat[t]);
    const Eigen::MatrixXd info = data.X.transpose() * (data.X.array().colwise() * w.array()).matrix();
    const Eigen::MatrixXd cov = phi * info.ldlt().solve(Eigen::MatrixXd::Identity(data.p(), data.p()));
    g["dispersion"] = phi;
    g["se_naive"] = vec_json(cov.diagonal().cwiseMax(0.0).cwiseSqrt());
    return g;
}

ordered_json data_block(const PipelineConfig& cfg, const Dataset& data) {
    ordered_json d;
    d["n"] = data.n();
    d["p"] = data.p();
    d["response"] = cfg.response;
    ordered_json cols = ordered_json::array();
    for (const auto& c : cfg.design.column_names()) cols.push_back(c);
    d["columns"] = cols;
    d["y"] = vec_json(data.y);
    return d;
}

ordered_json report_header(const PipelineConfig& cfg) {
    ordered_json r;
    r["schema_version"] = kReportSchemaVersion;
    r["config"] = config_to_json(cfg);
    return r;
}

PredictionOptions prediction_options(const PipelineConfig& cfg, std::size_t horizon) {
    PredictionOptions o;
    o.horizon = horizon;
    o.arch_draws = cfg.arch_draws;
    o.seed = stage_seed(*cfg.seed, kArchStage);
    return o;
}

}  // namespace

void PipelineConfig::validate(bool need_kinds) const {
    if (!seed) throw ConfigError("a seed is required (--seed or \"seed\" in the config)");
    if (need_kinds && kinds.empty()) throw ConfigError("at least one latent kind is required");
    if (horizon < 1) throw ConfigError("horizon must be >= 1");
    if (bootstrap < 0 || bootstrap == 1) throw ConfigError("bootstrap must be 0 (off) or >= 2");
    if (arch_draws < 1) throw ConfigError("arch_draws must be >= 1");
    for (std::size_t i = 0; i < kinds.size(); ++i)
        for (std::size_t j = 0; j < i; ++j)
            if (kinds[i] == kinds[j]) throw ConfigError("duplicate latent kind in config");
    design.validate();
}

PipelineConfig config_from_json(const json& j) {
    PipelineConfig c;
    try {
        c.data_path = get_or<std::string>(j, "data", "");
        c.out_path = get_or<std::string>(j, "out", "");
        c.response = get_or<std::string>(j, "response", "y");
        c.family = family_from_string(get_or<std::string>(j, "family", "poisson"));
        if (j.contains("kinds"))
            for (const auto& k : j.at("kinds")) c.kinds.push_back(latent_kind_from_string(k.get<std::string>()));
        if (j.contains("design")) {
            const json& d = j.at("design");
            c.design.include_trend = get_or<bool>(d, "trend", false);
            if (d.contains("trend_scale") && !d.at("trend_scale").is_null())
                c.design.trend_scale = d.at("trend_scale").get<double>();
            if (d.contains("harmonics")) {
                for (const auto& h : d.at("harmonics")) {
                    HarmonicTerm term;
                    term.period = h.at("period").get<double>();
                    if (h.contains("multipliers")) term.multipliers = h.at("multipliers").get<std::vector<int>>();
                    c.design.harmonics.push_back(term);
                }
            }
            if (d.contains("columns")) c.design.columns = d.at("columns").get<std::vector<std::string>>();
        }
        c.bootstrap = get_or<int>(j, "bootstrap", 0);
        c.horizon = get_or<std::size_t>(j, "horizon", 1);
        if (j.contains("seed") && !j.at("seed").is_null()) c.seed = j.at("seed").get<std::uint64_t>();
        c.arch_draws = get_or<std::size_t>(j, "arch_draws", 10000);
        if (j.contains("simulation") && !j.at("simulation").is_null()) {
            const json& s = j.at("simulation");
            SimulationSpec sim;
            sim.n = s.at("n").get<std::size_t>();
            sim.beta = s.at("beta").get<std::vector<double>>();
            sim.latent = latent_from_json(s.at("latent"));
            sim.phi = get_or<double>(s, "phi", 1.0);
            c.simulation = sim;
        }
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("malformed config: ") + e.what());
    }
    return c;
}

ordered_json config_to_json(const PipelineConfig& c) {
    ordered_json j;
    j["data"] = c.data_path;
    j["out"] = c.out_path;
    j["response"] = c.response;
    j["family"] = std::string(to_string(c.family));
    ordered_json kinds = ordered_json::array();
    for (auto k : c.kinds) kinds.push_back(std::string(to_string(k)));
    j["kinds"] = kinds;
    ordered_json d;
    d["trend"] = c.design.include_trend;
    d["trend_scale"] = c.design.trend_scale ? ordered_json(*c.design.trend_scale) : ordered_json(nullptr);
    ordered_json hs = ordered_json::array();
    for (const auto& h : c.design.harmonics) {
        ordered_json hj;
        hj["period"] = h.period;
        hj["multipliers"] = h.multipliers;
        hs.push_back(hj);
    }
    d["harmonics"] = hs;
    d["columns"] = c.design.columns;
    j["design"] = d;
    j["bootstrap"] = c.bootstrap;
    j["horizon"] = c.horizon;
    j["seed"] = c.seed ? ordered_json(*c.seed) : ordered_json(nullptr);
    j["arch_draws"] = c.arch_draws;
    if (c.simulation) {
        ordered_json s;
        s["n"] = c.simulation->n;
        s["beta"] = c.simulation->beta;
        ordered_json l;
        l["kind"] = std::string(to_string(c.simulation->latent.kind));
        l["sigma2"] = c.simulation->latent.sigma2;
        l["rho"] = c.simulation->latent.rho;
        s["latent"] = l;
        s["phi"] = c.simulation->phi;
        j["simulation"] = s;
    }
    return j;
}

Dataset dataset_from_table(const CsvTable& table, const PipelineConfig& cfg) {
    if (!table.has_column(cfg.response))
        throw ConfigError("CSV has no response column named '" + cfg.response + "'");
    const std::vector<double> y = table.numeric_column(cfg.response);
    if (y.empty()) throw DataError("CSV has no data rows");
    std::vector<std::vector<double>> extra;
    for (const auto& c : cfg.design.columns) extra.push_back(table.numeric_column(c));
    Dataset d;
    d.y = Eigen::Map<const Eigen::VectorXd>(y.data(), static_cast<Eigen::Index>(y.size()));
    d.X = build_design(y.size(), cfg.design, extra);
    d.family = FamilySpec::make(cfg.family, 1.0);
    d.validate();
    return d;
}

Dataset load_dataset(const std::string& path, const PipelineConfig& cfg) {
    return dataset_from_table(CsvTable::read(path), cfg);
}

SimulatedSeries simulate_series(const PipelineConfig& cfg) {
    cfg.validate(false);
    if (!cfg.simulation) throw ConfigError("simulate needs a \"simulation\" block");
    const SimulationSpec& sim = *cfg.simulation;
    if (sim.n < 1) throw ConfigError("simulation.n must be >= 1");
    if (!cfg.design.columns.empty()) throw ConfigError("simulation supports generated designs only");
    const Eigen::MatrixXd X = build_design(sim.n, cfg.design);
    if (static_cast<Eigen::Index>(sim.beta.size()) != X.cols())
        throw ConfigError("simulation.beta has " + std::to_string(sim.beta.size()) + " entries, design has " +
                          std::to_string(X.cols()) + " columns");
    const FamilySpec fam = FamilySpec::make(cfg.family, sim.phi);
    const Eigen::VectorXd beta = Eigen::Map<const Eigen::VectorXd>(sim.beta.data(), X.cols());
    SimulatedSeries out;
    Dataset shell{Eigen::VectorXd::Zero(X.rows()), X, fam};
    out.mu = fitted_means(shell, beta);
    Rng rng = substream(*cfg.seed, kSimulationStage);
    out.nu = simulate(sim.latent, sim.n, rng);
    out.y.resize(X.rows());
    for (Eigen::Index t = 0; t < X.rows(); ++t)
        out.y[t] = sample(fam, out.mu[t] * out.nu[static_cast<std::size_t>(t)], rng);
    return out;
}

ordered_json to_json(const FitResult& fit) {
    ordered_json j;
    j["beta_hat"] = vec_json(fit.beta_hat);
    j["converged"] = fit.converged;
    j["iterations"] = fit.iterations;
    j["max_score_norm"] = fit.max_score_norm;
    j["log_likelihood"] = fit.log_likelihood;
    j["mu_hat"] = vec_json(fit.mu_hat);
    return j;
}

ordered_json to_json(const MomEstimate& e) {
    ordered_json j;
    j["kind"] = std::string(to_string(e.kind));
    j["family"] = std::string(to_string(e.family));
    j["valid"] = e.valid;
    j["reason"] = e.reason;
    j["sigma2"] = e.sigma2 ? ordered_json(*e.sigma2) : ordered_json(nullptr);
    j["rho"] = e.rho;
    j["phi"] = e.phi ? ordered_json(*e.phi) : ordered_json(nullptr);
    ordered_json s;
    s["S0"] = e.sums.S0;
    s["S1"] = e.sums.S1;
    s["S2"] = e.sums.S2;
    s["M0"] = e.sums.M0;
    s["M1"] = e.sums.M1;
    s["M2"] = e.sums.M2;
    s["P"] = e.sums.P;
    s["n"] = e.sums.n;
    j["sums"] = s;
    return j;
}

ordered_json to_json(const CovarianceReport& c) {
    ordered_json j;
    j["phi"] = c.phi;
    j["truncation_lag"] = c.truncation_lag;
    j["se_naive"] = vec_json(c.se_naive);
    j["se_sandwich"] = vec_json(c.se_sandwich);
    j["omega_I"] = mat_json(c.omega_I);
    j["omega_I_dagger"] = mat_json(c.omega_I_dagger);
    j["omega_II"] = mat_json(c.omega_II);
    j["naive"] = mat_json(c.naive);
    j["sandwich"] = mat_json(c.sandwich);
    return j;
}

ordered_json to_json(const BootstrapReport& b) {
    ordered_json j;
    j["replications"] = b.replications;
    j["failed"] = b.failed;
    j["degraded"] = b.degraded();
    j["seed"] = b.seed;
    j["mean_boot"] = vec_json(b.mean_boot);
    j["se_boot"] = vec_json(b.se_boot);
    return j;
}

ordered_json to_json(const PredictionReport& p) {
    ordered_json j;
    j["method"] = std::string(to_string(p.method));
    j["horizon"] = p.horizon;
    j["rmse"] = p.rmse;
    j["correlation"] = p.correlation;
    if (p.method == PredictionMethod::MonteCarlo) {
        j["mc_draws"] = p.mc_draws;
        j["max_mc_rel_se"] = p.max_mc_rel_se;
        j["mc_warning"] = p.mc_warning;
    }
    j["predictions"] = vec_json(p.predictions);
    return j;
}

ordered_json fit_report(const PipelineConfig& cfg, const Dataset& data) {
    cfg.validate(false);
    ordered_json r = report_header(cfg);
    r["data"] = data_block(cfg, data);
    r["glm"] = glm_block(data, fit(data));
    return r;
}

ordered_json analyze(const PipelineConfig& cfg, const Dataset& data) {
    cfg.validate(true);
    const FitResult glm = fit(data);

    ordered_json r = report_header(cfg);
    r["data"] = data_block(cfg, data);
    r["glm"] = glm_block(data, glm);
    r["glm_prediction"] =
        to_json(in_sample_predictions(data.family, data.y, glm.mu_hat, std::nullopt, 1.0,
                                      prediction_options(cfg, cfg.horizon)));

    const MomentSums sums = empirical_moment_sums(data.y, glm.mu_hat);
    ordered_json models = ordered_json::array();
    for (std::size_t i = 0; i < cfg.kinds.size(); ++i) {
        const LatentKind kind = cfg.kinds[i];
        ordered_json m;
        m["kind"] = std::string(to_string(kind));
        MomEstimate est;
        try {
            est = estimate_latent(data.family.family, kind, sums);
        } catch (const UnsupportedError& e) {
            m["status"] = "invalid";
            m["reason"] = e.what();
            models.push_back(m);
            continue;
        }
        m["status"] = est.valid ? "ok" : "invalid";
        m["reason"] = est.reason;
        m["mom"] = to_json(est);
        if (!est.valid) {
            models.push_back(m);
            continue;
        }
        try {
            const LatentSpec latent = est.latent_spec();
            const double phi = est.dispersion();
            m["covariance"] = to_json(estimate_omegas(data, glm, latent, phi));
            if (cfg.bootstrap > 0) {
                const std::uint64_t bseed = stage_seed(*cfg.seed, kBootstrapStage + static_cast<std::uint64_t>(kind));
                m["bootstrap"] = to_json(parametric_bootstrap(data, glm, latent, phi, cfg.bootstrap, bseed));
            }
            m["prediction"] = to_json(
                in_sample_predictions(data.family, data.y, glm.mu_hat, latent, phi, prediction_options(cfg, cfg.horizon)));
        } catch (const std::exception& e) {
            m["status"] = "error";
            m["reason"] = e.what();
        }
        models.push_back(m);
    }
    r["models"] = models;
    return r;
}

ordered_json run_pipeline(const PipelineConfig& cfg) {
    cfg.validate(true);
    if (cfg.data_path.empty()) throw ConfigError("no data path given (--data)");
    const Dataset data = load_dataset(cfg.data_path, cfg);
    ordered_json report = analyze(cfg, data);
    if (!cfg.out_path.empty()) write_text_file(cfg.out_path, dump_json(report));
    return report;
}

ordered_json predict_from_report(const json& report, const Dataset& data, std::size_t horizon) {
    if (!report.contains("schema_version") || report.at("schema_version") != kReportSchemaVersion)
        throw ConfigError("not an lpglm report (schema_version mismatch)");
    const PipelineConfig cfg = config_from_json(report.at("config"));
    cfg.validate(false);
    const Eigen::VectorXd beta = json_vec(report.at("glm").at("beta_hat"));
    if (beta.size() != data.p()) throw ConfigError("report coefficients do not match the data design");
    const Eigen::VectorXd mu = fitted_means(data, beta);
    const PredictionOptions opts = prediction_options(cfg, horizon);

    ordered_json out;
    out["schema_version"] = kReportSchemaVersion;
    out["horizon"] = horizon;
    out["glm"] = to_json(in_sample_predictions(data.family, data.y, mu, std::nullopt, 1.0, opts));
    ordered_json models = ordered_json::array();
    if (report.contains("models")) {
        for (const auto& m : report.at("models")) {
            if (m.value("status", "") != "ok") continue;
            const json& mom = m.at("mom");
            json lj = {{"kind", mom.at("kind")}, {"sigma2", mom.at("sigma2")}, {"rho", mom.at("rho")}};
            const LatentSpec latent = latent_from_json(lj);
            const double phi = mom.at("phi").is_null() ? 1.0 : mom.at("phi").get<double>();
            ordered_json entry;
            entry["kind"] = mom.at("kind").get<std::string>();
            entry["prediction"] = to_json(in_sample_predictions(data.family, data.y, mu, latent, phi, opts));
            models.push_back(entry);
        }
    }
    out["models"] = models;
    return out;
}

ordered_json evaluation_json(const Eigen::VectorXd& predictions, const Eigen::VectorXd& observed) {
    const Evaluation ev = evaluate_predictions(predictions, observed);
    ordered_json j;
    j["n"] = predictions.size();
    j["rmse"] = ev.rmse;
    j["correlation"] = ev.correlation;
    return j;
}

}  // namespace lpglm
