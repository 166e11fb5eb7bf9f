#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "lpglm/design.hpp"
#include "lpglm/ef_family.hpp"
#include "lpglm/glm.hpp"
#include "lpglm/inference.hpp"
#include "lpglm/io.hpp"
#include "lpglm/latent.hpp"
#include "lpglm/moments.hpp"
#include "lpglm/predict.hpp"

namespace lpglm {

inline constexpr const char* kReportSchemaVersion = "lpglm-report/1";

/// Fully specified generating model for the `simulate` subcommand.
struct SimulationSpec {
    std::size_t n = 0;
    std::vector<double> beta;
    LatentSpec latent;
    double phi = 1.0;
};

struct PipelineConfig {
    std::string data_path;
    std::string out_path;
    std::string response = "y";
    Family family = Family::Poisson;
    std::vector<LatentKind> kinds;
    DesignSpec design;
    int bootstrap = 0;
    std::size_t horizon = 1;
    std::optional<std::uint64_t> seed;
    std::size_t arch_draws = 10000;
    std::optional<SimulationSpec> simulation;

    /// ConfigError on: missing seed, no latent kinds (when `need_kinds`), bad design or horizon.
    void validate(bool need_kinds = true) const;
};

PipelineConfig config_from_json(const nlohmann::json& j);
ordered_json config_to_json(const PipelineConfig& cfg);

/// Reads the CSV named by `path`, builds the configured design and validates the support.
Dataset load_dataset(const std::string& path, const PipelineConfig& cfg);
Dataset dataset_from_table(const CsvTable& table, const PipelineConfig& cfg);

struct SimulatedSeries {
    Eigen::VectorXd y;
    Eigen::VectorXd mu;
    std::vector<double> nu;
};
SimulatedSeries simulate_series(const PipelineConfig& cfg);

ordered_json to_json(const FitResult& fit);
ordered_json to_json(const MomEstimate& est);
ordered_json to_json(const CovarianceReport& cov);
ordered_json to_json(const BootstrapReport& boot);
ordered_json to_json(const PredictionReport& pred);

/// GLM-only report.
ordered_json fit_report(const PipelineConfig& cfg, const Dataset& data);
/// fit -> per-kind moments -> sandwich + bootstrap -> in-sample prediction.
/// Per-kind failures are recorded in the report; a failed GLM fit throws.
ordered_json analyze(const PipelineConfig& cfg, const Dataset& data);
/// Loads data, runs analyze, writes the report to cfg.out_path (if set) and returns it.
ordered_json run_pipeline(const PipelineConfig& cfg);

/// Predictions at `horizon` from a saved analyze report and the data it was fitted on.
ordered_json predict_from_report(const nlohmann::json& report, const Dataset& data, std::size_t horizon);

ordered_json evaluation_json(const Eigen::VectorXd& predictions, const Eigen::VectorXd& observed);

}  // namespace lpglm
