#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace lpglm {

/// cos(2 pi k t / period), sin(2 pi k t / period) pairs for each multiplier k.
struct HarmonicTerm {
    double period = 0.0;
    std::vector<int> multipliers{1};
};

/// Covariate layout: intercept, optional trend t / trend_scale, harmonic pairs, then
/// any explicit data columns (appended by the loader).
struct DesignSpec {
    bool include_trend = false;
    std::optional<double> trend_scale;  // defaults to n
    std::vector<HarmonicTerm> harmonics;
    std::vector<std::string> columns;

    void validate() const;
    std::vector<std::string> column_names() const;
};

/// Builds the n x p design for t = 1..n; ConfigError if the columns are collinear.
Eigen::MatrixXd build_design(std::size_t n, const DesignSpec& spec);

/// Appends explicit covariate columns and re-checks the rank.
Eigen::MatrixXd build_design(std::size_t n, const DesignSpec& spec, const std::vector<std::vector<double>>& extra);

}  // namespace lpglm
