#pragma once

#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "lpglm/ef_family.hpp"
#include "lpglm/errors.hpp"

namespace lpglm {

/// Observed series y_1..y_n with an n x p design.
struct Dataset {
    Eigen::VectorXd y;
    Eigen::MatrixXd X;
    FamilySpec family;

    Eigen::Index n() const { return y.size(); }
    Eigen::Index p() const { return X.cols(); }

    /// n > p >= 1, full column rank, every y_t in the support.
    void validate() const;
};

struct FitResult {
    Eigen::VectorXd beta_hat;
    Eigen::VectorXd mu_hat;
    int iterations = 0;
    bool converged = false;
    double max_score_norm = 0.0;
    double log_likelihood = 0.0;
    std::vector<double> log_likelihood_trace;  // one entry per accepted iterate
};

/// Thrown by fit() when max_iter is exhausted; carries the last iterate.
class GlmConvergenceError : public ConvergenceError {
  public:
    GlmConvergenceError(const std::string& what, FitResult last)
        : ConvergenceError(what, last.log_likelihood), last_(std::move(last)) {}
    const FitResult& last_iterate() const noexcept { return last_; }

  private:
    FitResult last_;
};

/// Canonical inverse link. Gamma uses h(eta) = 1/eta on eta > 0, i.e. theta = -eta.
double inverse_link(Family family, double eta);
bool in_predictor_domain(Family family, double eta);
Eigen::VectorXd fitted_means(const Dataset& data, const Eigen::VectorXd& beta);

/// l(beta) = sum_t log f(y_t; h(x_t' beta), phi), the likelihood that ignores nu_t.
double pseudo_log_likelihood(const Dataset& data, const Eigen::VectorXd& beta);

/// sum_t x_t (y_t - mu_t).
Eigen::VectorXd score(const Dataset& data, const Eigen::VectorXd& beta);

struct FitOptions {
    std::optional<Eigen::VectorXd> init;
    double tol = 1e-10;
    int max_iter = 100;
};

/// Newton / IRLS maximisation of the pseudo log-likelihood with step-halving.
FitResult fit(const Dataset& data, const FitOptions& options = {});

}  // namespace lpglm
