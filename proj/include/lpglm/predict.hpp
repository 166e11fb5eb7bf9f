#pragma once

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "lpglm/ef_family.hpp"
#include "lpglm/latent.hpp"
#include "lpglm/specfun.hpp"

namespace lpglm {

enum class PredictionMethod { Baseline, ClosedForm, Quadrature, MonteCarlo };
std::string_view to_string(PredictionMethod m);

struct McEstimate {
    double value = 0.0;
    double std_error = 0.0;
};

/// m stationary draws of the squared ARCH(1) process (each the end of its own burned-in path).
std::vector<double> arch_stationary_draws(const LatentSpec& latent, std::size_t m, Rng& rng);

/// E(nu_t | Y_t = y) for GAR: gamma posterior (Poisson) or GIG posterior via a Bessel-K ratio (gamma).
double gar_posterior_mean(const FamilySpec& fam, const LatentSpec& latent, double y, double mu, double phi);

/// E(nu_t^power | Y_t = y) by quadrature against the stationary LNAR or GAR density.
double posterior_power_moment(const FamilySpec& fam, const LatentSpec& latent, double y, double mu, double phi,
                              double power, const QuadratureSettings& settings = {1e-10, 1e-300, 400});

/// Self-normalised Monte Carlo estimate of E(nu_t | Y_t = y) from stationary draws.
McEstimate monte_carlo_posterior_mean(const FamilySpec& fam, double y, double mu, double phi,
                                      const std::vector<double>& draws);

/// E(nu_t | Y_t = y). ARCH needs `arch_draws`.
double posterior_latent_mean(const FamilySpec& fam, const LatentSpec& latent, double y, double mu, double phi,
                             const std::vector<double>* arch_draws = nullptr);

/// E(Y_{t+l} | Y_t = y) given mu_t and mu_{t+l}.
double conditional_expectation(const FamilySpec& fam, const LatentSpec& latent, double y, double mu_t, double mu_tl,
                               std::size_t horizon, double phi, const std::vector<double>* arch_draws = nullptr);

struct Evaluation {
    double rmse = 0.0;
    double correlation = 0.0;
};
Evaluation evaluate_predictions(const Eigen::VectorXd& predictions, const Eigen::VectorXd& observed);

struct PredictionReport {
    std::size_t horizon = 1;
    Eigen::VectorXd predictions;
    double rmse = 0.0;
    double correlation = 0.0;
    PredictionMethod method = PredictionMethod::Baseline;
    std::size_t mc_draws = 0;
    double max_mc_rel_se = 0.0;  // Monte Carlo only
    bool mc_warning = false;     // some relative MC standard error exceeded 1%
};

struct PredictionOptions {
    std::size_t horizon = 1;
    std::size_t arch_draws = 10000;
    std::uint64_t seed = 0;
};

/// In-sample forecasts: Y_hat_t = E(Y_t | Y_{t-l}) for t > l, mu_hat_t otherwise.
/// Without a latent spec this is the plain GLM baseline Y_hat_t = mu_hat_t.
PredictionReport in_sample_predictions(const FamilySpec& fam, const Eigen::VectorXd& y, const Eigen::VectorXd& mu_hat,
                                       const std::optional<LatentSpec>& latent, double phi,
                                       const PredictionOptions& options = {});

}  // namespace lpglm
