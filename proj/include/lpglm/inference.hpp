#pragma once

#include <cstdint>

#include <Eigen/Dense>

#include "lpglm/glm.hpp"
#include "lpglm/latent.hpp"
#include "lpglm/moments.hpp"

namespace lpglm {

/// Plug-in estimates of the information pieces and the resulting covariances of beta_hat.
struct CovarianceReport {
    Eigen::MatrixXd omega_I;
    Eigen::MatrixXd omega_I_dagger;
    Eigen::MatrixXd omega_II;
    Eigen::MatrixXd sandwich;  // n^-1 Omega_I^-1 (phi Omega_I^dagger + Omega_II) Omega_I^-1
    Eigen::MatrixXd naive;     // n^-1 phi Omega_I^-1
    Eigen::VectorXd se_naive;
    Eigen::VectorXd se_sandwich;
    std::size_t truncation_lag = 0;
    double phi = 1.0;
};

/// Autocorrelation cut-off for the Omega_II lag sum.
inline constexpr double kOmegaTruncationTol = 1e-8;

/// First lag L with |autocorrelation(L)| < tol (capped at n - 1).
std::size_t omega_truncation_lag(const LatentSpec& latent, std::size_t n, double tol = kOmegaTruncationTol);

/// Omega_II = n^-1 sum_t sum_k x_t x_k' mu_t mu_k gamma_nu(|t - k|), summed over |t - k| <= max_lag.
Eigen::MatrixXd omega_II(const Eigen::MatrixXd& X, const Eigen::VectorXd& mu, const LatentSpec& latent,
                         std::size_t max_lag);

CovarianceReport estimate_omegas(const Dataset& data, const FitResult& fit, const LatentSpec& latent, double phi,
                                 double truncation_tol = kOmegaTruncationTol);
/// Overload for a moment estimate; DomainError if the estimate is invalid.
CovarianceReport estimate_omegas(const Dataset& data, const FitResult& fit, const MomEstimate& latent_fit);

struct BootstrapReport {
    int replications = 0;
    Eigen::MatrixXd estimates;  // successful replications x p
    Eigen::VectorXd se_boot;
    Eigen::VectorXd mean_boot;
    int failed = 0;
    std::uint64_t seed = 0;

    /// Failure share reached 5%.
    bool degraded() const { return replications > 0 && failed * 20 >= replications; }
};

/// Parametric bootstrap: nu* from the fitted latent process, Y*_t ~ EF(mu_hat_t nu*_t, phi), refit.
/// Replication b uses substream(seed, b), so the report depends only on (inputs, B, seed).
BootstrapReport parametric_bootstrap(const Dataset& data, const FitResult& fit, const LatentSpec& latent, double phi,
                                     int replications, std::uint64_t seed, unsigned threads = 0);
BootstrapReport parametric_bootstrap(const Dataset& data, const FitResult& fit, const MomEstimate& latent_fit,
                                     int replications, std::uint64_t seed, unsigned threads = 0);

}  // namespace lpglm
