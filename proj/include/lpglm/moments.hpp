#pragma once

#include <optional>
#include <string>

#include <Eigen/Dense>

#include "lpglm/ef_family.hpp"
#include "lpglm/latent.hpp"

namespace lpglm {

/// Weighted residual sums shared by every moment estimator.
/// S_l = sum_{t>l} (y_t - mu_t)(y_{t-l} - mu_{t-l}), M_l = sum_{t>l} mu_t mu_{t-l}, P = sum mu_t.
struct MomentSums {
    double S0 = 0, S1 = 0, S2 = 0;
    double M0 = 0, M1 = 0, M2 = 0;
    double P = 0;
    long long n = 0;
};

MomentSums empirical_moment_sums(const Eigen::VectorXd& y, const Eigen::VectorXd& mu_hat);

/// Method-of-moments estimate of the latent parameters and dispersion.
/// Inadmissible values are reported with valid = false rather than thrown.
struct MomEstimate {
    LatentKind kind = LatentKind::LNAR;
    Family family = Family::Poisson;
    std::optional<double> sigma2;  // absent for ARCH
    double rho = 0.0;
    std::optional<double> phi;  // absent for Poisson
    bool valid = false;
    std::string reason;
    MomentSums sums;

    /// Latent spec for a valid estimate; DomainError otherwise.
    LatentSpec latent_spec() const;
    /// Dispersion to plug in (1 for Poisson).
    double dispersion() const { return phi.value_or(1.0); }
};

MomEstimate mom_poisson_lnar(const MomentSums& s);
MomEstimate mom_poisson_gar(const MomentSums& s);
MomEstimate mom_poisson_arch(const MomentSums& s);
MomEstimate mom_gamma_lnar(const MomentSums& s);
MomEstimate mom_gamma_gar(const MomentSums& s);

/// ARCH rho solving rho (kappa_2(rho) - 1) = r on (0, 1/sqrt(3)). NaN when r <= 0.
double arch_rho_from_lag1(double r);

/// Dispatch on (family, kind). UnsupportedError for combinations without an estimator.
MomEstimate estimate_latent(Family family, LatentKind kind, const MomentSums& s);

}  // namespace lpglm
