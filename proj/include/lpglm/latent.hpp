#pragma once

#include <cstddef>
#include <string_view>
#include <vector>

#include "lpglm/random.hpp"

namespace lpglm {

enum class LatentKind { LNAR, GAR, ARCH };

std::string_view to_string(LatentKind k);
LatentKind latent_kind_from_string(std::string_view name);

/// Stationary latent process with E(nu_t) = 1.
///
///  - LNAR: nu_t = exp(Z_t), Z_t Gaussian AR(1) with N(-sigma2/2, sigma2) marginals, rho in (-1, 1).
///  - GAR:  gamma AR(1) with Gamma(1/sigma2, rate 1/sigma2) marginals, rho in (0, 1).
///  - ARCH: nu_t = Z_t^2, Z_t ARCH(1) with omega = 1 - rho, rho in (0, 1/sqrt(3)).
///
/// sigma2 = 0 is accepted as the degenerate limit nu_t = 1.
struct LatentSpec {
    LatentKind kind = LatentKind::LNAR;
    double sigma2 = 0.0;  // unused for ARCH
    double rho = 0.0;

    static LatentSpec lnar(double sigma2, double rho);
    static LatentSpec gar(double sigma2, double rho);
    static LatentSpec arch(double rho);

    void validate() const;
    bool degenerate() const { return kind != LatentKind::ARCH && sigma2 == 0.0; }
};

/// Burn-in used to reach stationarity for ARCH paths started at nu_0 = 1.
inline constexpr std::size_t kArchBurnIn = 1000;

std::vector<double> simulate(const LatentSpec& spec, std::size_t n, Rng& rng);

/// One GAR transition: Poisson(rho nu / c) mixture of Gamma(1/sigma2 + N, scale c), c = sigma2 (1 - rho).
double gar_transition(const LatentSpec& spec, double nu_prev, Rng& rng);

/// Transition density f(nu_t | nu_{t-1}) of the gamma AR(1), written with Bessel I.
double gar_transition_log_density(const LatentSpec& spec, double nu, double nu_prev);

/// kappa_j = E(nu_t^j).
double moment(const LatentSpec& spec, double j);
double variance(const LatentSpec& spec);
double autocorrelation(const LatentSpec& spec, std::size_t lag);
double autocovariance(const LatentSpec& spec, std::size_t lag);

/// E(nu_{t+l} | nu_t).
double conditional_mean(const LatentSpec& spec, double nu_t, std::size_t horizon);

/// Log of the stationary marginal density. UnsupportedError for ARCH.
double stationary_log_density(const LatentSpec& spec, double nu);

}  // namespace lpglm
