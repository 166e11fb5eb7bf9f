#include "lpglm/latent.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "lpglm/errors.hpp"
#include "lpglm/specfun.hpp"

namespace lpglm {

std::string_view to_string(LatentKind k) {
    switch (k) {
        case LatentKind::LNAR: return "lnar";
        case LatentKind::GAR: return "gar";
        case LatentKind::ARCH: return "arch";
    }
    return "unknown";
}

LatentKind latent_kind_from_string(std::string_view name) {
    if (name == "lnar") return LatentKind::LNAR;
    if (name == "gar") return LatentKind::GAR;
    if (name == "arch") return LatentKind::ARCH;
    throw ConfigError("unknown latent kind '" + std::string(name) + "'");
}

LatentSpec LatentSpec::lnar(double sigma2, double rho) {
    LatentSpec s{LatentKind::LNAR, sigma2, rho};
    s.validate();
    return s;
}

LatentSpec LatentSpec::gar(double sigma2, double rho) {
    LatentSpec s{LatentKind::GAR, sigma2, rho};
    s.validate();
    return s;
}

LatentSpec LatentSpec::arch(double rho) {
    LatentSpec s{LatentKind::ARCH, 0.0, rho};
    s.validate();
    return s;
}

void LatentSpec::validate() const {
    switch (kind) {
        case LatentKind::LNAR:
            if (!(sigma2 >= 0.0) || !std::isfinite(sigma2)) throw DomainError("LNAR requires sigma2 >= 0");
            if (!(rho > -1.0 && rho < 1.0)) throw DomainError("LNAR requires rho in (-1, 1)");
            break;
        case LatentKind::GAR:
            if (!(sigma2 >= 0.0) || !std::isfinite(sigma2)) throw DomainError("GAR requires sigma2 >= 0");
            if (!(rho > 0.0 && rho < 1.0)) throw DomainError("GAR requires rho in (0, 1)");
            break;
        case LatentKind::ARCH:
            if (!(rho > 0.0 && rho < 1.0 / std::sqrt(3.0)))
                throw DomainError("ARCH requires rho in (0, 1/sqrt(3))");
            break;
    }
}

double gar_transition(const LatentSpec& spec, double nu_prev, Rng& rng) {
    const double c = spec.sigma2 * (1.0 - spec.rho);
    std::poisson_distribution<long long> pois(spec.rho * nu_prev / c);
    const auto count = pois(rng);
    std::gamma_distribution<double> g(1.0 / spec.sigma2 + static_cast<double>(count), c);
    return g(rng);
}

std::vector<double> simulate(const LatentSpec& spec, std::size_t n, Rng& rng) {
    spec.validate();
    if (n == 0) throw DomainError("simulate: n must be >= 1");
    std::vector<double> nu(n, 1.0);
    if (spec.degenerate()) return nu;
    std::normal_distribution<double> stdnorm(0.0, 1.0);

    switch (spec.kind) {
        case LatentKind::LNAR: {
            const double s2 = spec.sigma2, rho = spec.rho;
            const double intercept = -0.5 * s2 * (1.0 - rho);
            const double innov_sd = std::sqrt(s2 * (1.0 - rho * rho));
            double z = -0.5 * s2 + std::sqrt(s2) * stdnorm(rng);
            nu[0] = std::exp(z);
            for (std::size_t t = 1; t < n; ++t) {
                z = intercept + rho * z + innov_sd * stdnorm(rng);
                nu[t] = std::exp(z);
            }
            break;
        }
        case LatentKind::GAR: {
            std::gamma_distribution<double> marginal(1.0 / spec.sigma2, spec.sigma2);
            nu[0] = marginal(rng);
            for (std::size_t t = 1; t < n; ++t) nu[t] = gar_transition(spec, nu[t - 1], rng);
            break;
        }
        case LatentKind::ARCH: {
            const double omega = 1.0 - spec.rho;
            double z2 = 1.0;
            for (std::size_t t = 0; t < kArchBurnIn + n; ++t) {
                const double e = stdnorm(rng);
                z2 = (omega + spec.rho * z2) * e * e;
                if (t >= kArchBurnIn) nu[t - kArchBurnIn] = z2;
            }
            break;
        }
    }
    return nu;
}

double gar_transition_log_density(const LatentSpec& spec, double nu, double nu_prev) {
    spec.validate();
    if (spec.kind != LatentKind::GAR) throw DomainError("gar_transition_log_density: GAR spec required");
    if (!(nu > 0.0) || !(nu_prev > 0.0)) throw DomainError("GAR transition density requires positive states");
    const double k = 1.0 / spec.sigma2;
    const double c = spec.sigma2 * (1.0 - spec.rho);
    const double rnp = spec.rho * nu_prev;
    return -std::log(c) + 0.5 * (k - 1.0) * std::log(nu / rnp) - (nu + rnp) / c +
           log_bessel_i(k - 1.0, 2.0 * std::sqrt(rnp * nu) / c);
}

double moment(const LatentSpec& spec, double j) {
    spec.validate();
    if (!(j >= 0.0)) throw DomainError("moment order must be nonnegative");
    if (j == 0.0 || j == 1.0 || spec.degenerate()) return 1.0;
    switch (spec.kind) {
        case LatentKind::LNAR: return std::exp(0.5 * spec.sigma2 * j * (j - 1.0));
        case LatentKind::GAR: {
            const double k = 1.0 / spec.sigma2;
            return std::exp(std::lgamma(k + j) - std::lgamma(k) + j * std::log(spec.sigma2));
        }
        case LatentKind::ARCH:
            if (j == 2.0) {
                const double r2 = spec.rho * spec.rho;
                return 3.0 * (1.0 - r2) / (1.0 - 3.0 * r2);
            }
            throw DomainError("ARCH moment available only for orders 0, 1, 2");
    }
    throw DomainError("unknown latent kind");
}

double variance(const LatentSpec& spec) {
    if (spec.kind == LatentKind::LNAR) {
        spec.validate();
        return std::expm1(spec.sigma2);
    }
    return moment(spec, 2.0) - 1.0;
}

double autocorrelation(const LatentSpec& spec, std::size_t lag) {
    spec.validate();
    if (lag == 0) return 1.0;
    const double rl = std::pow(spec.rho, static_cast<double>(lag));
    if (spec.kind == LatentKind::LNAR && spec.sigma2 > 0.0)
        return std::expm1(spec.sigma2 * rl) / std::expm1(spec.sigma2);
    return rl;
}

double autocovariance(const LatentSpec& spec, std::size_t lag) {
    if (spec.kind == LatentKind::LNAR) {
        spec.validate();
        if (lag == 0) return std::expm1(spec.sigma2);
        return std::expm1(spec.sigma2 * std::pow(spec.rho, static_cast<double>(lag)));
    }
    return autocorrelation(spec, lag) * variance(spec);
}

double conditional_mean(const LatentSpec& spec, double nu_t, std::size_t horizon) {
    spec.validate();
    if (!(nu_t > 0.0)) throw DomainError("conditional_mean requires nu_t > 0");
    if (horizon == 0) throw DomainError("conditional_mean requires horizon >= 1");
    const double rl = std::pow(spec.rho, static_cast<double>(horizon));
    if (spec.kind == LatentKind::LNAR)
        return std::exp(0.5 * rl * spec.sigma2 * (1.0 - rl) + rl * std::log(nu_t));
    return 1.0 + rl * (nu_t - 1.0);
}

double stationary_log_density(const LatentSpec& spec, double nu) {
    spec.validate();
    if (!(nu > 0.0)) throw DomainError("stationary density requires nu > 0");
    if (spec.kind == LatentKind::ARCH)
        throw UnsupportedError("stationary density of the squared ARCH(1) process has no closed form");
    if (spec.degenerate()) throw DomainError("degenerate latent process has no density");
    const double s2 = spec.sigma2;
    const double lnu = std::log(nu);
    if (spec.kind == LatentKind::LNAR) {
        const double d = lnu + 0.5 * s2;
        return -lnu - 0.5 * std::log(2.0 * std::numbers::pi * s2) - d * d / (2.0 * s2);
    }
    const double k = 1.0 / s2;
    return k * std::log(k) + (k - 1.0) * lnu - k * nu - std::lgamma(k);
}

}  // namespace lpglm
