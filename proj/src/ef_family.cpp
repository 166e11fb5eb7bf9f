#include "lpglm/ef_family.hpp"

#include <cmath>
#include <numbers>

#include "lpglm/errors.hpp"

namespace lpglm {

std::string_view to_string(Family f) {
    switch (f) {
        case Family::Poisson: return "poisson";
        case Family::Gamma: return "gamma";
        case Family::Gaussian: return "gaussian";
        case Family::Bernoulli: return "bernoulli";
    }
    return "unknown";
}

Family family_from_string(std::string_view name) {
    if (name == "poisson") return Family::Poisson;
    if (name == "gamma") return Family::Gamma;
    if (name == "gaussian") return Family::Gaussian;
    if (name == "bernoulli") return Family::Bernoulli;
    throw ConfigError("unknown family '" + std::string(name) + "'");
}

FamilySpec FamilySpec::poisson() { return {Family::Poisson, 1.0, 1.0}; }
FamilySpec FamilySpec::bernoulli() { return {Family::Bernoulli, 1.0, 1.0}; }

FamilySpec FamilySpec::gamma(double phi) {
    FamilySpec f{Family::Gamma, phi, 2.0};
    f.validate();
    return f;
}

FamilySpec FamilySpec::gaussian(double phi) {
    FamilySpec f{Family::Gaussian, phi, 0.0};
    f.validate();
    return f;
}

FamilySpec FamilySpec::make(Family f, double phi) {
    switch (f) {
        case Family::Poisson: return poisson();
        case Family::Bernoulli: return bernoulli();
        case Family::Gamma: return gamma(phi);
        case Family::Gaussian: return gaussian(phi);
    }
    throw DomainError("unknown family");
}

FamilySpec FamilySpec::with_phi(double new_phi) const { return make(family, new_phi); }

void FamilySpec::validate() const {
    if (!(phi > 0.0) || !std::isfinite(phi)) throw DomainError("dispersion phi must be positive");
    switch (family) {
        case Family::Poisson:
            if (phi != 1.0 || gamma_power != 1.0) throw DomainError("Poisson requires phi = 1, gamma = 1");
            break;
        case Family::Bernoulli:
            if (phi != 1.0) throw DomainError("Bernoulli requires phi = 1");
            break;
        case Family::Gamma:
            if (gamma_power != 2.0) throw DomainError("gamma family requires variance power 2");
            break;
        case Family::Gaussian:
            if (gamma_power != 0.0) throw DomainError("Gaussian family requires variance power 0");
            break;
    }
}

double cumulant(const FamilySpec& fam, double theta) {
    switch (fam.family) {
        case Family::Poisson: return std::exp(theta);
        case Family::Gamma:
            if (!(theta < 0.0)) throw DomainError("gamma cumulant requires theta < 0");
            return -std::log(-theta);
        case Family::Gaussian: return 0.5 * theta * theta;
        case Family::Bernoulli:
            // log(1 + e^theta) without overflow
            return theta > 0.0 ? theta + std::log1p(std::exp(-theta)) : std::log1p(std::exp(theta));
    }
    throw DomainError("unknown family");
}

double mean_from_theta(const FamilySpec& fam, double theta) {
    switch (fam.family) {
        case Family::Poisson: return std::exp(theta);
        case Family::Gamma:
            if (!(theta < 0.0)) throw DomainError("gamma mean requires theta < 0");
            return -1.0 / theta;
        case Family::Gaussian: return theta;
        case Family::Bernoulli:
            return theta >= 0.0 ? 1.0 / (1.0 + std::exp(-theta)) : std::exp(theta) / (1.0 + std::exp(theta));
    }
    throw DomainError("unknown family");
}

bool in_mean_domain(const FamilySpec& fam, double mu) {
    switch (fam.family) {
        case Family::Poisson:
        case Family::Gamma: return mu > 0.0 && std::isfinite(mu);
        case Family::Gaussian: return std::isfinite(mu);
        case Family::Bernoulli: return mu > 0.0 && mu < 1.0;
    }
    return false;
}

bool in_support(const FamilySpec& fam, double y) {
    switch (fam.family) {
        case Family::Poisson: return y >= 0.0 && std::isfinite(y) && y == std::floor(y);
        case Family::Gamma: return y > 0.0 && std::isfinite(y);
        case Family::Gaussian: return std::isfinite(y);
        case Family::Bernoulli: return y == 0.0 || y == 1.0;
    }
    return false;
}

namespace {
void require_mean(const FamilySpec& fam, double mu) {
    if (!in_mean_domain(fam, mu))
        throw DomainError("mean " + std::to_string(mu) + " outside the " + std::string(to_string(fam.family)) +
                          " mean domain");
}
}  // namespace

double theta_from_mean(const FamilySpec& fam, double mu) {
    require_mean(fam, mu);
    switch (fam.family) {
        case Family::Poisson: return std::log(mu);
        case Family::Gamma: return -1.0 / mu;
        case Family::Gaussian: return mu;
        case Family::Bernoulli: return std::log(mu) - std::log1p(-mu);
    }
    throw DomainError("unknown family");
}

double variance_function(const FamilySpec& fam, double mu) {
    require_mean(fam, mu);
    switch (fam.family) {
        case Family::Poisson: return mu;
        case Family::Gamma: return mu * mu;
        case Family::Gaussian: return 1.0;
        case Family::Bernoulli: return mu * (1.0 - mu);
    }
    throw DomainError("unknown family");
}

double log_density(const FamilySpec& fam, double y, double mu, double phi) {
    if (!in_support(fam, y))
        throw DomainError("observation " + std::to_string(y) + " outside the " +
                          std::string(to_string(fam.family)) + " support");
    require_mean(fam, mu);
    if (!(phi > 0.0)) throw DomainError("dispersion phi must be positive");
    switch (fam.family) {
        case Family::Poisson: return y * std::log(mu) - mu - std::lgamma(y + 1.0);
        case Family::Gamma: {
            const double k = 1.0 / phi;
            return k * std::log(k / mu) + (k - 1.0) * std::log(y) - k * y / mu - std::lgamma(k);
        }
        case Family::Gaussian: {
            const double r = y - mu;
            return -0.5 * r * r / phi - 0.5 * std::log(2.0 * std::numbers::pi * phi);
        }
        case Family::Bernoulli: return y == 1.0 ? std::log(mu) : std::log1p(-mu);
    }
    throw DomainError("unknown family");
}

double sample(const FamilySpec& fam, double mu, double phi, Rng& rng) {
    require_mean(fam, mu);
    if (!(phi > 0.0)) throw DomainError("dispersion phi must be positive");
    switch (fam.family) {
        case Family::Poisson: {
            std::poisson_distribution<long long> d(mu);
            return static_cast<double>(d(rng));
        }
        case Family::Gamma: {
            std::gamma_distribution<double> d(1.0 / phi, phi * mu);
            return d(rng);
        }
        case Family::Gaussian: {
            std::normal_distribution<double> d(mu, std::sqrt(phi));
            return d(rng);
        }
        case Family::Bernoulli: {
            std::bernoulli_distribution d(mu);
            return d(rng) ? 1.0 : 0.0;
        }
    }
    throw DomainError("unknown family");
}

}  // namespace lpglm
