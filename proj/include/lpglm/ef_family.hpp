#pragma once

#include <string>
#include <string_view>

#include "lpglm/random.hpp"

namespace lpglm {

enum class Family { Poisson, Gamma, Gaussian, Bernoulli };

std::string_view to_string(Family f);
Family family_from_string(std::string_view name);

/// A member of the bi-parameter exponential family EF(mu, phi) with canonical link.
/// Gamma uses shape 1/phi, so Var(Y) = phi * mu^2.
struct FamilySpec {
    Family family = Family::Poisson;
    double phi = 1.0;
    double gamma_power = 1.0;  // V(mu) = mu^gamma_power (Bernoulli excepted)

    static FamilySpec poisson();
    static FamilySpec gamma(double phi);
    static FamilySpec gaussian(double phi);
    static FamilySpec bernoulli();
    static FamilySpec make(Family f, double phi = 1.0);

    FamilySpec with_phi(double phi) const;
    void validate() const;
};

/// b(theta).
double cumulant(const FamilySpec& fam, double theta);
/// b'(theta).
double mean_from_theta(const FamilySpec& fam, double theta);
/// g(mu), the inverse of b'.
double theta_from_mean(const FamilySpec& fam, double mu);
/// b''(theta) expressed in mu: mu^gamma, or mu(1 - mu) for Bernoulli.
double variance_function(const FamilySpec& fam, double mu);

bool in_mean_domain(const FamilySpec& fam, double mu);
bool in_support(const FamilySpec& fam, double y);

/// Exact log density / log pmf including c(y; phi).
double log_density(const FamilySpec& fam, double y, double mu, double phi);
inline double log_density(const FamilySpec& fam, double y, double mu) {
    return log_density(fam, y, mu, fam.phi);
}

double sample(const FamilySpec& fam, double mu, double phi, Rng& rng);
inline double sample(const FamilySpec& fam, double mu, Rng& rng) { return sample(fam, mu, fam.phi, rng); }

}  // namespace lpglm
