#include <gtest/gtest.h>

#include <cmath>

#include "lpglm/ef_family.hpp"
#include "lpglm/errors.hpp"
#include "lpglm/random.hpp"
#include "lpglm/specfun.hpp"

using namespace lpglm;

TEST(Cumulant, Values) {
    EXPECT_DOUBLE_EQ(cumulant(FamilySpec::poisson(), 0.0), 1.0);
    EXPECT_DOUBLE_EQ(cumulant(FamilySpec::gamma(1.0), -1.0), 0.0);
    EXPECT_DOUBLE_EQ(cumulant(FamilySpec::gaussian(1.0), 2.0), 2.0);
    EXPECT_NEAR(cumulant(FamilySpec::bernoulli(), 0.0), std::log(2.0), 1e-15);
    EXPECT_THROW(cumulant(FamilySpec::gamma(1.0), 0.0), DomainError);
    EXPECT_THROW(cumulant(FamilySpec::gamma(1.0), 0.5), DomainError);
}

TEST(Cumulant, FirstDerivativeByFiniteDifference) {
    const auto fam = FamilySpec::poisson();
    const double h = 1e-5, th = 0.7;
    const double fd = (cumulant(fam, th + h) - cumulant(fam, th - h)) / (2.0 * h);
    EXPECT_NEAR(fd, mean_from_theta(fam, th), 1e-6);
    EXPECT_NEAR(mean_from_theta(fam, th), std::exp(0.7), 1e-15);
}

TEST(Cumulant, SecondDerivativeMatchesVarianceFunction) {
    struct Case {
        FamilySpec fam;
        double lo, hi;
    };
    const Case cases[] = {{FamilySpec::poisson(), -2.0, 2.0},
                          {FamilySpec::gamma(1.0), -3.0, -0.3},
                          {FamilySpec::gaussian(1.0), -5.0, 5.0},
                          {FamilySpec::bernoulli(), -4.0, 4.0}};
    const double h = 1e-4;
    for (const auto& c : cases) {
        for (int i = 0; i < 50; ++i) {
            const double th = c.lo + (c.hi - c.lo) * (i + 0.5) / 50.0;
            const double fd = (cumulant(c.fam, th + h) - 2.0 * cumulant(c.fam, th) + cumulant(c.fam, th - h)) / (h * h);
            EXPECT_NEAR(fd, variance_function(c.fam, mean_from_theta(c.fam, th)), 1e-5)
                << to_string(c.fam.family) << " theta=" << th;
        }
    }
}

TEST(CanonicalMap, ValuesAndRoundTrip) {
    EXPECT_DOUBLE_EQ(theta_from_mean(FamilySpec::gamma(1.0), 2.0), -0.5);
    EXPECT_DOUBLE_EQ(theta_from_mean(FamilySpec::poisson(), 1.0), 0.0);
    EXPECT_DOUBLE_EQ(theta_from_mean(FamilySpec::bernoulli(), 0.5), 0.0);
    const FamilySpec fams[] = {FamilySpec::poisson(), FamilySpec::gamma(0.3), FamilySpec::gaussian(2.0)};
    for (const auto& f : fams) {
        for (double mu : {0.01, 0.5, 1.0, 3.7, 250.0}) {
            const double back = mean_from_theta(f, theta_from_mean(f, mu));
            EXPECT_LE(std::abs(back - mu), 1e-12 * mu);
        }
    }
    for (double mu : {0.01, 0.2, 0.5, 0.93}) {
        const auto f = FamilySpec::bernoulli();
        EXPECT_LE(std::abs(mean_from_theta(f, theta_from_mean(f, mu)) - mu), 1e-12 * mu);
    }
    EXPECT_THROW(theta_from_mean(FamilySpec::poisson(), 0.0), DomainError);
    EXPECT_THROW(theta_from_mean(FamilySpec::bernoulli(), 1.0), DomainError);
}

TEST(VarianceFunction, Values) {
    EXPECT_DOUBLE_EQ(variance_function(FamilySpec::gaussian(1.0), 7.3), 1.0);
    EXPECT_DOUBLE_EQ(variance_function(FamilySpec::poisson(), 4.0), 4.0);
    EXPECT_DOUBLE_EQ(variance_function(FamilySpec::gamma(1.0), 3.0), 9.0);
    EXPECT_DOUBLE_EQ(variance_function(FamilySpec::bernoulli(), 0.25), 0.1875);
}

TEST(FamilySpecInvariants, Enforced) {
    FamilySpec bad = FamilySpec::poisson();
    bad.phi = 2.0;
    EXPECT_THROW(bad.validate(), DomainError);
    EXPECT_THROW(FamilySpec::gamma(0.0), DomainError);
    EXPECT_THROW(FamilySpec::gaussian(-1.0), DomainError);
    EXPECT_EQ(FamilySpec::gamma(1.0).gamma_power, 2.0);
    EXPECT_EQ(FamilySpec::gaussian(1.0).gamma_power, 0.0);
    EXPECT_EQ(family_from_string("gamma"), Family::Gamma);
    EXPECT_THROW(family_from_string("weibull"), ConfigError);
}

TEST(LogDensity, Values) {
    EXPECT_NEAR(log_density(FamilySpec::poisson(), 0.0, 1.0, 1.0), -1.0, 1e-15);
    EXPECT_NEAR(log_density(FamilySpec::gamma(1.0), 2.0, 2.0, 1.0), -std::log(2.0) - 1.0, 1e-14);
    // 2.5^3 e^-2.5 / 3!
    const double direct = std::log(std::pow(2.5, 3) * std::exp(-2.5) / 6.0);
    EXPECT_NEAR(log_density(FamilySpec::poisson(), 3.0, 2.5, 1.0), direct, 1e-12);
    EXPECT_NEAR(log_density(FamilySpec::gaussian(2.0), 1.0, 0.0, 2.0), -0.25 - 0.5 * std::log(4.0 * M_PI), 1e-14);
    EXPECT_NEAR(log_density(FamilySpec::bernoulli(), 1.0, 0.3, 1.0), std::log(0.3), 1e-15);
    EXPECT_THROW(log_density(FamilySpec::poisson(), 1.5, 2.0, 1.0), DomainError);
    EXPECT_THROW(log_density(FamilySpec::poisson(), -1.0, 2.0, 1.0), DomainError);
    EXPECT_THROW(log_density(FamilySpec::gamma(1.0), 0.0, 2.0, 1.0), DomainError);
    EXPECT_THROW(log_density(FamilySpec::bernoulli(), 0.5, 0.3, 1.0), DomainError);
}

TEST(LogDensity, PoissonMassSumsToOne) {
    for (double mu : {0.1, 1.0, 5.0, 12.5, 20.0}) {
        double total = 0.0;
        for (int y = 0; y <= 200; ++y) total += std::exp(log_density(FamilySpec::poisson(), y, mu, 1.0));
        EXPECT_NEAR(total, 1.0, 1e-10) << "mu=" << mu;
    }
}

TEST(LogDensity, GammaIntegratesToOne) {
    for (double phi : {0.12, 0.5, 1.0, 2.0}) {
        for (double mu : {0.3, 2.0, 40.0}) {
            const auto fam = FamilySpec::gamma(phi);
            const double total =
                integrate_positive_halfline([&](double y) { return std::exp(log_density(fam, y, mu, phi)); }).value;
            EXPECT_NEAR(total, 1.0, 1e-8) << "phi=" << phi << " mu=" << mu;
        }
    }
}

namespace {

struct Summary {
    double mean, var;
};

Summary draw_summary(const FamilySpec& fam, double mu, double phi, int n, std::uint64_t seed) {
    Rng rng(seed);
    double s = 0.0, s2 = 0.0;
    for (int i = 0; i < n; ++i) {
        const double y = sample(fam, mu, phi, rng);
        s += y;
        s2 += y * y;
    }
    const double m = s / n;
    return {m, (s2 - n * m * m) / (n - 1)};
}

}  // namespace

TEST(Sample, PoissonMean) {
    const int n = 1000000;
    const Summary s = draw_summary(FamilySpec::poisson(), 3.0, 1.0, n, 11);
    EXPECT_NEAR(s.mean, 3.0, 5.0 * std::sqrt(3.0 / n));
}

TEST(Sample, GammaVariance) {
    const int n = 1000000;
    const double mu = 2.0, phi = 0.5, var = phi * mu * mu;
    const Summary s = draw_summary(FamilySpec::gamma(phi), mu, phi, n, 12);
    // Var of the sample variance uses the fourth central moment of a gamma: shape k, scale th.
    const double k = 1.0 / phi, th = phi * mu;
    const double m4 = 3.0 * k * (k + 2.0) * std::pow(th, 4);
    const double se_var = std::sqrt((m4 - var * var) / n);
    EXPECT_NEAR(s.var, 2.0, 5.0 * se_var);
    EXPECT_NEAR(s.mean, mu, 5.0 * std::sqrt(var / n));
}

TEST(Sample, GaussianAndBernoulliMoments) {
    const int n = 1000000;
    const Summary g = draw_summary(FamilySpec::gaussian(2.0), -1.0, 2.0, n, 13);
    EXPECT_NEAR(g.mean, -1.0, 5.0 * std::sqrt(2.0 / n));
    EXPECT_NEAR(g.var, 2.0, 5.0 * std::sqrt(2.0 * 4.0 / n));
    const Summary b = draw_summary(FamilySpec::bernoulli(), 0.3, 1.0, n, 14);
    EXPECT_NEAR(b.mean, 0.3, 5.0 * std::sqrt(0.21 / n));
}

TEST(Sample, BoundaryMeanRejected) {
    Rng rng(1);
    EXPECT_THROW(sample(FamilySpec::bernoulli(), 1.0, 1.0, rng), DomainError);
    EXPECT_THROW(sample(FamilySpec::poisson(), -0.1, 1.0, rng), DomainError);
}
