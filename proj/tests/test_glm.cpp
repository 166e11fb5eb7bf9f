#include <gtest/gtest.h>

#include <cmath>

#include "lpglm/errors.hpp"
#include "lpglm/glm.hpp"
#include "lpglm/random.hpp"

using namespace lpglm;

namespace {

Eigen::MatrixXd trend_design(int n) {
    Eigen::MatrixXd X(n, 2);
    for (int t = 0; t < n; ++t) {
        X(t, 0) = 1.0;
        X(t, 1) = (t + 1.0) / n;
    }
    return X;
}

Dataset simulate_glm(const FamilySpec& fam, const Eigen::MatrixXd& X, const Eigen::VectorXd& beta, Rng& rng) {
    Dataset d{Eigen::VectorXd::Zero(X.rows()), X, fam};
    const Eigen::VectorXd mu = fitted_means(d, beta);
    for (Eigen::Index t = 0; t < X.rows(); ++t) d.y[t] = sample(fam, mu[t], rng);
    return d;
}

}  // namespace

TEST(PseudoLogLikelihood, PoissonZeroResponse) {
    const int n = 17;
    Dataset d{Eigen::VectorXd::Zero(n), Eigen::MatrixXd::Ones(n, 1), FamilySpec::poisson()};
    EXPECT_NEAR(pseudo_log_likelihood(d, Eigen::VectorXd::Zero(1)), -n, 1e-12);
}

TEST(PseudoLogLikelihood, GaussianIsLeastSquares) {
    Rng rng(3);
    std::normal_distribution<double> z;
    const int n = 30;
    Dataset d{Eigen::VectorXd(n), trend_design(n), FamilySpec::gaussian(1.0)};
    for (int t = 0; t < n; ++t) d.y[t] = z(rng);
    const Eigen::VectorXd b1 = Eigen::Vector2d(0.3, -1.0), b2 = Eigen::Vector2d(-0.2, 0.5);
    const double rss1 = (d.y - d.X * b1).squaredNorm(), rss2 = (d.y - d.X * b2).squaredNorm();
    EXPECT_NEAR(pseudo_log_likelihood(d, b1) - pseudo_log_likelihood(d, b2), -0.5 * (rss1 - rss2), 1e-10);
    EXPECT_NEAR(pseudo_log_likelihood(d, b1), -0.5 * rss1 - 0.5 * n * std::log(2.0 * M_PI), 1e-10);
}

TEST(PseudoLogLikelihood, DensitySumOracle) {
    Rng rng(4);
    const Dataset d = simulate_glm(FamilySpec::poisson(), trend_design(20), Eigen::Vector2d(0.5, 1.0), rng);
    const Eigen::VectorXd beta = Eigen::Vector2d(0.4, 0.9);
    double total = 0.0;
    for (int t = 0; t < 20; ++t) {
        const double mu = std::exp(d.X.row(t).dot(beta));
        total += d.y[t] * std::log(mu) - mu - std::lgamma(d.y[t] + 1.0);
    }
    EXPECT_NEAR(pseudo_log_likelihood(d, beta), total, 1e-10);
}

TEST(PseudoLogLikelihood, DomainViolationIsAnError) {
    Dataset d{Eigen::VectorXd::Ones(5), Eigen::MatrixXd::Ones(5, 1), FamilySpec::gamma(1.0)};
    EXPECT_THROW(pseudo_log_likelihood(d, Eigen::VectorXd::Constant(1, -0.5)), DomainError);
}

TEST(Fit, GaussianEqualsOls) {
    Rng rng(5);
    std::normal_distribution<double> z;
    const int n = 60;
    Eigen::MatrixXd X(n, 3);
    for (int t = 0; t < n; ++t) X.row(t) << 1.0, z(rng), z(rng);
    Dataset d{Eigen::VectorXd(n), X, FamilySpec::gaussian(1.0)};
    for (int t = 0; t < n; ++t) d.y[t] = 1.0 + 2.0 * X(t, 1) - X(t, 2) + z(rng);
    const Eigen::VectorXd ols = X.colPivHouseholderQr().solve(d.y);
    const FitResult r = fit(d);
    EXPECT_TRUE(r.converged);
    EXPECT_LT((r.beta_hat - ols).lpNorm<Eigen::Infinity>(), 1e-10);
}

TEST(Fit, PoissonConsistencyOverSeeds) {
    const int n = 200;
    const Eigen::Vector2d beta0(1.0, 0.5);
    const Eigen::MatrixXd X = trend_design(n);
    int successes = 0;
    for (int seed = 0; seed < 100; ++seed) {
        Rng rng = substream(2024, seed);
        const Dataset d = simulate_glm(FamilySpec::poisson(), X, beta0, rng);
        const FitResult r = fit(d);
        const Eigen::VectorXd w = r.mu_hat;
        const Eigen::MatrixXd info = X.transpose() * w.asDiagonal() * X;
        const Eigen::VectorXd se = info.inverse().diagonal().cwiseSqrt();
        successes += ((r.beta_hat - beta0).array().abs() < 4.0 * se.array()).all();
    }
    EXPECT_GE(successes, 95);
}

TEST(Fit, ScoreVanishesAndLikelihoodIncreases) {
    struct Case {
        FamilySpec fam;
        Eigen::Vector2d beta;
    };
    const Case cases[] = {{FamilySpec::poisson(), {1.0, 0.5}},
                          {FamilySpec::gamma(0.2), {0.5, 0.3}},
                          {FamilySpec::bernoulli(), {-0.3, 1.2}},
                          {FamilySpec::gaussian(2.0), {1.0, -1.0}}};
    for (const auto& c : cases) {
        Rng rng(77);
        const Dataset d = simulate_glm(c.fam, trend_design(300), c.beta, rng);
        const FitResult r = fit(d);
        EXPECT_TRUE(r.converged);
        EXPECT_LT(score(d, r.beta_hat).lpNorm<Eigen::Infinity>(), 1e-8) << to_string(c.fam.family);
        EXPECT_LT((d.X.transpose() * (d.y - r.mu_hat)).lpNorm<Eigen::Infinity>(), 1e-8);
        for (std::size_t i = 1; i < r.log_likelihood_trace.size(); ++i)
            EXPECT_GE(r.log_likelihood_trace[i], r.log_likelihood_trace[i - 1] - 1e-9);
        EXPECT_LE(r.max_score_norm, 1e-10 * (1.0 + std::abs(r.log_likelihood) / d.n()));
    }
}

TEST(Fit, GammaKeepsPositivePredictor) {
    Rng rng(8);
    const Dataset d = simulate_glm(FamilySpec::gamma(0.5), trend_design(200), Eigen::Vector2d(0.05, 0.02), rng);
    const FitResult r = fit(d);
    EXPECT_TRUE(r.converged);
    EXPECT_GT((d.X * r.beta_hat).minCoeff(), 0.0);
    EXPECT_GT(r.beta_hat[0], 0.0);
}

TEST(Fit, ColumnRescalingInvariance) {
    Rng rng(9);
    const Dataset d = simulate_glm(FamilySpec::poisson(), trend_design(250), Eigen::Vector2d(2.0, -0.7), rng);
    const Eigen::Vector2d D(3.5, 0.01);
    Dataset scaled = d;
    scaled.X = d.X * D.asDiagonal();
    const FitResult a = fit(d), b = fit(scaled);
    const Eigen::VectorXd back = b.beta_hat.cwiseProduct(D);
    EXPECT_LT(((back - a.beta_hat).array() / a.beta_hat.array()).abs().maxCoeff(), 1e-8);
}

TEST(Fit, WarmStartAndNonConvergence) {
    Rng rng(10);
    const Dataset d = simulate_glm(FamilySpec::poisson(), trend_design(100), Eigen::Vector2d(1.0, 0.5), rng);
    FitOptions o;
    o.init = Eigen::Vector2d(1.0, 0.5);
    EXPECT_TRUE(fit(d, o).converged);
    o.max_iter = 0;
    o.init = Eigen::Vector2d(-3.0, 2.0);
    try {
        fit(d, o);
        FAIL() << "expected GlmConvergenceError";
    } catch (const GlmConvergenceError& e) {
        EXPECT_FALSE(e.last_iterate().converged);
        EXPECT_EQ(e.last_iterate().beta_hat.size(), 2);
    }
}

TEST(DatasetValidation, Failures) {
    Eigen::MatrixXd X(4, 2);
    X << 1, 2, 1, 2, 1, 2, 1, 2;
    Dataset collinear{Eigen::Vector4d(1, 2, 3, 4), X, FamilySpec::poisson()};
    EXPECT_THROW(fit(collinear), LinAlgError);

    Dataset bad{Eigen::Vector4d(1, -2, 3, 0.5), Eigen::MatrixXd::Ones(4, 1), FamilySpec::poisson()};
    try {
        bad.validate();
        FAIL() << "expected DataError";
    } catch (const DataError& e) {
        const std::string msg = e.what();
        EXPECT_NE(msg.find("1, 3"), std::string::npos) << msg;
    }
    Dataset too_small{Eigen::Vector2d(1, 2), Eigen::MatrixXd::Ones(2, 2), FamilySpec::poisson()};
    EXPECT_THROW(too_small.validate(), DataError);
}
