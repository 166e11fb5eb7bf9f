#include "lpglm/inference.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <optional>
#include <thread>
#include <vector>

#include "lpglm/errors.hpp"

namespace lpglm {

namespace {

// E[V(mu nu)] under the latent law.
double expected_variance_function(const FamilySpec& fam, const LatentSpec& latent, double mu) {
    switch (fam.family) {
        case Family::Bernoulli: return mu - mu * mu * moment(latent, 2.0);
        case Family::Gaussian: return 1.0;
        case Family::Poisson: return mu;  // kappa_1 = 1
        case Family::Gamma: return mu * mu * moment(latent, 2.0);
    }
    throw DomainError("unknown family");
}

Eigen::MatrixXd weighted_gram(const Eigen::MatrixXd& X, const Eigen::VectorXd& w) {
    return X.transpose() * (X.array().colwise() * w.array()).matrix();
}

Eigen::MatrixXd symmetrize(const Eigen::MatrixXd& m) { return 0.5 * (m + m.transpose()); }

}  // namespace

std::size_t omega_truncation_lag(const LatentSpec& latent, std::size_t n, double tol) {
    if (n <= 1 || latent.degenerate()) return 0;
    std::size_t lag = 1;
    while (lag < n - 1 && std::abs(autocorrelation(latent, lag)) >= tol) ++lag;
    return lag;
}

Eigen::MatrixXd omega_II(const Eigen::MatrixXd& X, const Eigen::VectorXd& mu, const LatentSpec& latent,
                         std::size_t max_lag) {
    const Eigen::Index n = X.rows();
    const Eigen::MatrixXd A = X.array().colwise() * mu.array();
    Eigen::MatrixXd out = Eigen::MatrixXd::Zero(X.cols(), X.cols());
    if (latent.degenerate()) return out;
    out += autocovariance(latent, 0) * (A.transpose() * A);
    const Eigen::Index L = std::min<Eigen::Index>(static_cast<Eigen::Index>(max_lag), n - 1);
    for (Eigen::Index l = 1; l <= L; ++l) {
        const double g = autocovariance(latent, static_cast<std::size_t>(l));
        if (g == 0.0) continue;
        const Eigen::MatrixXd cross = A.bottomRows(n - l).transpose() * A.topRows(n - l);
        out += g * (cross + cross.transpose());
    }
    return symmetrize(out / static_cast<double>(n));
}

CovarianceReport estimate_omegas(const Dataset& data, const FitResult& fit, const LatentSpec& latent, double phi,
                                 double truncation_tol) {
    latent.validate();
    if (!(phi > 0.0)) throw DomainError("estimate_omegas: phi must be positive");
    if (fit.mu_hat.size() != data.n()) throw DomainError("estimate_omegas: fit does not match data");
    const double n = static_cast<double>(data.n());
    const Eigen::VectorXd& mu = fit.mu_hat;

    Eigen::VectorXd v(mu.size()), vd(mu.size());
    for (Eigen::Index t = 0; t < mu.size(); ++t) {
        v[t] = variance_function(data.family, mu[t]);
        vd[t] = expected_variance_function(data.family, latent, mu[t]);
    }

    CovarianceReport r;
    r.phi = phi;
    r.omega_I = symmetrize(weighted_gram(data.X, v) / n);
    r.omega_I_dagger = symmetrize(weighted_gram(data.X, vd) / n);
    r.truncation_lag = omega_truncation_lag(latent, static_cast<std::size_t>(data.n()), truncation_tol);
    r.omega_II = omega_II(data.X, mu, latent, r.truncation_lag);

    Eigen::LLT<Eigen::MatrixXd> llt(r.omega_I);
    if (llt.info() != Eigen::Success) throw LinAlgError("estimate_omegas: Omega_I is singular");
    const Eigen::MatrixXd inv = llt.solve(Eigen::MatrixXd::Identity(data.p(), data.p()));
    r.naive = symmetrize(phi * inv / n);
    // With nu identically 1 the two agree algebraically; keep them bit-equal.
    r.sandwich = latent.degenerate() ? r.naive : symmetrize(inv * (phi * r.omega_I_dagger + r.omega_II) * inv / n);
    r.se_naive = r.naive.diagonal().cwiseMax(0.0).cwiseSqrt();
    r.se_sandwich = r.sandwich.diagonal().cwiseMax(0.0).cwiseSqrt();
    return r;
}

CovarianceReport estimate_omegas(const Dataset& data, const FitResult& fit, const MomEstimate& latent_fit) {
    if (!latent_fit.valid) throw DomainError("estimate_omegas: latent estimate is invalid (" + latent_fit.reason + ")");
    return estimate_omegas(data, fit, latent_fit.latent_spec(), latent_fit.dispersion());
}

BootstrapReport parametric_bootstrap(const Dataset& data, const FitResult& fit, const LatentSpec& latent, double phi,
                                     int replications, std::uint64_t seed, unsigned threads) {
    latent.validate();
    if (replications < 2) throw DomainError("parametric_bootstrap: need at least 2 replications");
    const FamilySpec fam = data.family.with_phi(phi);
    const Eigen::Index n = data.n();

    std::vector<std::optional<Eigen::VectorXd>> results(static_cast<std::size_t>(replications));
    std::atomic<int> next{0};
    auto worker = [&] {
        for (int b = next++; b < replications; b = next++) {
            Rng rng = substream(seed, static_cast<std::uint64_t>(b));
            try {
                const std::vector<double> nu = simulate(latent, static_cast<std::size_t>(n), rng);
                Dataset boot{Eigen::VectorXd(n), data.X, fam};
                for (Eigen::Index t = 0; t < n; ++t) boot.y[t] = sample(fam, fit.mu_hat[t] * nu[t], phi, rng);
                FitOptions opts;
                opts.init = fit.beta_hat;
                results[static_cast<std::size_t>(b)] = lpglm::fit(boot, opts).beta_hat;
            } catch (const std::exception&) {
                // Counted as a failed replication below.
            }
        }
    };
    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    threads = std::min<unsigned>(threads, static_cast<unsigned>(replications));
    if (threads <= 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (unsigned i = 0; i < threads; ++i) pool.emplace_back(worker);
    }

    BootstrapReport rep;
    rep.replications = replications;
    rep.seed = seed;
    int ok = 0;
    for (const auto& r : results) ok += r.has_value();
    rep.failed = replications - ok;
    rep.estimates.resize(ok, data.p());
    int row = 0;
    for (const auto& r : results)
        if (r) rep.estimates.row(row++) = r->transpose();
    if (ok >= 1) rep.mean_boot = rep.estimates.colwise().mean().transpose();
    if (ok >= 2) {
        const Eigen::MatrixXd centred = rep.estimates.rowwise() - rep.mean_boot.transpose();
        rep.se_boot = (centred.colwise().squaredNorm() / static_cast<double>(ok - 1)).cwiseSqrt().transpose();
    } else {
        rep.se_boot = Eigen::VectorXd::Constant(data.p(), std::numeric_limits<double>::quiet_NaN());
    }
    return rep;
}

BootstrapReport parametric_bootstrap(const Dataset& data, const FitResult& fit, const MomEstimate& latent_fit,
                                     int replications, std::uint64_t seed, unsigned threads) {
    if (!latent_fit.valid)
        throw DomainError("parametric_bootstrap: latent estimate is invalid (" + latent_fit.reason + ")");
    return parametric_bootstrap(data, fit, latent_fit.latent_spec(), latent_fit.dispersion(), replications, seed,
                                threads);
}

}  // namespace lpglm
