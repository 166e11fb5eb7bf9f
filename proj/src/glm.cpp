#include "lpglm/glm.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace lpglm {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// Sign linking eta to the natural parameter: theta = sign * eta.
double theta_sign(Family f) { return f == Family::Gamma ? -1.0 : 1.0; }

double loglik_or_neg_inf(const Dataset& data, const Eigen::VectorXd& beta) {
    const Eigen::VectorXd eta = data.X * beta;
    const Family fam = data.family.family;
    double total = 0.0;
    for (Eigen::Index t = 0; t < eta.size(); ++t) {
        if (!in_predictor_domain(fam, eta[t])) return kNegInf;
        const double mu = inverse_link(fam, eta[t]);
        if (!in_mean_domain(data.family, mu)) return kNegInf;
        total += log_density(data.family, data.y[t], mu, data.family.phi);
    }
    return std::isfinite(total) ? total : kNegInf;
}

Eigen::VectorXd least_squares(const Eigen::MatrixXd& X, const Eigen::VectorXd& z) {
    return X.colPivHouseholderQr().solve(z);
}

Eigen::VectorXd initial_beta(const Dataset& data) {
    const Eigen::VectorXd& y = data.y;
    Eigen::VectorXd z(y.size());
    switch (data.family.family) {
        case Family::Poisson: z = (y.array() + 0.5).log(); break;
        case Family::Gamma: z = y.array().inverse(); break;
        case Family::Gaussian: z = y; break;
        case Family::Bernoulli: {
            const Eigen::ArrayXd m = (y.array() + 0.5) / 2.0;
            z = (m / (1.0 - m)).log();
            break;
        }
    }
    Eigen::VectorXd beta = least_squares(data.X, z);
    if (std::isfinite(loglik_or_neg_inf(data, beta))) return beta;
    // Fall back to the constant predictor at the sample mean.
    const double ybar = y.mean();
    const double g = data.family.family == Family::Gamma ? 1.0 / ybar
                     : data.family.family == Family::Poisson ? std::log(ybar + 0.5)
                                                             : z.mean();
    beta = least_squares(data.X, Eigen::VectorXd::Constant(y.size(), g));
    if (std::isfinite(loglik_or_neg_inf(data, beta))) return beta;
    throw DomainError("fit: no feasible starting value found; supply an initial beta");
}

}  // namespace

void Dataset::validate() const {
    family.validate();
    if (X.rows() != y.size()) throw DataError("design rows do not match the response length");
    if (X.cols() < 1) throw DataError("design must have at least one column");
    if (!(y.size() > X.cols())) throw DataError("need more observations than covariates (n > p)");
    if (!X.allFinite()) throw DataError("design contains non-finite entries");
    std::ostringstream bad;
    int count = 0;
    for (Eigen::Index t = 0; t < y.size(); ++t) {
        if (!in_support(family, y[t])) {
            if (count < 20) bad << (count ? ", " : "") << t;
            ++count;
        }
    }
    if (count > 0) {
        throw DataError(std::to_string(count) + " observation(s) outside the " +
                        std::string(to_string(family.family)) + " support at indices " + bad.str() +
                        (count > 20 ? ", ..." : ""));
    }
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(X);
    if (qr.rank() < X.cols()) throw LinAlgError("design matrix is not of full column rank");
}

bool in_predictor_domain(Family family, double eta) {
    if (!std::isfinite(eta)) return false;
    if (family == Family::Gamma) return eta > 0.0;
    if (family == Family::Poisson) return eta < 700.0;
    return true;
}

double inverse_link(Family family, double eta) {
    switch (family) {
        case Family::Poisson: return std::exp(eta);
        case Family::Gamma:
            if (!(eta > 0.0)) throw DomainError("gamma linear predictor must be positive");
            return 1.0 / eta;
        case Family::Gaussian: return eta;
        case Family::Bernoulli:
            return eta >= 0.0 ? 1.0 / (1.0 + std::exp(-eta)) : std::exp(eta) / (1.0 + std::exp(eta));
    }
    throw DomainError("unknown family");
}

Eigen::VectorXd fitted_means(const Dataset& data, const Eigen::VectorXd& beta) {
    const Eigen::VectorXd eta = data.X * beta;
    Eigen::VectorXd mu(eta.size());
    for (Eigen::Index t = 0; t < eta.size(); ++t) {
        if (!in_predictor_domain(data.family.family, eta[t]))
            throw DomainError("linear predictor outside the natural-parameter domain at t=" + std::to_string(t));
        mu[t] = inverse_link(data.family.family, eta[t]);
    }
    return mu;
}

double pseudo_log_likelihood(const Dataset& data, const Eigen::VectorXd& beta) {
    if (beta.size() != data.p()) throw DomainError("beta has the wrong dimension");
    const Eigen::VectorXd mu = fitted_means(data, beta);
    double total = 0.0;
    for (Eigen::Index t = 0; t < mu.size(); ++t) total += log_density(data.family, data.y[t], mu[t], data.family.phi);
    return total;
}

Eigen::VectorXd score(const Dataset& data, const Eigen::VectorXd& beta) {
    return data.X.transpose() * (data.y - fitted_means(data, beta));
}

FitResult fit(const Dataset& data, const FitOptions& options) {
    data.validate();
    const Family fam = data.family.family;
    const double n = static_cast<double>(data.n());

    FitResult res;
    Eigen::VectorXd beta = options.init ? *options.init : initial_beta(data);
    if (beta.size() != data.p()) throw DomainError("initial beta has the wrong dimension");
    double ll = loglik_or_neg_inf(data, beta);
    if (!std::isfinite(ll)) {
        if (!options.init) throw DomainError("fit: starting value outside the natural-parameter domain");
        beta = initial_beta(data);
        ll = loglik_or_neg_inf(data, beta);
    }
    res.log_likelihood_trace.push_back(ll);

    auto finish = [&](bool converged, double gnorm, int iters) {
        res.beta_hat = beta;
        res.mu_hat = fitted_means(data, beta);
        res.iterations = iters;
        res.converged = converged;
        res.max_score_norm = gnorm;
        res.log_likelihood = ll;
    };

    for (int it = 0; it <= options.max_iter; ++it) {
        const Eigen::VectorXd mu = fitted_means(data, beta);
        const Eigen::VectorXd resid = data.y - mu;
        const Eigen::VectorXd g = data.X.transpose() * resid;
        const double gnorm = g.lpNorm<Eigen::Infinity>();
        if (gnorm < options.tol * (1.0 + std::abs(ll) / n)) {
            finish(true, gnorm, it);
            return res;
        }
        if (it == options.max_iter) {
            finish(false, gnorm, it);
            throw GlmConvergenceError("fit: no convergence after " + std::to_string(options.max_iter) + " iterations",
                                      res);
        }

        // Weighted least squares for the Newton direction: (X'WX) d = sign * X'(y - mu).
        Eigen::ArrayXd sw(mu.size());
        for (Eigen::Index t = 0; t < mu.size(); ++t) sw[t] = std::sqrt(variance_function(data.family, mu[t]));
        const Eigen::MatrixXd A = data.X.array().colwise() * sw;
        Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(A);
        if (qr.rank() < data.p()) throw LinAlgError("fit: weighted design is rank deficient");
        const Eigen::VectorXd rhs = theta_sign(fam) * (resid.array() / sw).matrix();
        const Eigen::VectorXd step = qr.solve(rhs);

        double lambda = 1.0;
        bool accepted = false;
        const double slack = 1e-12 * (1.0 + std::abs(ll));
        for (int h = 0; h < 60; ++h, lambda *= 0.5) {
            const Eigen::VectorXd trial = beta + lambda * step;
            const double ll_trial = loglik_or_neg_inf(data, trial);
            if (std::isfinite(ll_trial) && ll_trial >= ll - slack) {
                beta = trial;
                ll = ll_trial;
                accepted = true;
                break;
            }
        }
        if (!accepted) {
            finish(false, gnorm, it);
            throw GlmConvergenceError("fit: step-halving failed to improve the pseudo log-likelihood", res);
        }
        res.log_likelihood_trace.push_back(ll);
    }
    // Unreachable: the loop either returns or throws.
    throw GlmConvergenceError("fit: no convergence", res);
}

}  // namespace lpglm
