#include "lpglm/predict.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "lpglm/errors.hpp"

namespace lpglm {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// log f(y | mean mu * nu), -inf outside the mean domain.
double conditional_log_density(const FamilySpec& fam, double y, double mean, double phi) {
    if (!in_mean_domain(fam, mean)) return kNegInf;
    return log_density(fam, y, mean, phi);
}

void require_latent_family(const FamilySpec& fam) {
    if (fam.family == Family::Bernoulli)
        throw UnsupportedError("latent-process prediction is not defined for the Bernoulli family");
}

}  // namespace

std::string_view to_string(PredictionMethod m) {
    switch (m) {
        case PredictionMethod::Baseline: return "baseline";
        case PredictionMethod::ClosedForm: return "closed_form";
        case PredictionMethod::Quadrature: return "quadrature";
        case PredictionMethod::MonteCarlo: return "monte_carlo";
    }
    return "unknown";
}

std::vector<double> arch_stationary_draws(const LatentSpec& latent, std::size_t m, Rng& rng) {
    latent.validate();
    if (latent.kind != LatentKind::ARCH) throw DomainError("arch_stationary_draws: ARCH spec required");
    if (m == 0) throw DomainError("arch_stationary_draws: need at least one draw");
    std::vector<double> draws(m);
    for (auto& d : draws) d = simulate(latent, 1, rng).front();
    return draws;
}

double posterior_power_moment(const FamilySpec& fam, const LatentSpec& latent, double y, double mu, double phi,
                              double power, const QuadratureSettings& settings) {
    require_latent_family(fam);
    if (latent.kind == LatentKind::ARCH)
        throw UnsupportedError("ARCH posterior moments are computed by Monte Carlo");
    if (latent.degenerate()) return 1.0;
    if (!in_support(fam, y)) throw DomainError("posterior_power_moment: observation outside the support");
    if (!in_mean_domain(fam, mu)) throw DomainError("posterior_power_moment: mean outside the domain");

    auto log_joint = [&](double nu) {
        return conditional_log_density(fam, y, mu * nu, phi) + stationary_log_density(latent, nu);
    };
    // Peak of the joint in z = log(nu), including the dnu = nu dz Jacobian.
    const double sd = std::sqrt(latent.sigma2);
    const double centre = -0.5 * latent.sigma2;
    double shift = kNegInf;
    auto probe = [&](double z) {
        const double v = log_joint(std::exp(z)) + z;
        if (v > shift) shift = v;
    };
    for (int i = -400; i <= 400; ++i) probe(centre + sd * 0.03 * i);
    if (y > 0.0 && mu > 0.0) probe(std::log(y / mu));
    if (!std::isfinite(shift)) throw DomainError("posterior_power_moment: observation has zero likelihood");

    auto num = [&](double nu) { return std::exp(power * std::log(nu) + log_joint(nu) - shift); };
    auto den = [&](double nu) { return std::exp(log_joint(nu) - shift); };
    const double top = integrate_positive_halfline(num, settings).value;
    const double bottom = integrate_positive_halfline(den, settings).value;
    return top / bottom;
}

double gar_posterior_mean(const FamilySpec& fam, const LatentSpec& latent, double y, double mu, double phi) {
    latent.validate();
    if (latent.kind != LatentKind::GAR) throw DomainError("gar_posterior_mean: GAR spec required");
    if (latent.degenerate()) return 1.0;
    const double s2 = latent.sigma2;
    switch (fam.family) {
        case Family::Poisson:
            if (!in_support(fam, y) || !(mu > 0.0)) throw DomainError("gar_posterior_mean: invalid Poisson input");
            return (y + 1.0 / s2) / (mu + 1.0 / s2);
        case Family::Gamma: {
            if (!(y > 0.0) || !(mu > 0.0) || !(phi > 0.0)) throw DomainError("gar_posterior_mean: invalid gamma input");
            // nu | y ~ GIG(a = 2/s2, b = 2y/(mu phi), p = 1/s2 - 1/phi)
            const double p = 1.0 / s2 - 1.0 / phi;
            const double arg = 2.0 * std::sqrt(y / (s2 * phi * mu));
            return std::sqrt(s2 * y / (phi * mu)) * std::exp(log_bessel_k_ratio(p, arg));
        }
        default: return posterior_power_moment(fam, latent, y, mu, phi, 1.0);
    }
}

McEstimate monte_carlo_posterior_mean(const FamilySpec& fam, double y, double mu, double phi,
                                      const std::vector<double>& draws) {
    require_latent_family(fam);
    if (draws.empty()) throw DomainError("monte_carlo_posterior_mean: no draws");
    std::vector<double> logw(draws.size());
    double top = kNegInf;
    for (std::size_t k = 0; k < draws.size(); ++k) {
        const double nu = std::max(draws[k], std::numeric_limits<double>::min());
        logw[k] = conditional_log_density(fam, y, mu * nu, phi);
        top = std::max(top, logw[k]);
    }
    if (!std::isfinite(top)) throw DomainError("monte_carlo_posterior_mean: all draws have zero likelihood");
    double sw = 0.0, swn = 0.0;
    std::vector<double> w(draws.size());
    for (std::size_t k = 0; k < draws.size(); ++k) {
        w[k] = std::exp(logw[k] - top);
        sw += w[k];
        swn += w[k] * draws[k];
    }
    const double est = swn / sw;
    double var = 0.0;
    for (std::size_t k = 0; k < draws.size(); ++k) {
        const double d = w[k] * (draws[k] - est);
        var += d * d;
    }
    return {est, std::sqrt(var) / sw};
}

double posterior_latent_mean(const FamilySpec& fam, const LatentSpec& latent, double y, double mu, double phi,
                             const std::vector<double>* arch_draws) {
    switch (latent.kind) {
        case LatentKind::GAR: return gar_posterior_mean(fam, latent, y, mu, phi);
        case LatentKind::LNAR: return posterior_power_moment(fam, latent, y, mu, phi, 1.0);
        case LatentKind::ARCH:
            if (!arch_draws) throw DomainError("posterior_latent_mean: ARCH requires Monte Carlo draws");
            return monte_carlo_posterior_mean(fam, y, mu, phi, *arch_draws).value;
    }
    throw DomainError("unknown latent kind");
}

double conditional_expectation(const FamilySpec& fam, const LatentSpec& latent, double y, double mu_t, double mu_tl,
                               std::size_t horizon, double phi, const std::vector<double>* arch_draws) {
    latent.validate();
    if (horizon == 0) throw DomainError("conditional_expectation: horizon must be >= 1");
    const double rl = std::pow(latent.rho, static_cast<double>(horizon));
    if (rl == 0.0 || latent.degenerate()) return mu_tl;

    double out = 0.0;
    if (latent.kind == LatentKind::LNAR) {
        const double power_moment = posterior_power_moment(fam, latent, y, mu_t, phi, rl);
        out = mu_tl * std::exp(0.5 * rl * latent.sigma2 * (1.0 - rl)) * power_moment;
    } else {
        const double post = posterior_latent_mean(fam, latent, y, mu_t, phi, arch_draws);
        out = mu_tl * (1.0 + rl * (post - 1.0));
    }
    if (!in_mean_domain(fam, out))
        throw DomainError("conditional_expectation: prediction left the mean domain");
    return out;
}

Evaluation evaluate_predictions(const Eigen::VectorXd& pred, const Eigen::VectorXd& obs) {
    if (pred.size() != obs.size() || pred.size() == 0)
        throw DomainError("evaluate_predictions: series must be non-empty and of equal length");
    Evaluation ev;
    ev.rmse = std::sqrt((pred - obs).squaredNorm() / static_cast<double>(pred.size()));
    const Eigen::ArrayXd a = pred.array() - pred.mean();
    const Eigen::ArrayXd b = obs.array() - obs.mean();
    const double denom = std::sqrt((a * a).sum() * (b * b).sum());
    ev.correlation = denom > 0.0 ? (a * b).sum() / denom : std::numeric_limits<double>::quiet_NaN();
    return ev;
}

PredictionReport in_sample_predictions(const FamilySpec& fam, const Eigen::VectorXd& y, const Eigen::VectorXd& mu_hat,
                                       const std::optional<LatentSpec>& latent, double phi,
                                       const PredictionOptions& options) {
    if (y.size() != mu_hat.size()) throw DomainError("in_sample_predictions: length mismatch");
    if (options.horizon == 0) throw DomainError("in_sample_predictions: horizon must be >= 1");
    PredictionReport rep;
    rep.horizon = options.horizon;
    rep.predictions = mu_hat;
    const auto n = static_cast<std::size_t>(y.size());
    const std::size_t l = options.horizon;

    if (latent) {
        std::vector<double> draws;
        if (latent->kind == LatentKind::ARCH) {
            Rng rng = substream(options.seed, 0);
            draws = arch_stationary_draws(*latent, options.arch_draws, rng);
            rep.method = PredictionMethod::MonteCarlo;
            rep.mc_draws = options.arch_draws;
        } else if (latent->kind == LatentKind::LNAR || !(fam.family == Family::Poisson || fam.family == Family::Gamma)) {
            rep.method = PredictionMethod::Quadrature;
        } else {
            rep.method = PredictionMethod::ClosedForm;
        }
        for (std::size_t t = l; t < n; ++t) {
            const auto src = static_cast<Eigen::Index>(t - l);
            const auto dst = static_cast<Eigen::Index>(t);
            if (rep.method == PredictionMethod::MonteCarlo && !latent->degenerate()) {
                const McEstimate mc = monte_carlo_posterior_mean(fam, y[src], mu_hat[src], phi, draws);
                rep.max_mc_rel_se = std::max(rep.max_mc_rel_se, mc.std_error / mc.value);
                const double rl = std::pow(latent->rho, static_cast<double>(l));
                rep.predictions[dst] = mu_hat[dst] * (1.0 + rl * (mc.value - 1.0));
            } else {
                rep.predictions[dst] =
                    conditional_expectation(fam, *latent, y[src], mu_hat[src], mu_hat[dst], l, phi, &draws);
            }
        }
        rep.mc_warning = rep.max_mc_rel_se > 0.01;
    }
    const Evaluation ev = evaluate_predictions(rep.predictions, y);
    rep.rmse = ev.rmse;
    rep.correlation = ev.correlation;
    return rep;
}

}  // namespace lpglm
