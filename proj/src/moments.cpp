#include "lpglm/moments.hpp"

#include <cmath>
#include <limits>

#include "lpglm/errors.hpp"

namespace lpglm {

namespace {

MomEstimate make(Family fam, LatentKind kind, const MomentSums& s) {
    MomEstimate e;
    e.family = fam;
    e.kind = kind;
    e.sums = s;
    return e;
}

MomEstimate& invalid(MomEstimate& e, std::string why) {
    e.valid = false;
    e.reason = std::move(why);
    return e;
}

bool finite_all(std::initializer_list<double> xs) {
    for (double x : xs)
        if (!std::isfinite(x)) return false;
    return true;
}

}  // namespace

MomentSums empirical_moment_sums(const Eigen::VectorXd& y, const Eigen::VectorXd& mu) {
    if (y.size() != mu.size()) throw DomainError("empirical_moment_sums: length mismatch");
    if (y.size() < 3) throw DomainError("empirical_moment_sums: need at least 3 observations");
    MomentSums s;
    s.n = y.size();
    const Eigen::VectorXd r = y - mu;
    s.S0 = r.squaredNorm();
    s.M0 = mu.squaredNorm();
    s.P = mu.sum();
    const Eigen::Index n = y.size();
    s.S1 = r.tail(n - 1).dot(r.head(n - 1));
    s.M1 = mu.tail(n - 1).dot(mu.head(n - 1));
    s.S2 = r.tail(n - 2).dot(r.head(n - 2));
    s.M2 = mu.tail(n - 2).dot(mu.head(n - 2));
    return s;
}

LatentSpec MomEstimate::latent_spec() const {
    if (!valid) throw DomainError("latent_spec: estimate is invalid (" + reason + ")");
    switch (kind) {
        case LatentKind::LNAR: return LatentSpec::lnar(*sigma2, rho);
        case LatentKind::GAR: return LatentSpec::gar(*sigma2, rho);
        case LatentKind::ARCH: return LatentSpec::arch(rho);
    }
    throw DomainError("unknown latent kind");
}

MomEstimate mom_poisson_lnar(const MomentSums& s) {
    MomEstimate e = make(Family::Poisson, LatentKind::LNAR, s);
    const double a0 = (s.S0 - s.P) / s.M0 + 1.0;
    const double a1 = s.S1 / s.M1 + 1.0;
    if (!(a0 > 0.0)) return invalid(e, "negative variance: log argument for sigma2 is not positive");
    if (!(a1 > 0.0)) return invalid(e, "log argument for rho is not positive");
    const double sigma2 = std::log(a0);
    e.sigma2 = sigma2;
    e.rho = std::log(a1) / sigma2;
    if (!(sigma2 > 0.0)) return invalid(e, "negative variance: sigma2 estimate is not positive");
    if (!(e.rho > -1.0 && e.rho < 1.0)) return invalid(e, "rho estimate outside (-1, 1)");
    e.valid = true;
    return e;
}

MomEstimate mom_poisson_gar(const MomentSums& s) {
    MomEstimate e = make(Family::Poisson, LatentKind::GAR, s);
    const double sigma2 = (s.S0 - s.P) / s.M0;
    e.sigma2 = sigma2;
    if (!(sigma2 > 0.0)) return invalid(e, "negative variance: sigma2 estimate is not positive");
    e.rho = s.S1 / (sigma2 * s.M1);
    if (!(e.rho > 0.0 && e.rho < 1.0)) return invalid(e, "rho estimate outside (0, 1)");
    e.valid = true;
    return e;
}

double arch_rho_from_lag1(double r) {
    if (!(r > 0.0)) return std::numeric_limits<double>::quiet_NaN();
    if (std::isinf(r)) return 1.0 / std::sqrt(3.0);
    // 2 rho / (1 - 3 rho^2) = r, positive root in stable form.
    return r / (1.0 + std::sqrt(1.0 + 3.0 * r * r));
}

MomEstimate mom_poisson_arch(const MomentSums& s) {
    MomEstimate e = make(Family::Poisson, LatentKind::ARCH, s);
    const double r = s.S1 / s.M1;
    if (!(r > 0.0)) return invalid(e, "lag-1 moment ratio is not positive; no ARCH root");
    e.rho = arch_rho_from_lag1(r);
    e.valid = true;
    return e;
}

MomEstimate mom_gamma_lnar(const MomentSums& s) {
    MomEstimate e = make(Family::Gamma, LatentKind::LNAR, s);
    const double a1 = s.S1 / s.M1 + 1.0;
    const double a2 = s.S2 / s.M2 + 1.0;
    if (!(a1 > 0.0) || !(a2 > 0.0)) return invalid(e, "log argument for lag-1 or lag-2 moment is not positive");
    const double l1 = std::log(a1), l2 = std::log(a2);
    if (l1 == 0.0 || l2 == 0.0) return invalid(e, "degenerate lag moment (zero log)");
    e.rho = l2 / l1;
    const double sigma2 = l1 * l1 / l2;
    e.sigma2 = sigma2;
    e.phi = std::exp(-sigma2) * (s.S0 / s.M0 + 1.0) - 1.0;
    if (!finite_all({e.rho, sigma2, *e.phi})) return invalid(e, "non-finite estimate");
    if (!(sigma2 > 0.0)) return invalid(e, "negative variance: sigma2 estimate is not positive");
    if (!(e.rho > -1.0 && e.rho < 1.0)) return invalid(e, "rho estimate outside (-1, 1)");
    if (!(*e.phi > 0.0)) return invalid(e, "dispersion estimate is not positive");
    e.valid = true;
    return e;
}

MomEstimate mom_gamma_gar(const MomentSums& s) {
    MomEstimate e = make(Family::Gamma, LatentKind::GAR, s);
    if (s.S1 == 0.0 || s.S2 == 0.0 || s.M2 == 0.0 || s.M1 == 0.0)
        return invalid(e, "zero denominator in lag moments");
    e.rho = (s.S2 / s.S1) * (s.M1 / s.M2);
    const double q = s.S1 / s.M1;
    const double sigma2 = q * q * (s.M2 / s.S2);
    e.sigma2 = sigma2;
    e.phi = (s.S0 / s.M0 + 1.0) / (sigma2 + 1.0) - 1.0;
    if (!finite_all({e.rho, sigma2, *e.phi})) return invalid(e, "non-finite estimate");
    if (!(e.rho > 0.0 && e.rho < 1.0)) return invalid(e, "rho estimate outside (0, 1)");
    if (!(sigma2 > 0.0)) return invalid(e, "negative variance: sigma2 estimate is not positive");
    if (!(*e.phi > 0.0)) return invalid(e, "dispersion estimate is not positive");
    e.valid = true;
    return e;
}

MomEstimate estimate_latent(Family family, LatentKind kind, const MomentSums& s) {
    if (family == Family::Poisson) {
        switch (kind) {
            case LatentKind::LNAR: return mom_poisson_lnar(s);
            case LatentKind::GAR: return mom_poisson_gar(s);
            case LatentKind::ARCH: return mom_poisson_arch(s);
        }
    }
    if (family == Family::Gamma) {
        if (kind == LatentKind::LNAR) return mom_gamma_lnar(s);
        if (kind == LatentKind::GAR) return mom_gamma_gar(s);
    }
    throw UnsupportedError("no moment estimator for the " + std::string(to_string(family)) + "-" +
                           std::string(to_string(kind)) + " combination");
}

}  // namespace lpglm
