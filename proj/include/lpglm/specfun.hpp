#pragma once

#include <functional>

namespace lpglm {

struct QuadratureSettings {
    double rel_tol = 1e-9;
    double abs_tol = 1e-12;
    int max_subdivisions = 200;

    void validate() const;
};

struct QuadratureResult {
    double value = 0.0;
    double error = 0.0;
    int subdivisions = 0;
};

using Integrand = std::function<double(double)>;

/// Globally adaptive 15-point Gauss-Kronrod on [a, b]. Throws ConvergenceError
/// (carrying the partial value) when the subdivision budget runs out.
QuadratureResult integrate(const Integrand& f, double a, double b,
                           const QuadratureSettings& settings = {});

/// Integral over the real line via z = center + scale * t / (1 - t^2).
QuadratureResult integrate_real_line(const Integrand& f, const QuadratureSettings& settings = {},
                                     double center = 0.0, double scale = 1.0);

/// Integral over (0, inf): nu = exp(z) maps to the real line, which is then
/// compactified onto (-1, 1).
QuadratureResult integrate_positive_halfline(const Integrand& f,
                                             const QuadratureSettings& settings = {});

/// Modified Bessel function of the first kind I_u(x), x >= 0.
/// Power series for x < 15 + |u|, uniform (Debye) expansion beyond.
double bessel_i(double u, double x);
/// log I_u(x); finite for very large x. DomainError if I_u(x) < 0.
double log_bessel_i(double u, double x);

/// Modified Bessel function of the third kind K_p(u), u > 0.
double bessel_k(double p, double u);
double log_bessel_k(double p, double u);
/// log(K_{p+1}(u) / K_p(u)).
double log_bessel_k_ratio(double p, double u);

/// log |Gamma(x)| together with the sign of Gamma(x).
struct SignedLog {
    double log_abs;
    int sign;
};
SignedLog log_gamma_signed(double x);

}  // namespace lpglm
