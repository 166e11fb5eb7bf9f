#include "lpglm/specfun.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <queue>
#include <string>
#include <vector>

#include "lpglm/errors.hpp"

namespace lpglm {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr double kLogMax = 709.782712893384;

// Gauss-Kronrod 7/15 abscissae and weights (QUADPACK qk15).
constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Segment {
    double a, b, value, error;
    bool operator<(const Segment& o) const { return error < o.error; }
};

Segment gauss_kronrod15(const Integrand& f, double a, double b) {
    const double center = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    const double fc = f(center);
    double resg = fc * kWg[3];
    double resk = fc * kWgk[7];
    double resabs = std::abs(resk);
    std::array<double, 7> fv1{}, fv2{};
    for (int j = 0; j < 7; ++j) {
        const double dx = half * kXgk[j];
        fv1[j] = f(center - dx);
        fv2[j] = f(center + dx);
        const double sum = fv1[j] + fv2[j];
        resk += kWgk[j] * sum;
        resabs += kWgk[j] * (std::abs(fv1[j]) + std::abs(fv2[j]));
        if (j % 2 == 1) resg += kWg[j / 2] * sum;
    }
    const double reskh = resk * 0.5;
    double resasc = kWgk[7] * std::abs(fc - reskh);
    for (int j = 0; j < 7; ++j)
        resasc += kWgk[j] * (std::abs(fv1[j] - reskh) + std::abs(fv2[j] - reskh));

    const double value = resk * half;
    resabs *= std::abs(half);
    resasc *= std::abs(half);
    double err = std::abs((resk - resg) * half);
    if (resasc != 0.0 && err != 0.0) err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
    if (resabs > std::numeric_limits<double>::min() / (50.0 * kEps))
        err = std::max(50.0 * kEps * resabs, err);
    if (!std::isfinite(value)) err = std::numeric_limits<double>::infinity();
    return {a, b, value, err};
}

QuadratureResult adaptive(const Integrand& f, double a, double b, const QuadratureSettings& s,
                          int initial_pieces) {
    s.validate();
    std::priority_queue<Segment> heap;
    double total = 0.0, total_err = 0.0;
    const double width = (b - a) / initial_pieces;
    for (int i = 0; i < initial_pieces; ++i) {
        const double lo = a + i * width;
        const double hi = (i + 1 == initial_pieces) ? b : lo + width;
        Segment seg = gauss_kronrod15(f, lo, hi);
        total += seg.value;
        total_err += seg.error;
        heap.push(seg);
    }
    int splits = 0;
    while (total_err > std::max(s.abs_tol, s.rel_tol * std::abs(total))) {
        if (splits >= s.max_subdivisions || !std::isfinite(total_err)) {
            throw ConvergenceError("quadrature did not converge within " +
                                       std::to_string(s.max_subdivisions) + " subdivisions",
                                   total);
        }
        Segment worst = heap.top();
        heap.pop();
        const double mid = 0.5 * (worst.a + worst.b);
        if (mid <= worst.a || mid >= worst.b) {
            // Interval collapsed to machine resolution; nothing more to gain.
            throw ConvergenceError("quadrature hit roundoff limit", total);
        }
        Segment left = gauss_kronrod15(f, worst.a, mid);
        Segment right = gauss_kronrod15(f, mid, worst.b);
        total += left.value + right.value - worst.value;
        total_err += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
        ++splits;
    }
    // Re-sum to shed the drift from incremental updates.
    double sum = 0.0, err = 0.0;
    while (!heap.empty()) {
        sum += heap.top().value;
        err += heap.top().error;
        heap.pop();
    }
    return {sum, err, splits};
}

}  // namespace

void QuadratureSettings::validate() const {
    if (!(rel_tol > 0.0) || !(abs_tol > 0.0))
        throw DomainError("quadrature tolerances must be positive");
    if (max_subdivisions < 1) throw DomainError("max_subdivisions must be >= 1");
}

QuadratureResult integrate(const Integrand& f, double a, double b, const QuadratureSettings& settings) {
    if (!(a < b)) {
        if (a == b) return {};
        throw DomainError("integrate: lower limit exceeds upper limit");
    }
    return adaptive(f, a, b, settings, 1);
}

QuadratureResult integrate_real_line(const Integrand& f, const QuadratureSettings& settings,
                                     double center, double scale) {
    if (!(scale > 0.0)) throw DomainError("integrate_real_line: scale must be positive");
    auto mapped = [&](double t) {
        const double d = 1.0 - t * t;
        if (d <= 0.0) return 0.0;
        const double z = center + scale * t / d;
        const double v = f(z);
        if (v == 0.0) return 0.0;
        return v * scale * (1.0 + t * t) / (d * d);
    };
    return adaptive(mapped, -1.0, 1.0, settings, 8);
}

QuadratureResult integrate_positive_halfline(const Integrand& f, const QuadratureSettings& settings) {
    auto in_log = [&](double z) {
        if (z > kLogMax || z < -745.0) return 0.0;
        const double nu = std::exp(z);
        const double v = f(nu);
        if (v == 0.0) return 0.0;
        // inf * 0 style overflow far out in the tails of an integrable f.
        if (!std::isfinite(v) && std::abs(z) > 40.0) return 0.0;
        return v * nu;
    };
    return integrate_real_line(in_log, settings, 0.0, 1.0);
}

SignedLog log_gamma_signed(double x) {
    if (x > 0.0) return {std::lgamma(x), 1};
    if (x == std::floor(x)) throw DomainError("gamma function pole at non-positive integer");
    const double n = std::ceil(-x);
    const int sign = (static_cast<long long>(n) % 2 == 0) ? 1 : -1;
    return {std::lgamma(x), sign};
}

// ----------------------------------------------------------------------------
// Bessel I
// ----------------------------------------------------------------------------

namespace {

// Debye polynomials u_k(t) = t^k q_k(t); q_k stored by coefficients of t^0, t^1, ...
// Built once from u_{k+1} = t^2 (1 - t^2) u_k' / 2 + (1/8) int_0^t (1 - 5 s^2) u_k(s) ds.
const std::vector<std::vector<double>>& debye_q() {
    static const std::vector<std::vector<double>> q = [] {
        constexpr int kTerms = 24;
        std::vector<std::vector<double>> u(kTerms);
        u[0] = {1.0};
        for (int k = 0; k + 1 < kTerms; ++k) {
            const auto& uk = u[k];
            std::vector<double> next(uk.size() + 3, 0.0);
            for (std::size_t i = 1; i < uk.size(); ++i) {
                const double d = static_cast<double>(i) * uk[i];  // coefficient of t^{i-1}
                next[i + 1] += 0.5 * d;
                next[i + 3] -= 0.5 * d;
            }
            for (std::size_t i = 0; i < uk.size(); ++i) {
                next[i + 1] += uk[i] / (8.0 * static_cast<double>(i + 1));
                next[i + 3] -= 5.0 * uk[i] / (8.0 * static_cast<double>(i + 3));
            }
            u[k + 1] = std::move(next);
        }
        std::vector<std::vector<double>> out(kTerms);
        for (int k = 0; k < kTerms; ++k) out[k].assign(u[k].begin() + k, u[k].end());
        return out;
    }();
    return q;
}

double poly_eval(const std::vector<double>& c, double t) {
    double acc = 0.0;
    for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * t + *it;
    return acc;
}

// log I_nu(x) for nu >= 0 from the uniform expansion, written in s = sqrt(nu^2 + x^2)
// so that nu = 0 is not a special case.
double log_bessel_i_debye(double nu, double x) {
    const double s = std::hypot(nu, x);
    const double t = nu / s;
    const double exponent = s + (nu > 0.0 ? nu * std::log(x / (nu + s)) : 0.0);
    const auto& q = debye_q();
    // Individual terms can be tiny near a zero of q_k(t), so divergence is judged
    // against the envelope of the last two terms rather than the previous one.
    double sum = 1.0, env = 1.0;
    double spow = 1.0;
    for (std::size_t k = 1; k < q.size(); ++k) {
        spow *= s;
        const double term = poly_eval(q[k], t) / spow;
        if (k > 3 && std::abs(term) > env) break;
        sum += term;
        env = std::max(std::abs(term), k > 1 ? std::abs(poly_eval(q[k - 1], t) / (spow / s)) : 1.0);
        if (std::abs(term) < 1e-17 * std::abs(sum) && k > 3) break;
    }
    return exponent - 0.5 * std::log(2.0 * std::numbers::pi * s) + std::log(sum);
}

SignedLog log_bessel_i_series(double u, double x) {
    const double half = 0.5 * x;
    const double lh = std::log(half);
    const double lh2 = 2.0 * lh;
    std::vector<double> logs;
    std::vector<int> signs;
    const SignedLog g0 = log_gamma_signed(u + 1.0);
    double lt = u * lh - g0.log_abs;
    int sg = g0.sign;
    double lmax = lt;
    for (int k = 0; k < 100000; ++k) {
        logs.push_back(lt);
        signs.push_back(sg);
        lmax = std::max(lmax, lt);
        // term_{k+1} / term_k = (x/2)^2 / ((k+1)(k+u+1))
        const double denom = (k + 1.0) * (k + u + 1.0);
        if (denom > 0.0 && (half * half) < denom && lt < lmax - 40.0) break;
        lt += lh2 - std::log(std::abs(denom));
        if (denom < 0.0) sg = -sg;
    }
    double sum = 0.0;
    for (std::size_t k = 0; k < logs.size(); ++k) sum += signs[k] * std::exp(logs[k] - lmax);
    if (sum == 0.0) return {-std::numeric_limits<double>::infinity(), 1};
    return {lmax + std::log(std::abs(sum)), sum > 0.0 ? 1 : -1};
}

SignedLog signed_log_bessel_i(double u, double x) {
    if (!(x >= 0.0) || !std::isfinite(u)) throw DomainError("bessel_i: requires x >= 0");
    if (u < 0.0 && u == std::floor(u)) u = -u;  // I_{-n} = I_n
    if (x == 0.0) {
        if (u == 0.0) return {0.0, 1};
        if (u > 0.0) return {-std::numeric_limits<double>::infinity(), 1};
        throw DomainError("bessel_i: x = 0 with negative non-integer order");
    }
    if (x < 15.0 + std::abs(u)) return log_bessel_i_series(u, x);
    const double a = std::abs(u);
    const double li = log_bessel_i_debye(a, x);
    if (u >= 0.0) return {li, 1};
    // I_{-a} = I_a + (2/pi) sin(a pi) K_a; the K part is exponentially small here.
    const double corr = (2.0 / std::numbers::pi) * std::sin(a * std::numbers::pi) *
                        std::exp(log_bessel_k(a, x) - li);
    return {li + std::log1p(corr), 1};
}

// ----------------------------------------------------------------------------
// Bessel K
// ----------------------------------------------------------------------------

// Large-argument expansion; returns NaN when it fails to reach full precision.
double log_bessel_k_asymptotic(double p, double u) {
    const double mu = 4.0 * p * p;
    double term = 1.0, sum = 1.0;
    for (int k = 1; k < 200; ++k) {
        const double odd = 2.0 * k - 1.0;
        const double next = term * (mu - odd * odd) / (8.0 * k * u);
        if (next == 0.0) return -u + 0.5 * std::log(std::numbers::pi / (2.0 * u)) + std::log(sum);
        if (std::abs(next) > std::abs(term)) break;
        sum += next;
        term = next;
        if (std::abs(term) < 1e-17 * std::abs(sum))
            return -u + 0.5 * std::log(std::numbers::pi / (2.0 * u)) + std::log(sum);
    }
    return std::numeric_limits<double>::quiet_NaN();
}

// K_p(u) = (1/2) int_0^inf w^{p-1} exp(-(u/2)(w + 1/w)) dw = int_0^inf cosh(p t) exp(-u cosh t) dt.
// Integrated in the t form after factoring out the peak value.
double log_bessel_k_integral(double p, double u) {
    const double q = std::abs(p);
    const double tpk = std::asinh(q / u);
    const double shift = q * tpk - u * std::cosh(tpk);
    auto log_integrand = [&](double t) {
        return q * t - u * std::cosh(t) + std::log1p(std::exp(-2.0 * q * t)) - std::numbers::ln2;
    };
    auto integrand = [&](double t) { return std::exp(log_integrand(t) - shift); };
    const double width = 1.0 / std::sqrt(std::hypot(u, q));
    double upper = tpk + width;
    while (log_integrand(upper) - shift > -50.0) upper = tpk + 2.0 * (upper - tpk);

    QuadratureSettings s;
    s.rel_tol = 1e-14;
    s.abs_tol = 1e-300;
    s.max_subdivisions = 400;
    auto run = [&](double a, double b) {
        try {
            return integrate(integrand, a, b, s).value;
        } catch (const ConvergenceError& e) {
            return e.partial_value();  // only reached at the roundoff floor
        }
    };
    double total = run(tpk, upper);
    if (tpk > 0.0) total += run(0.0, tpk);
    return shift + std::log(total);
}

}  // namespace

double bessel_i(double u, double x) {
    const SignedLog r = signed_log_bessel_i(u, x);
    if (r.log_abs > kLogMax) throw RangeError("bessel_i: overflow, use log_bessel_i");
    return r.sign * std::exp(r.log_abs);
}

double log_bessel_i(double u, double x) {
    const SignedLog r = signed_log_bessel_i(u, x);
    if (r.sign < 0) throw DomainError("log_bessel_i: I_u(x) is negative");
    return r.log_abs;
}

double log_bessel_k(double p, double u) {
    if (!(u > 0.0) || !std::isfinite(p)) throw DomainError("bessel_k: requires u > 0");
    p = std::abs(p);
    if (u > 30.0) {
        const double a = log_bessel_k_asymptotic(p, u);
        if (std::isfinite(a)) return a;
    }
    return log_bessel_k_integral(p, u);
}

double bessel_k(double p, double u) {
    const double l = log_bessel_k(p, u);
    if (l > kLogMax) throw RangeError("bessel_k: overflow, use log_bessel_k");
    return std::exp(l);
}

double log_bessel_k_ratio(double p, double u) { return log_bessel_k(p + 1.0, u) - log_bessel_k(p, u); }

}  // namespace lpglm
