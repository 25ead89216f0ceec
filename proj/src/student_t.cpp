#include "adapt/student_t.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace adapt::stats {

namespace {

// Modified Lentz evaluation of the continued fraction for I_x(a, b).
double beta_continued_fraction(double a, double b, double x) {
    constexpr int kMaxIter = 10000;
    constexpr double kEps = 1e-16;
    constexpr double kTiny = 1e-300;

    const double qab = a + b;
    const double qap = a + 1.0;
    const double qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::fabs(d) < kTiny) d = kTiny;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= kMaxIter; ++m) {
        const double m2 = 2.0 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < kTiny) d = kTiny;
        c = 1.0 + aa / c;
        if (std::fabs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < kTiny) d = kTiny;
        c = 1.0 + aa / c;
        if (std::fabs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) < kEps) return h;
    }
    throw std::runtime_error("incomplete_beta: continued fraction did not converge");
}

}  // namespace

double incomplete_beta(double a, double b, double x) {
    if (!(a > 0.0) || !(b > 0.0)) throw std::invalid_argument("incomplete_beta: a and b must be positive");
    if (!(x >= 0.0 && x <= 1.0)) throw std::invalid_argument("incomplete_beta: x outside [0, 1]");
    if (x == 0.0) return 0.0;
    if (x == 1.0) return 1.0;
    const double log_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) + a * std::log(x) +
                             b * std::log1p(-x);
    const double front = std::exp(log_front);
    if (x < (a + 1.0) / (a + b + 2.0)) return front * beta_continued_fraction(a, b, x) / a;
    return 1.0 - front * beta_continued_fraction(b, a, 1.0 - x) / b;
}

double student_t_cdf(double t, double nu) {
    if (!(nu > 0.0)) throw std::invalid_argument("student_t_cdf: nu must be positive");
    if (std::isnan(t)) return t;
    if (std::isinf(t)) return t > 0 ? 1.0 : 0.0;
    const double t2 = t * t;
    // Use whichever argument is farther from 1.
    if (t2 < nu) {
        const double half_mass = 0.5 * incomplete_beta(0.5, 0.5 * nu, t2 / (nu + t2));
        return t >= 0 ? 0.5 + half_mass : 0.5 - half_mass;
    }
    const double tail = 0.5 * incomplete_beta(0.5 * nu, 0.5, nu / (nu + t2));
    return t >= 0 ? 1.0 - tail : tail;
}

double student_t_pdf(double t, double nu) {
    if (!(nu > 0.0)) throw std::invalid_argument("student_t_pdf: nu must be positive");
    const double log_norm =
        std::lgamma(0.5 * (nu + 1.0)) - std::lgamma(0.5 * nu) - 0.5 * std::log(nu * std::numbers::pi);
    return std::exp(log_norm - 0.5 * (nu + 1.0) * std::log1p(t * t / nu));
}

double student_t_quantile(double p, double nu) {
    if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("student_t_quantile: p must lie in (0, 1)");
    if (!(nu > 0.0)) throw std::invalid_argument("student_t_quantile: nu must be positive");
    if (p == 0.5) return 0.0;
    // Symmetry: solve in the upper half.
    if (p < 0.5) return -student_t_quantile(1.0 - p, nu);

    double lo = 0.0;
    double hi = 1.0;
    while (student_t_cdf(hi, nu) < p) {
        lo = hi;
        hi *= 2.0;
        if (hi > 1e300) return std::numeric_limits<double>::infinity();
    }
    double t = 0.5 * (lo + hi);
    for (int iter = 0; iter < 200; ++iter) {
        const double f = student_t_cdf(t, nu) - p;
        if (f == 0.0) return t;
        if (f < 0.0)
            lo = t;
        else
            hi = t;
        const double dens = student_t_pdf(t, nu);
        double next = dens > 0.0 ? t - f / dens : 0.5 * (lo + hi);
        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
        if (std::fabs(next - t) <= 4.0 * std::numeric_limits<double>::epsilon() * std::fabs(next))
            return next;
        t = next;
    }
    return t;
}

}  // namespace adapt::stats
