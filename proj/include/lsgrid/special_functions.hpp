#pragma once

// Gamma-family special functions used throughout the library: log-gamma,
// digamma, the regularized lower incomplete gamma, the logarithmic test
// function phi and the four derivative-norm envelopes of the unit-scale
// gamma density.

#include <array>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace lsgrid {

inline constexpr double euler_gamma = 0.57721566490153286060651209;

namespace detail {

// B_{2n} / (2n (2n-1)), the Stirling series coefficients for log Gamma.
inline constexpr std::array<double, 7> log_gamma_tail = {
    1.0 / 12.0,   -1.0 / 360.0,      1.0 / 1260.0, -1.0 / 1680.0,
    1.0 / 1188.0, -691.0 / 360360.0, 1.0 / 156.0};

// B_{2n} / (2n), the asymptotic series coefficients for digamma.
inline constexpr std::array<double, 7> digamma_tail = {
    1.0 / 12.0,  -1.0 / 120.0,      1.0 / 252.0, -1.0 / 240.0,
    1.0 / 132.0, -691.0 / 32760.0,  1.0 / 12.0};

}  // namespace detail

// Natural log of the gamma function for x > 0. Arguments below 10 are lifted
// with the recurrence Gamma(x+1) = x Gamma(x), then the Stirling series is
// truncated after the x^-13 term, whose successor is below 3e-17 at x = 10.
inline double log_gamma(double x) {
    if (!(x > 0.0)) {
        throw std::domain_error("log_gamma: argument must be positive, got " +
                                std::to_string(x));
    }
    double y = x;
    double shift = 1.0;
    while (y < 10.0) {
        shift *= y;
        y += 1.0;
    }
    const double r = 1.0 / (y * y);
    double tail = detail::log_gamma_tail[6];
    for (int i = 5; i >= 0; --i) tail = tail * r + detail::log_gamma_tail[i];
    constexpr double half_log_two_pi = 0.91893853320467274178032974;
    double value = (y - 0.5) * std::log(y) - y + half_log_two_pi + tail / y;
    if (shift != 1.0) value -= std::log(shift);
    return value;
}

// Digamma (logarithmic derivative of gamma) for x > 0. The argument is shifted
// above 6 with Psi(x+1) = Psi(x) + 1/x, then the asymptotic series is summed
// through the x^-14 term.
inline double digamma(double x) {
    if (!(x > 0.0)) {
        throw std::domain_error("digamma: argument must be positive, got " +
                                std::to_string(x));
    }
    double y = x;
    double shift = 0.0;
    while (y < 6.0) {
        shift += 1.0 / y;
        y += 1.0;
    }
    const double r = 1.0 / (y * y);
    double tail = detail::digamma_tail[6];
    for (int i = 5; i >= 0; --i) tail = tail * r + detail::digamma_tail[i];
    return std::log(y) - 0.5 / y - tail * r - shift;
}

// Regularized lower incomplete gamma P(s, x) = gamma(s, x) / Gamma(s), by the
// series for x < s + 1 and the Lentz continued fraction for the complement
// otherwise.
inline double regularized_lower_gamma(double s, double x) {
    if (!(s > 0.0)) {
        throw std::domain_error("regularized_lower_gamma: shape must be positive, got " +
                                std::to_string(s));
    }
    if (!(x >= 0.0)) {
        throw std::domain_error("regularized_lower_gamma: x must be non-negative, got " +
                                std::to_string(x));
    }
    if (x == 0.0) return 0.0;
    const double log_prefactor = s * std::log(x) - x - log_gamma(s);
    if (x < s + 1.0) {
        double term = 1.0 / s;
        double sum = term;
        for (int n = 1; n < 10000; ++n) {
            term *= x / (s + n);
            sum += term;
            if (term < sum * 1e-17) return sum * std::exp(log_prefactor);
        }
        throw std::domain_error("regularized_lower_gamma: series failed to converge");
    }
    constexpr double tiny = 1e-300;
    double b = x + 1.0 - s;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i < 10000; ++i) {
        const double an = -i * (i - s);
        b += 2.0;
        d = an * d + b;
        if (std::fabs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::fabs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double delta = d * c;
        h *= delta;
        if (std::fabs(delta - 1.0) < 1e-16) {
            return 1.0 - std::exp(log_prefactor) * h;
        }
    }
    throw std::domain_error("regularized_lower_gamma: continued fraction failed to converge");
}

// Test function phi(x) = (x^2/2)(3/2 - log x) with phi(0) = 0, together with
// its first four derivatives: phi' = x(1 - log x), phi'' = -log x,
// phi''' = -1/x, phi'''' = 1/x^2. Smooth on (0, inf), singular derivatives
// at the origin.
inline double test_phi(double x, int order) {
    if (order < 0 || order > 4) {
        throw std::domain_error("test_phi: order must be in 0..4, got " +
                                std::to_string(order));
    }
    if (!(x >= 0.0)) {
        throw std::domain_error("test_phi: x must be non-negative, got " +
                                std::to_string(x));
    }
    if (x == 0.0) {
        if (order == 0) return 0.0;
        throw std::domain_error("test_phi: derivatives are singular at x = 0");
    }
    const double lx = std::log(x);
    switch (order) {
        case 0: return 0.5 * x * x * (1.5 - lx);
        case 1: return x * (1.0 - lx);
        case 2: return -lx;
        case 3: return -1.0 / x;
        default: return 1.0 / (x * x);
    }
}

// The four envelopes bounding sup-norms of the unit-scale gamma density f_p
// and its derivatives:
//   G1(p) = sup f_p
//   G2(p) = sup |x f_p'|
//   G3(p) = sup |f_p'|          (p >= 2)
//   G4(p) part of the bound on sup |x^2 f_p'''|   (p >= 2)
enum class EnvelopeId { G1, G2, G3, G4 };

// Evaluates the requested envelope in log space to stay finite for large p.
inline double envelope(EnvelopeId id, double p) {
    if (!std::isfinite(p)) throw std::domain_error("envelope: p must be finite");
    switch (id) {
        case EnvelopeId::G1: {
            if (!(p >= 1.0)) throw std::domain_error("envelope: G1 needs p >= 1, got " + std::to_string(p));
            if (p == 1.0) return 1.0;
            const double q = p - 1.0;
            return std::exp(q * std::log(q) - q - log_gamma(p));
        }
        case EnvelopeId::G2: {
            if (!(p >= 1.0)) throw std::domain_error("envelope: G2 needs p >= 1, got " + std::to_string(p));
            const double m = p - 0.5 + 0.5 * std::sqrt(4.0 * p - 3.0);
            return std::exp((p - 0.5) * std::log(m) - m - log_gamma(p));
        }
        case EnvelopeId::G3: {
            if (!(p >= 2.0)) throw std::domain_error("envelope: G3 needs p >= 2, got " + std::to_string(p));
            if (p == 2.0) return 1.0;
            const double s = std::sqrt(p - 1.0);
            return std::exp((p - 2.0) * std::log(s - 1.0) + (p - 1.0) * std::log(s) -
                            (p - 1.0 - s) - log_gamma(p));
        }
        default: {
            if (!(p >= 2.0)) throw std::domain_error("envelope: G4 needs p >= 2, got " + std::to_string(p));
            if (p == 2.0) return 1.0;
            const double u = std::sqrt(3.0 * p - 2.0);
            return std::exp((p - 2.0) * std::log(p - u) + 3.0 * std::log(u - 1.0) -
                            (p - u) - log_gamma(p));
        }
    }
}

// Unit-scale gamma density f_p(x) = x^(p-1) e^-x / Gamma(p).
inline double gamma_density(double p, double x) {
    if (!(p > 0.0)) throw std::domain_error("gamma_density: shape must be positive");
    if (!(x >= 0.0)) throw std::domain_error("gamma_density: x must be non-negative");
    if (x == 0.0) {
        if (p > 1.0) return 0.0;
        if (p == 1.0) return 1.0;
        return std::numeric_limits<double>::infinity();
    }
    return std::exp((p - 1.0) * std::log(x) - x - log_gamma(p));
}

// n-th derivative of the unit-scale gamma density, via the closed polynomial
// form f_p^(n)(x) = e^-x x^(p-n-1) / Gamma(p) *
//                   sum_{i=0}^{n} C(n,i) (-1)^i [prod_{j=1}^{n-i} (p-j)] x^i.
inline double gamma_density_derivative(double p, int order, double x) {
    if (!(p > 0.0)) throw std::domain_error("gamma_density_derivative: shape must be positive");
    if (!(x > 0.0)) throw std::domain_error("gamma_density_derivative: x must be positive");
    if (order < 0) throw std::domain_error("gamma_density_derivative: order must be non-negative");
    double sum = 0.0;
    double binom = 1.0;
    double sign = 1.0;
    double xpow = 1.0;
    for (int i = 0; i <= order; ++i) {
        double falling = 1.0;
        for (int j = 1; j <= order - i; ++j) falling *= p - j;
        sum += binom * sign * falling * xpow;
        binom = binom * (order - i) / (i + 1.0);
        sign = -sign;
        xpow *= x;
    }
    return std::exp(-x + (p - order - 1.0) * std::log(x) - log_gamma(p)) * sum;
}

}  // namespace lsgrid
