#pragma once

// Verification-only machinery: reproducible gamma-process Monte Carlo for
// the operator's expectation representation, deterministic quadrature for
// the same expectations, and the closed form of the operator applied to the
// test function. The approximation path never calls into this header.

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <random>
#include <stdexcept>

#include "lsgrid/errors.hpp"
#include "lsgrid/special_functions.hpp"

namespace lsgrid {

struct McEstimate {
    double mean = 0.0;
    double std_error = 0.0;  // sample standard deviation over sqrt(n)
    std::size_t n = 0;
    std::uint64_t seed = 0;
};

// Gamma-variate sampler with a pinned algorithm so a given seed reproduces
// the same stream everywhere: 64-bit Mersenne Twister uniforms, polar-method
// normals, Marsaglia-Tsang acceptance for shape >= 1, and the power boost
// for shape < 1.
class GammaSampler {
public:
    explicit GammaSampler(std::uint64_t seed) : eng_(seed) {}

    double uniform() {
        // 53-bit uniform in (0,1); exact zeros are rejected so logs stay finite
        for (;;) {
            const double u = static_cast<double>(eng_() >> 11) * 0x1.0p-53;
            if (u > 0.0) return u;
        }
    }

    double normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        for (;;) {
            const double a = 2.0 * uniform() - 1.0;
            const double b = 2.0 * uniform() - 1.0;
            const double s = a * a + b * b;
            if (s > 0.0 && s < 1.0) {
                const double m = std::sqrt(-2.0 * std::log(s) / s);
                spare_ = b * m;
                have_spare_ = true;
                return a * m;
            }
        }
    }

    double draw(double shape) {
        if (!(shape > 0.0)) throw std::domain_error("gamma sampler: shape must be positive");
        if (shape < 1.0) {
            const double u = uniform();
            return draw(shape + 1.0) * std::pow(u, 1.0 / shape);
        }
        const double d = shape - 1.0 / 3.0;
        const double c = 1.0 / (3.0 * std::sqrt(d));
        for (;;) {
            const double z = normal();
            const double v = 1.0 + c * z;
            if (v <= 0.0) continue;
            const double v3 = v * v * v;
            const double u = uniform();
            if (u < 1.0 - 0.0331 * z * z * z * z) return d * v3;
            if (std::log(u) < 0.5 * z * z + d * (1.0 - v3 + std::log(v3))) return d * v3;
        }
    }

private:
    std::mt19937_64 eng_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

// Monte Carlo estimate of E g(S(t x)/t) with S(u) a gamma(shape u) variate.
// Passing x = (k+1)/t turns this into the step-cdf representation at k/t.
inline McEstimate lt_operator_mc(const std::function<double(double)>& g, double t, double x,
                                 std::size_t n, std::uint64_t seed) {
    if (!(t > 0.0) || !(x > 0.0)) {
        throw std::domain_error("operator monte carlo: t and x must be positive");
    }
    if (n == 0) throw std::domain_error("operator monte carlo: n must be positive");
    GammaSampler sampler(seed);
    const double shape = t * x;
    double mean = 0.0;
    double sq_sum = 0.0;  // running sum of squared deviations (Welford)
    for (std::size_t i = 1; i <= n; ++i) {
        const double v = g(sampler.draw(shape) / t);
        const double delta = v - mean;
        mean += delta / static_cast<double>(i);
        sq_sum += delta * (v - mean);
    }
    McEstimate est;
    est.mean = mean;
    est.std_error =
        n > 1 ? std::sqrt(sq_sum / (static_cast<double>(n - 1) * static_cast<double>(n))) : 0.0;
    est.n = n;
    est.seed = seed;
    return est;
}

// Closed form of the operator applied to the test function:
// (1/2t^2) (3(tx)^2/2 - tx/2 - 1 + tx(tx+1)(log t - digamma(tx))).
inline double lt_phi_closed(double t, double x) {
    if (!(t > 0.0) || !(x > 0.0)) {
        throw std::domain_error("operator test-function closed form: t and x must be positive");
    }
    const double u = t * x;
    return (1.5 * u * u - 0.5 * u - 1.0 + u * (u + 1.0) * (std::log(t) - digamma(u))) /
           (2.0 * t * t);
}

namespace detail {

// 15-point Kronrod nodes/weights with the embedded 7-point Gauss rule.
inline constexpr double kronrod_nodes[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144838258730, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.0};
inline constexpr double kronrod_weights[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr double gauss_weights[4] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

template <class F>
inline double gauss_kronrod_15(F&& f, double a, double b, double& err) {
    const double center = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    const double fc = f(center);
    double kron = kronrod_weights[7] * fc;
    double gauss = gauss_weights[3] * fc;
    for (int i = 0; i < 7; ++i) {
        const double pair = f(center - half * kronrod_nodes[i]) + f(center + half * kronrod_nodes[i]);
        kron += kronrod_weights[i] * pair;
        if (i % 2 == 1) gauss += gauss_weights[i / 2] * pair;
    }
    kron *= half;
    gauss *= half;
    err = std::fabs(kron - gauss);
    return kron;
}

template <class F>
inline double adaptive_quadrature(F&& f, double a, double b, double tol, int depth) {
    double err = 0.0;
    const double v = gauss_kronrod_15(f, a, b, err);
    if (err <= tol) return v;
    if (depth >= 60) throw numeric_error("quadrature: tolerance not reached");
    const double mid = 0.5 * (a + b);
    return adaptive_quadrature(f, a, mid, 0.5 * tol, depth + 1) +
           adaptive_quadrature(f, mid, b, 0.5 * tol, depth + 1);
}

}  // namespace detail

// Deterministic oracle for E g(S(shape)/divisor), by adaptive quadrature
// against the gamma density. The integral splits at 1 and at a far point M;
// [0,1] uses a power substitution that absorbs the x^{shape-1} endpoint,
// [M, infinity) is mapped to [0,1).
inline double expectation_quadrature(const std::function<double(double)>& g, double shape,
                                     double divisor) {
    if (!(shape > 0.0) || !std::isfinite(shape)) {
        throw std::domain_error("expectation quadrature: shape must be positive and finite");
    }
    if (!(divisor > 0.0) || !std::isfinite(divisor)) {
        throw std::domain_error("expectation quadrature: divisor must be positive and finite");
    }
    const double lg = log_gamma(shape);
    const auto weighted = [&](double u) {
        return std::exp((shape - 1.0) * std::log(u) - u - lg) * g(u / divisor);
    };
    const double tol = 1e-10 / 4.0;

    const double q = std::max(2.0, std::ceil(1.0 / shape));
    const auto near_zero = [&](double w) {
        const double u = std::pow(w, q);
        return q * std::exp((q * shape - 1.0) * std::log(w) - u - lg) * g(u / divisor);
    };
    const double head = detail::adaptive_quadrature(near_zero, 0.0, 1.0, tol, 0);

    const double far = shape + 10.0 * std::sqrt(shape + 1.0) + 10.0;
    const double middle = detail::adaptive_quadrature(weighted, 1.0, far, tol, 0);

    const auto tail_map = [&](double v) {
        const double rem = 1.0 - v;
        if (rem <= 0.0) return 0.0;
        return weighted(far + v / rem) / (rem * rem);
    };
    const double tail = detail::adaptive_quadrature(tail_map, 0.0, 1.0, tol, 0);

    return head + middle + tail;
}

}  // namespace lsgrid
