#pragma once

// A-priori uniform sup-norm error certificates for the accelerated
// approximant. All bounds have the shape (constant from norm inputs) / t^2,
// so doubling t divides a certificate by exactly 4.

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "lsgrid/distribution.hpp"
#include "lsgrid/distribution_types.hpp"
#include "lsgrid/phase_type.hpp"

namespace lsgrid {

// Which certificate produced a bound. Tags name the role of the result:
// the two richardson_* variants are the generic smooth-function bounds, the
// rest are family-specific specializations of them.
enum class BoundSource {
    richardson_step,          // step operator on smooth g
    richardson_interpolated,  // adds the interpolation term
    exponential,              // unit-exponential cdf specialization
    gamma,                    // gamma cdf, shape 1 or >= 2, any rate
    erlang_mixture,           // weighted combination over mixture components
    compound,                 // random sum, largest summand rate
};

struct ErrorCertificate {
    double bound = 0.0;
    BoundSource source = BoundSource::richardson_interpolated;
    double t = 1.0;
    std::vector<std::pair<std::string, double>> inputs;  // echo of norms/parameters used
};

// Certificate constant for gamma cdfs with shape >= 2: 17/12 + 27/(16e).
inline double gamma_certificate_constant() {
    return 17.0 / 12.0 + 27.0 / (16.0 * std::numbers::e);
}

// Certificate constant for the unit exponential cdf: 1/8 + 1/(6e) + 9/(4e^2).
inline double exponential_certificate_constant() {
    const double e = std::numbers::e;
    return 1.0 / 8.0 + 1.0 / (6.0 * e) + 9.0 / (4.0 * e * e);
}

namespace detail {

inline void check_bound_t(double t) {
    if (!(t > 0.0) || !std::isfinite(t)) {
        throw std::domain_error("error certificate: t must be positive and finite");
    }
}

}  // namespace detail

// Generic smooth-function bound from the three norm inputs: the step form is
// (1/6)|x g'''| + (9/16)|x^2 g''''| over t^2; the interpolated form adds
// (1/8)|g''| / t^2.
inline ErrorCertificate bound_general(double norm_g2, double norm_xg3, double norm_x2g4, double t,
                                      bool interpolated) {
    if (!(norm_g2 >= 0.0) || !(norm_xg3 >= 0.0) || !(norm_x2g4 >= 0.0)) {
        throw std::domain_error("error certificate: norms must be non-negative");
    }
    detail::check_bound_t(t);
    const double c = (interpolated ? norm_g2 / 8.0 : 0.0) + norm_xg3 / 6.0 + 9.0 * norm_x2g4 / 16.0;
    ErrorCertificate cert;
    cert.bound = c / (t * t);
    cert.source = interpolated ? BoundSource::richardson_interpolated : BoundSource::richardson_step;
    cert.t = t;
    cert.inputs = {{"norm_g2", norm_g2}, {"norm_xg3", norm_xg3}, {"norm_x2g4", norm_x2g4}};
    return cert;
}

// Certificate for a gamma cdf with rate a. Covered shapes are p = 1 and
// p >= 2; the rate enters through the scale transfer rule, so the bound is
// the unit-rate constant at the effective scale t/a.
inline ErrorCertificate bound_gamma(double p, double a, double t) {
    if (!(a > 0.0) || !std::isfinite(a)) {
        throw std::domain_error("error certificate: rate a must be positive and finite");
    }
    detail::check_bound_t(t);
    if (!(p == 1.0 || p >= 2.0)) {
        throw std::domain_error("error certificate: gamma shape must be 1 or at least 2");
    }
    const double c = (p == 1.0) ? exponential_certificate_constant() : gamma_certificate_constant();
    const double teff = t / a;
    ErrorCertificate cert;
    cert.bound = c / (teff * teff);
    cert.source = (p == 1.0) ? BoundSource::exponential : BoundSource::gamma;
    cert.t = t;
    cert.inputs = {{"p", p}, {"a", a}};
    return cert;
}

// Certificate for an Erlang mixture: the shape->=2 constant times
// sum of weight * rate^2 over components, over t^2. The shape->=2 constant
// is used for Erlang-1 components too, since it dominates the exponential
// constant.
inline ErrorCertificate bound_mixture(const ErlangMixture& mix, double t) {
    validate(DistributionSpec{mix});
    detail::check_bound_t(t);
    double weighted = 0.0;
    for (const ErlangComponent& comp : mix.components) weighted += comp.w * comp.a * comp.a;
    ErrorCertificate cert;
    cert.bound = (gamma_certificate_constant() * weighted) / (t * t);
    cert.source = BoundSource::erlang_mixture;
    cert.t = t;
    cert.inputs = {{"sum_w_a2", weighted}};
    return cert;
}

// Certificate for a random sum whose summand is an Erlang mixture: the
// largest summand rate and the compound's own mass at zero q0 are all the
// bound needs.
inline ErrorCertificate bound_compound(const ErlangMixture& summand, double q0, double t) {
    validate(DistributionSpec{summand});
    if (!(q0 >= 0.0 && q0 <= 1.0)) {
        throw std::domain_error("error certificate: q0 must be a probability");
    }
    detail::check_bound_t(t);
    double a_max = 0.0;
    for (const ErlangComponent& comp : summand.components) a_max = std::max(a_max, comp.a);
    ErrorCertificate cert;
    cert.bound = (gamma_certificate_constant() * (1.0 - q0) * a_max * a_max) / (t * t);
    cert.source = BoundSource::compound;
    cert.t = t;
    cert.inputs = {{"q0", q0}, {"a_max", a_max}};
    return cert;
}

namespace detail {

// Rewrites a compound summand as an Erlang mixture where possible.
inline ErlangMixture summand_as_mixture(const DistributionSpec& spec, double expansion_epsilon) {
    return std::visit(
        overloaded{
            [](const Exponential& e) {
                return ErlangMixture{0.0, {ErlangComponent{e.rate, 1, 1.0}}, 0.0};
            },
            [](const Gamma& g) {
                const double rounded = std::floor(g.p);
                if (g.p != rounded || g.p < 1.0 || g.p > 2147483647.0) {
                    throw std::domain_error(
                        "error certificate: compound summand gamma shape must be a positive integer");
                }
                return ErlangMixture{0.0, {ErlangComponent{g.a, static_cast<int>(rounded), 1.0}}, 0.0};
            },
            [](const ErlangMixture& m) { return m; },
            [&](const PhaseTypeRep& rep) {
                return maier_expand(rep, default_expansion_rate(rep), expansion_epsilon);
            },
            [](const GeometricExpCompound&) -> ErlangMixture {
                throw std::domain_error("error certificate: compound summand may not be a compound");
            },
            [](const Compound&) -> ErlangMixture {
                throw std::domain_error("error certificate: compound summand may not be a compound");
            }},
        spec);
}

}  // namespace detail

// Routes a spec to the certificate that covers it. Phase-type specs are
// expanded into an Erlang mixture first (default rate, the given epsilon),
// so their certificate applies to the expanded mixture.
inline ErrorCertificate bound_for_spec(const DistributionSpec& spec, double t,
                                       double expansion_epsilon = 1e-10) {
    validate(spec);
    return std::visit(
        detail::overloaded{
            [&](const Exponential& e) { return bound_gamma(1.0, e.rate, t); },
            [&](const Gamma& g) { return bound_gamma(g.p, g.a, t); },
            [&](const ErlangMixture& mix) { return bound_mixture(mix, t); },
            [&](const PhaseTypeRep& rep) {
                return bound_mixture(maier_expand(rep, default_expansion_rate(rep), expansion_epsilon),
                                     t);
            },
            [&](const GeometricExpCompound& g) {
                const ErlangMixture unit{0.0, {ErlangComponent{1.0, 1, 1.0}}, 0.0};
                return bound_compound(unit, g.p, t);
            },
            [&](const Compound& c) {
                const ErlangMixture mix = detail::summand_as_mixture(*c.summand, expansion_epsilon);
                const double q0 = counting_pgf(c.counting, mass_at_zero(*c.summand));
                return bound_compound(mix, q0, t);
            }},
        spec);
}

}  // namespace lsgrid
