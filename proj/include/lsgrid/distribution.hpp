#pragma once

// Operations on distribution specs: validation, exact cdfs where closed
// forms exist, and the lattice pmf of the discretized transform, which is
// the input every approximant is built from.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <variant>
#include <vector>

#include "lsgrid/distribution_types.hpp"
#include "lsgrid/errors.hpp"
#include "lsgrid/lattice_pmf.hpp"
#include "lsgrid/panjer.hpp"
#include "lsgrid/phase_type.hpp"
#include "lsgrid/special_functions.hpp"

namespace lsgrid {

namespace detail {

inline void validate_impl(const DistributionSpec& spec, bool allow_compound) {
    std::visit(
        overloaded{
            [](const Exponential& e) {
                if (!(e.rate > 0.0) || !std::isfinite(e.rate)) {
                    throw std::invalid_argument("exponential: rate must be positive and finite");
                }
            },
            [](const Gamma& g) {
                if (!(g.a > 0.0) || !std::isfinite(g.a)) {
                    throw std::invalid_argument("gamma: rate a must be positive and finite");
                }
                if (!(g.p > 0.0) || !std::isfinite(g.p)) {
                    throw std::invalid_argument("gamma: shape p must be positive and finite");
                }
            },
            [](const ErlangMixture& mix) {
                if (!(mix.zero_mass >= 0.0 && mix.zero_mass <= 1.0)) {
                    throw std::invalid_argument("erlang mixture: zero mass must lie in [0, 1]");
                }
                if (!(mix.truncated_mass >= 0.0 && mix.truncated_mass <= 1.0)) {
                    throw std::invalid_argument("erlang mixture: truncated mass must lie in [0, 1]");
                }
                double total = mix.zero_mass + mix.truncated_mass;
                double prev_a = 0.0;
                int prev_j = 0;
                bool first = true;
                for (const ErlangComponent& comp : mix.components) {
                    if (!(comp.a > 0.0) || !std::isfinite(comp.a)) {
                        throw std::invalid_argument("erlang mixture: component rate must be positive");
                    }
                    if (comp.j < 1) {
                        throw std::invalid_argument("erlang mixture: component shape must be at least 1");
                    }
                    if (!(comp.w >= 0.0) || !std::isfinite(comp.w)) {
                        throw std::invalid_argument("erlang mixture: component weight must be non-negative");
                    }
                    if (!first && !(comp.a > prev_a || (comp.a == prev_a && comp.j > prev_j))) {
                        throw std::invalid_argument(
                            "erlang mixture: components must be sorted by strictly increasing (rate, shape)");
                    }
                    first = false;
                    prev_a = comp.a;
                    prev_j = comp.j;
                    total += comp.w;
                }
                if (std::fabs(total - 1.0) > 1e-12) {
                    throw std::invalid_argument("erlang mixture: weights must sum to 1");
                }
            },
            [](const PhaseTypeRep& rep) { validate(rep); },
            [&](const GeometricExpCompound& g) {
                if (!allow_compound) {
                    throw std::invalid_argument("compound: summand may not itself be a compound");
                }
                if (!(g.p > 0.0 && g.p < 1.0)) {
                    throw std::invalid_argument("geometric-exponential compound: p must lie in (0, 1)");
                }
            },
            [&](const Compound& c) {
                if (!allow_compound) {
                    throw std::invalid_argument("compound: summand may not itself be a compound");
                }
                validate(c.counting);
                if (!c.summand) throw std::invalid_argument("compound: summand is missing");
                if (const ErlangMixture* mix = std::get_if<ErlangMixture>(c.summand.get())) {
                    if (mix->truncated_mass > 1e-12) {
                        throw std::invalid_argument("compound: summand must be a proper distribution");
                    }
                }
                validate_impl(*c.summand, false);
            }},
        spec);
}

}  // namespace detail

inline void validate(const DistributionSpec& spec) { detail::validate_impl(spec, true); }

// Total probability carried by the spec; below 1 only for a mixture with
// declared truncated mass.
inline double total_mass(const DistributionSpec& spec) {
    if (const ErlangMixture* mix = std::get_if<ErlangMixture>(&spec)) {
        return 1.0 - mix->truncated_mass;
    }
    return 1.0;
}

inline double mass_at_zero(const DistributionSpec& spec) {
    return std::visit(detail::overloaded{
                          [](const Exponential&) { return 0.0; },
                          [](const Gamma&) { return 0.0; },
                          [](const ErlangMixture& mix) { return mix.zero_mass; },
                          [](const PhaseTypeRep& rep) { return ph_atom_at_zero(rep); },
                          [](const GeometricExpCompound& g) { return g.p; },
                          [](const Compound& c) {
                              return counting_pgf(c.counting, mass_at_zero(*c.summand));
                          }},
                      spec);
}

// Whether cdf() below has a closed form for this spec.
inline bool has_exact_cdf(const DistributionSpec& spec) {
    if (const Compound* c = std::get_if<Compound>(&spec)) {
        return c->summand != nullptr && std::holds_alternative<Geometric>(c->counting) &&
               std::holds_alternative<Exponential>(*c->summand);
    }
    return true;
}

// Exact cdf at x >= 0. Defective mixtures converge to 1 - truncated_mass.
inline double cdf(const DistributionSpec& spec, double x) {
    if (!(x >= 0.0)) throw std::domain_error("cdf: x must be non-negative");
    return std::visit(
        detail::overloaded{
            [&](const Exponential& e) { return -std::expm1(-e.rate * x); },
            [&](const Gamma& g) { return regularized_lower_gamma(g.p, g.a * x); },
            [&](const ErlangMixture& mix) {
                double acc = mix.zero_mass;
                for (const ErlangComponent& comp : mix.components) {
                    if (comp.w == 0.0) continue;
                    acc += comp.w * regularized_lower_gamma(static_cast<double>(comp.j), comp.a * x);
                }
                return acc;
            },
            [&](const PhaseTypeRep& rep) { return ph_cdf(rep, x); },
            [&](const GeometricExpCompound& g) {
                return g.p - (1.0 - g.p) * std::expm1(-g.p * x);
            },
            [&](const Compound& c) -> double {
                const Geometric* geo = std::get_if<Geometric>(&c.counting);
                const Exponential* exp_summand = std::get_if<Exponential>(c.summand.get());
                if (geo == nullptr || exp_summand == nullptr) {
                    throw std::domain_error(
                        "cdf: closed form for a compound needs a geometric count of exponentials");
                }
                return geo->p - (1.0 - geo->p) * std::expm1(-geo->p * exp_summand->rate * x);
            }},
        spec);
}

namespace detail {

// Gamma(rate a, shape p): atoms follow the negative-binomial recurrence
// d_0 = (a/(a+t))^p, d_{k+1} = d_k (p+k)/(k+1) t/(a+t).
inline LatticePmf gamma_ls_pmf(double a, double p, double t, const TruncationPolicy& policy,
                               std::size_t min_len) {
    LatticePmf out;
    out.t = t;
    const double ratio = t / (a + t);
    double d = std::pow(a / (a + t), p);
    out.masses.push_back(d);
    double cum = d;
    while ((1.0 - cum > policy.tail_tol || out.masses.size() < min_len) &&
           out.masses.size() < policy.k_max) {
        const double k = static_cast<double>(out.masses.size()) - 1.0;
        d *= (p + k) / (k + 1.0) * ratio;
        out.masses.push_back(d);
        cum += d;
    }
    if (1.0 - cum > policy.tail_tol) throw numeric_error("lattice pmf: truncation budget exceeded");
    out.tail_mass = std::max(0.0, 1.0 - cum);
    return out;
}

inline LatticePmf mixture_ls_pmf(const ErlangMixture& mix, double t, const TruncationPolicy& policy,
                                 std::size_t min_len) {
    LatticePmf out;
    out.t = t;
    struct Running {
        double d;
        double ratio;
        double j;
        double w;
    };
    std::vector<Running> comps;
    comps.reserve(mix.components.size());
    double first = mix.zero_mass;
    for (const ErlangComponent& comp : mix.components) {
        if (comp.w == 0.0) continue;
        Running r{std::pow(comp.a / (comp.a + t), static_cast<double>(comp.j)), t / (comp.a + t),
                  static_cast<double>(comp.j), comp.w};
        first += comp.w * r.d;
        comps.push_back(r);
    }
    out.masses.push_back(first);
    double cum = first;
    const double target = 1.0 - mix.truncated_mass;
    while ((target - cum > policy.tail_tol || out.masses.size() < min_len) &&
           out.masses.size() < policy.k_max) {
        const double k = static_cast<double>(out.masses.size()) - 1.0;
        double m = 0.0;
        for (Running& r : comps) {
            r.d *= (r.j + k) / (k + 1.0) * r.ratio;
            m += r.w * r.d;
        }
        out.masses.push_back(m);
        cum += m;
    }
    if (target - cum > policy.tail_tol) throw numeric_error("lattice pmf: truncation budget exceeded");
    out.tail_mass = std::max(0.0, 1.0 - cum);
    return out;
}

// Geometric(p) compound of unit exponentials in closed form:
// d_0 = p + (1-p) p/(p+t), and geometrically decaying atoms after that.
inline LatticePmf geo_exp_ls_pmf(double p, double t, const TruncationPolicy& policy,
                                 std::size_t min_len) {
    LatticePmf out;
    out.t = t;
    const double ratio = t / (p + t);
    double d = p + (1.0 - p) * p / (p + t);
    out.masses.push_back(d);
    double cum = d;
    d = (1.0 - p) * p * t / ((p + t) * (p + t));
    while ((1.0 - cum > policy.tail_tol || out.masses.size() < min_len) &&
           out.masses.size() < policy.k_max) {
        out.masses.push_back(d);
        cum += d;
        d *= ratio;
    }
    if (1.0 - cum > policy.tail_tol) throw numeric_error("lattice pmf: truncation budget exceeded");
    out.tail_mass = std::max(0.0, 1.0 - cum);
    return out;
}

LatticePmf ls_pmf_ext(const DistributionSpec& spec, double t, const TruncationPolicy& policy,
                      std::size_t min_len);

// General compounds: build the summand lattice long enough that the Panjer
// output converges, growing the summand range until the compound tail is
// inside tolerance.
inline LatticePmf compound_ls_pmf(const Compound& c, double t, const TruncationPolicy& policy,
                                  std::size_t min_len) {
    std::size_t want = std::max<std::size_t>(min_len, 256);
    // The recursion stops once it is within tolerance of the mass reachable
    // from a truncated summand, so it runs at half tolerance; the other half
    // absorbs the summand truncation itself.
    TruncationPolicy inner = policy;
    inner.tail_tol = policy.tail_tol / 2.0;
    for (;;) {
        const LatticePmf f = ls_pmf_ext(*c.summand, t, inner, std::min(want, policy.k_max));
        LatticePmf g = panjer_compound_ext(c.counting, f, inner, min_len);
        if (g.tail_mass <= policy.tail_tol && g.masses.size() >= min_len) return g;
        if (want >= policy.k_max) {
            throw numeric_error("compound lattice pmf: truncation budget exceeded");
        }
        want *= 4;
    }
}

inline LatticePmf ls_pmf_ext(const DistributionSpec& spec, double t, const TruncationPolicy& policy,
                             std::size_t min_len) {
    if (!(t > 0.0) || !std::isfinite(t)) {
        throw std::invalid_argument("lattice pmf: t must be positive and finite");
    }
    return std::visit(
        overloaded{[&](const Exponential& e) { return gamma_ls_pmf(e.rate, 1.0, t, policy, min_len); },
                   [&](const Gamma& g) { return gamma_ls_pmf(g.a, g.p, t, policy, min_len); },
                   [&](const ErlangMixture& mix) { return mixture_ls_pmf(mix, t, policy, min_len); },
                   [&](const PhaseTypeRep& rep) { return ph_ls_pmf_ext(rep, t, policy, min_len); },
                   [&](const GeometricExpCompound& g) {
                       return geo_exp_ls_pmf(g.p, t, policy, min_len);
                   },
                   [&](const Compound& c) { return compound_ls_pmf(c, t, policy, min_len); }},
        spec);
}

}  // namespace detail

// Lattice pmf of the discretized transform: atom k holds
// ((-t)^k / k!) phi^{(k)}(t) for the spec's transform phi, so the cumulative
// sums give the grid discretization of the cdf.
inline LatticePmf ls_pmf(const DistributionSpec& spec, double t, const TruncationPolicy& policy = {}) {
    validate(spec);
    return detail::ls_pmf_ext(spec, t, policy, 0);
}

}  // namespace lsgrid
