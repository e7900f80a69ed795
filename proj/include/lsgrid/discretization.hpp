#pragma once

// Step-function discretizations on the grid {k/t}: the transform-based
// lattice cdf and the round-down comparator built from exact cdfs.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <variant>

#include "lsgrid/distribution.hpp"
#include "lsgrid/lattice_pmf.hpp"
#include "lsgrid/panjer.hpp"

namespace lsgrid {

// Step cdf whose value on [k/t, (k+1)/t) is the cumulative transform mass
// through atom k.
inline StepCdf lattice_step_cdf(const DistributionSpec& spec, double t,
                                const TruncationPolicy& policy = {}) {
    return to_step_cdf(ls_pmf(spec, t, policy));
}

// Single evaluation convenience: builds enough atoms to cover floor(t x).
inline double lattice_cdf(const DistributionSpec& spec, double t, double x,
                          const TruncationPolicy& policy = {}) {
    if (!(x >= 0.0)) throw std::domain_error("lattice cdf: x must be non-negative");
    validate(spec);
    const double u = t * x;
    std::size_t need = 0;
    if (u >= static_cast<double>(policy.k_max)) {
        need = policy.k_max;
    } else {
        need = static_cast<std::size_t>(u) + 1;
    }
    const LatticePmf pmf = detail::ls_pmf_ext(spec, t, policy, std::min(need, policy.k_max));
    return to_step_cdf(pmf).value(x);
}

namespace detail {

// Pmf of [t X]/t for a spec with a closed-form cdf: mass k is
// F((k+1)/t) - F(k/t) with the atom at zero folded into mass 0.
inline LatticePmf round_down_pmf_ext(const DistributionSpec& spec, double t,
                                     const TruncationPolicy& policy, std::size_t min_len) {
    if (!(t > 0.0) || !std::isfinite(t)) {
        throw std::invalid_argument("round-down pmf: t must be positive and finite");
    }
    if (!has_exact_cdf(spec)) {
        throw std::domain_error("round-down pmf: spec has no closed-form cdf");
    }
    LatticePmf out;
    out.t = t;
    out.provenance = LatticeProvenance::rounding;
    const double target = total_mass(spec);
    double prev = cdf(spec, 1.0 / t);
    out.masses.push_back(prev);
    double cum = prev;
    while ((target - cum > policy.tail_tol || out.masses.size() < min_len) &&
           out.masses.size() < policy.k_max) {
        const double next =
            cdf(spec, static_cast<double>(out.masses.size() + 1) / t);
        double m = next - prev;
        if (m < 0.0) m = 0.0;
        out.masses.push_back(m);
        cum += m;
        prev = next;
    }
    if (target - cum > policy.tail_tol) throw numeric_error("round-down pmf: truncation budget exceeded");
    out.tail_mass = std::max(0.0, 1.0 - cum);
    return out;
}

}  // namespace detail

inline LatticePmf round_down_pmf(const DistributionSpec& spec, double t,
                                 const TruncationPolicy& policy = {}) {
    validate(spec);
    return detail::round_down_pmf_ext(spec, t, policy, 0);
}

// Whether the rounding comparator below is available: either the spec's own
// cdf is closed-form, or it is a compound whose summand has one.
inline bool has_rounding_cdf(const DistributionSpec& spec) {
    if (const Compound* c = std::get_if<Compound>(&spec)) {
        return c->summand != nullptr && has_exact_cdf(*c->summand);
    }
    return has_exact_cdf(spec);
}

// Step cdf of the rounded-down variable. For a compound, each summand is
// rounded down individually before summing, so the result is the Panjer
// compound of the rounded summand pmf.
inline StepCdf rounding_step_cdf(const DistributionSpec& spec, double t,
                                 const TruncationPolicy& policy = {}) {
    validate(spec);
    if (const GeometricExpCompound* g = std::get_if<GeometricExpCompound>(&spec)) {
        const DistributionSpec unit = Exponential{1.0};
        std::size_t want = 256;
        for (;;) {
            const LatticePmf f = detail::round_down_pmf_ext(unit, t, policy, std::min(want, policy.k_max));
            LatticePmf out = detail::panjer_compound_ext(Geometric{g->p}, f, policy, 0);
            if (out.tail_mass <= policy.tail_tol) return to_step_cdf(out);
            if (want >= policy.k_max) throw numeric_error("rounding cdf: truncation budget exceeded");
            want *= 4;
        }
    }
    if (const Compound* c = std::get_if<Compound>(&spec)) {
        std::size_t want = 256;
        for (;;) {
            const LatticePmf f =
                detail::round_down_pmf_ext(*c->summand, t, policy, std::min(want, policy.k_max));
            LatticePmf out = detail::panjer_compound_ext(c->counting, f, policy, 0);
            if (out.tail_mass <= policy.tail_tol) return to_step_cdf(out);
            if (want >= policy.k_max) throw numeric_error("rounding cdf: truncation budget exceeded");
            want *= 4;
        }
    }
    return to_step_cdf(round_down_pmf(spec, t, policy));
}

}  // namespace lsgrid
