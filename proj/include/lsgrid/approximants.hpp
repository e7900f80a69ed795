#pragma once

// The accelerated interpolated approximant: knot k/t carries the Richardson
// combination 2 L_{2t}*F((2k-1)/(2t)) - L_t*F((k-1)/t), with knot 0 pinned
// to F(0), and linear interpolation in between. Also the Post-Widder and
// Stehfest-2 inversion comparators.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "lsgrid/discretization.hpp"
#include "lsgrid/distribution.hpp"
#include "lsgrid/lattice_pmf.hpp"

namespace lsgrid {

// Piecewise-linear cdf approximant with knots at k/t. Knot values are raw
// Richardson combinations and may exit [0,1] by O(1/t^2); clamping happens
// only at evaluation time, behind an explicit flag, so convergence
// measurements see the raw operator.
struct ApproximantCdf {
    double t = 1.0;
    std::vector<double> knot_values;
    double tail_mass = 0.0;

    double value(double x, bool clamp = false) const {
        if (knot_values.empty()) throw std::invalid_argument("approximant cdf: no knots");
        if (!(x >= 0.0)) throw std::domain_error("approximant cdf: x must be non-negative");
        double v;
        const double u = t * x;
        const std::size_t last = knot_values.size() - 1;
        if (u >= static_cast<double>(last)) {
            v = knot_values[last];
        } else {
            const std::size_t i = static_cast<std::size_t>(u);
            const double frac = u - static_cast<double>(i);
            v = (1.0 - frac) * knot_values[i] + frac * knot_values[i + 1];
        }
        if (clamp) v = std::min(1.0, std::max(0.0, v));
        return v;
    }
};

namespace detail {

// Shared-lattice knot computation: knot k needs cumulative index k-1 at
// scale t and index 2k-1 at scale 2t.
inline double m2_knot(const DistributionSpec& spec, const StepCdf& at_t, const StepCdf& at_2t,
                      std::size_t k) {
    if (k == 0) return mass_at_zero(spec);
    return 2.0 * at_2t.at_index(2 * k - 1) - at_t.at_index(k - 1);
}

}  // namespace detail

// Single Richardson knot value M at k/t; not clamped.
inline double m2_grid(const DistributionSpec& spec, double t, std::size_t k,
                      const TruncationPolicy& policy = {}) {
    validate(spec);
    if (k == 0) return mass_at_zero(spec);
    const std::size_t len_t = std::min(k, policy.k_max);
    const std::size_t len_2t = std::min(2 * k, policy.k_max);
    const StepCdf at_t = to_step_cdf(detail::ls_pmf_ext(spec, t, policy, len_t));
    const StepCdf at_2t = to_step_cdf(detail::ls_pmf_ext(spec, 2.0 * t, policy, len_2t));
    return detail::m2_knot(spec, at_t, at_2t, k);
}

// Accelerated value at arbitrary x >= 0 by linear interpolation between the
// two neighbouring knots; exact at grid points.
inline double m2_eval(const DistributionSpec& spec, double t, double x,
                      const TruncationPolicy& policy = {}, bool clamp = false) {
    validate(spec);
    if (!(x >= 0.0)) throw std::domain_error("accelerated approximant: x must be non-negative");
    const double u = t * x;
    std::size_t i;
    if (u >= static_cast<double>(policy.k_max)) {
        i = policy.k_max - 1;
    } else {
        i = static_cast<std::size_t>(u);
    }
    const std::size_t len_t = std::min(i + 1, policy.k_max);
    const std::size_t len_2t = std::min(2 * i + 2, policy.k_max);
    const StepCdf at_t = to_step_cdf(detail::ls_pmf_ext(spec, t, policy, len_t));
    const StepCdf at_2t = to_step_cdf(detail::ls_pmf_ext(spec, 2.0 * t, policy, len_2t));
    const double lo = detail::m2_knot(spec, at_t, at_2t, i);
    const double hi = detail::m2_knot(spec, at_t, at_2t, i + 1);
    const double frac = u - static_cast<double>(i);
    double v = (1.0 - frac) * lo + frac * hi;
    if (clamp) v = std::min(1.0, std::max(0.0, v));
    return v;
}

// Full curve over one pair of lattices, extended until both tails converged.
inline ApproximantCdf m2_curve(const DistributionSpec& spec, double t,
                               const TruncationPolicy& policy = {}) {
    validate(spec);
    const LatticePmf pmf_t = detail::ls_pmf_ext(spec, t, policy, 0);
    const LatticePmf pmf_2t = detail::ls_pmf_ext(spec, 2.0 * t, policy, 0);
    const StepCdf at_t = to_step_cdf(pmf_t);
    const StepCdf at_2t = to_step_cdf(pmf_2t);
    const std::size_t knots = 1 + std::max(pmf_t.masses.size(), (pmf_2t.masses.size() + 1) / 2);

    ApproximantCdf out;
    out.t = t;
    out.tail_mass = std::max(pmf_t.tail_mass, pmf_2t.tail_mass);
    out.knot_values.reserve(knots);
    out.knot_values.push_back(mass_at_zero(spec));
    for (std::size_t k = 1; k < knots; ++k) {
        out.knot_values.push_back(detail::m2_knot(spec, at_t, at_2t, k));
    }
    return out;
}

// Post-Widder inversion W at scale t: a partial sum of the first t lattice
// atoms at scale t/x. The value at x = 0 is the continuity limit, which for
// every supported family is the mass at zero.
inline double post_widder(const DistributionSpec& spec, int t, double x,
                          const TruncationPolicy& policy = {}) {
    validate(spec);
    if (t < 1) throw std::domain_error("post-widder: t must be a positive integer");
    if (!(x >= 0.0)) throw std::domain_error("post-widder: x must be non-negative");
    if (x == 0.0) return mass_at_zero(spec);
    const std::size_t terms = std::min(static_cast<std::size_t>(t), policy.k_max);
    TruncationPolicy relaxed = policy;
    relaxed.tail_tol = 1.0;  // only the leading atoms matter, skip tail convergence
    const LatticePmf pmf = detail::ls_pmf_ext(spec, static_cast<double>(t) / x, relaxed, terms);
    double acc = 0.0;
    for (std::size_t j = 0; j < terms && j < pmf.masses.size(); ++j) acc += pmf.masses[j];
    return acc;
}

// Richardson acceleration of Post-Widder: 2 W_{2t} - W_t; not clamped.
inline double stehfest2(const DistributionSpec& spec, int t, double x,
                        const TruncationPolicy& policy = {}) {
    return 2.0 * post_widder(spec, 2 * t, x, policy) - post_widder(spec, t, x, policy);
}

}  // namespace lsgrid
