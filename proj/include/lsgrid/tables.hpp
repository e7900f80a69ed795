#pragma once

// Row builders for the side-by-side comparison tables on the grid k/t: the
// exact cdf against the lattice cdf with the rounding and Post-Widder
// comparators, and the accelerated knots against their Stehfest counterpart.

#include <algorithm>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "lsgrid/approximants.hpp"
#include "lsgrid/discretization.hpp"
#include "lsgrid/distribution.hpp"

namespace lsgrid {

struct ComparisonRow {
    std::size_t k = 0;  // grid index, x = k/t
    double x = 0.0;
    double exact = 0.0;
    double lattice = 0.0;      // step cdf of the discretized transform at k/t
    double rounding = 0.0;     // round-down comparator at k/t
    double post_widder = 0.0;  // inversion comparator at k/t
};

struct AccelerationRow {
    std::size_t k = 0;
    double x = 0.0;
    double exact = 0.0;
    double lattice_t = 0.0;    // step cdf at scale t, evaluated at (k-1)/t
    double lattice_2t = 0.0;   // step cdf at scale 2t, evaluated at (2k-1)/(2t)
    double accelerated = 0.0;  // Richardson knot at k/t
    double stehfest = 0.0;     // Stehfest-2 comparator at k/t
};

inline std::vector<ComparisonRow> comparison_table(const DistributionSpec& spec, int t,
                                                   const std::vector<std::size_t>& ks,
                                                   const TruncationPolicy& policy = {}) {
    validate(spec);
    if (t < 1) throw std::domain_error("comparison table: t must be a positive integer");
    if (ks.empty()) throw std::invalid_argument("comparison table: no grid indices given");
    const std::size_t k_top = *std::max_element(ks.begin(), ks.end());
    const double td = static_cast<double>(t);

    const StepCdf lattice =
        to_step_cdf(detail::ls_pmf_ext(spec, td, policy, std::min(k_top + 1, policy.k_max)));
    const StepCdf rounded = rounding_step_cdf(spec, td, policy);

    std::vector<ComparisonRow> rows;
    rows.reserve(ks.size());
    for (std::size_t k : ks) {
        ComparisonRow row;
        row.k = k;
        row.x = static_cast<double>(k) / td;
        row.exact = cdf(spec, row.x);
        row.lattice = lattice.at_index(k);
        row.rounding = rounded.at_index(k);
        row.post_widder = post_widder(spec, t, row.x, policy);
        rows.push_back(row);
    }
    return rows;
}

inline std::vector<AccelerationRow> acceleration_table(const DistributionSpec& spec, int t,
                                                       const std::vector<std::size_t>& ks,
                                                       const TruncationPolicy& policy = {}) {
    validate(spec);
    if (t < 1) throw std::domain_error("acceleration table: t must be a positive integer");
    if (ks.empty()) throw std::invalid_argument("acceleration table: no grid indices given");
    for (std::size_t k : ks) {
        if (k == 0) throw std::invalid_argument("acceleration table: grid indices must be at least 1");
    }
    const std::size_t k_top = *std::max_element(ks.begin(), ks.end());
    const double td = static_cast<double>(t);

    const StepCdf at_t =
        to_step_cdf(detail::ls_pmf_ext(spec, td, policy, std::min(k_top, policy.k_max)));
    const StepCdf at_2t =
        to_step_cdf(detail::ls_pmf_ext(spec, 2.0 * td, policy, std::min(2 * k_top, policy.k_max)));

    std::vector<AccelerationRow> rows;
    rows.reserve(ks.size());
    for (std::size_t k : ks) {
        AccelerationRow row;
        row.k = k;
        row.x = static_cast<double>(k) / td;
        row.exact = cdf(spec, row.x);
        row.lattice_t = at_t.at_index(k - 1);
        row.lattice_2t = at_2t.at_index(2 * k - 1);
        row.accelerated = 2.0 * row.lattice_2t - row.lattice_t;
        row.stehfest = stehfest2(spec, t, row.x, policy);
        rows.push_back(row);
    }
    return rows;
}

}  // namespace lsgrid
