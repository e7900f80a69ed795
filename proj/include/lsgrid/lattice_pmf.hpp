#pragma once

// Probability masses on the uniform grid {k/t} and the step cdf built from
// them. These are the common currency between transform discretization, the
// rounding comparator, and Panjer compounding.

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace lsgrid {

// Stopping rule for lattice builders: extend until the unassigned tail mass
// drops below tail_tol, give up (with numeric_error) once k_max atoms have
// been produced without reaching it.
struct TruncationPolicy {
    double tail_tol = 1e-12;
    std::size_t k_max = std::size_t{1} << 24;
};

enum class LatticeProvenance { ls_discretization, rounding, compound };

struct LatticePmf {
    double t = 1.0;
    std::vector<double> masses;  // masses[k] sits at the grid point k/t
    double tail_mass = 0.0;      // unassigned mass beyond the last atom
    LatticeProvenance provenance = LatticeProvenance::ls_discretization;
};

inline void validate(const LatticePmf& pmf) {
    if (!(pmf.t > 0.0)) throw std::invalid_argument("lattice pmf: t must be positive");
    double total = 0.0;
    for (double m : pmf.masses) {
        if (!(m >= 0.0)) throw std::invalid_argument("lattice pmf: negative mass");
        total += m;
    }
    if (!(pmf.tail_mass >= 0.0)) throw std::invalid_argument("lattice pmf: negative tail mass");
    if (std::fabs(total + pmf.tail_mass - 1.0) > 1e-10) {
        throw std::invalid_argument("lattice pmf: masses plus tail must sum to 1");
    }
}

// Right-continuous step cdf on the same grid, constant on [k/t, (k+1)/t).
// Queries beyond the last computed atom return the full computed mass, which
// is within the builder's tail tolerance of the true value.
struct StepCdf {
    double t = 1.0;
    std::vector<double> cumulative;  // cumulative[k] = P(X <= k/t)

    double at_index(std::size_t k) const {
        if (cumulative.empty()) return 0.0;
        if (k >= cumulative.size()) return cumulative.back();
        return cumulative[k];
    }

    // Floor semantics: the value at x is the cumulative through floor(t x).
    double value(double x) const {
        if (!(x >= 0.0)) throw std::domain_error("step cdf: x must be non-negative");
        const double u = t * x;
        if (cumulative.empty() || u >= static_cast<double>(cumulative.size())) {
            return cumulative.empty() ? 0.0 : cumulative.back();
        }
        return cumulative[static_cast<std::size_t>(u)];
    }
};

inline StepCdf to_step_cdf(const LatticePmf& pmf) {
    StepCdf cdf;
    cdf.t = pmf.t;
    cdf.cumulative.reserve(pmf.masses.size());
    double run = 0.0;
    for (double m : pmf.masses) {
        run += m;
        cdf.cumulative.push_back(run);
    }
    return cdf;
}

}  // namespace lsgrid
