#pragma once

// Phase-type machinery: validation, the absorption-time cdf by
// uniformization, the lattice pmf of the discretized transform via resolvent
// solves, and the expansion of a representation into an Erlang mixture.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "lsgrid/dense_linalg.hpp"
#include "lsgrid/distribution_types.hpp"
#include "lsgrid/errors.hpp"
#include "lsgrid/lattice_pmf.hpp"

namespace lsgrid {

inline void validate(const PhaseTypeRep& rep) {
    const std::size_t n = rep.alpha.size();
    if (n == 0) throw std::invalid_argument("phase-type: representation has no states");
    if (rep.A.size() != n) {
        throw std::invalid_argument("phase-type: A must be square with one row per state");
    }
    double alpha_sum = 0.0;
    for (double a : rep.alpha) {
        if (!(a >= 0.0) || !std::isfinite(a)) {
            throw std::invalid_argument("phase-type: alpha entries must be non-negative");
        }
        alpha_sum += a;
    }
    if (!(alpha_sum > 0.0)) throw std::invalid_argument("phase-type: alpha must have positive sum");
    if (alpha_sum > 1.0 + 1e-12) throw std::invalid_argument("phase-type: alpha must sum to at most 1");
    for (std::size_t i = 0; i < n; ++i) {
        if (rep.A[i].size() != n) {
            throw std::invalid_argument("phase-type: A must be square with one row per state");
        }
        double row_sum = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            const double v = rep.A[i][j];
            if (!std::isfinite(v)) throw std::invalid_argument("phase-type: A entries must be finite");
            if (i == j) {
                if (!(v < 0.0)) {
                    throw std::invalid_argument("phase-type: diagonal of A must be strictly negative");
                }
            } else if (!(v >= 0.0)) {
                throw std::invalid_argument("phase-type: off-diagonal of A must be non-negative");
            }
            row_sum += v;
        }
        if (row_sum > 1e-12) {
            throw std::invalid_argument("phase-type: rows of A must sum to at most 0");
        }
    }
}

// Atom at zero carried by a deficient initial vector.
inline double ph_atom_at_zero(const PhaseTypeRep& rep) {
    double s = 0.0;
    for (double a : rep.alpha) s += a;
    return std::max(0.0, 1.0 - s);
}

namespace detail {

// exit[i] = rate of absorption from state i (negative row sum of A).
inline std::vector<double> ph_exit_rates(const PhaseTypeRep& rep) {
    const std::size_t n = rep.alpha.size();
    std::vector<double> exit(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        double row = 0.0;
        for (double v : rep.A[i]) row += v;
        exit[i] = std::max(0.0, -row);
    }
    return exit;
}

}  // namespace detail

// P(absorption by time x) for a validated representation, by uniformization.
// The time axis is split into steps so each step's jump count stays modest;
// Poisson tails are cut at 1e-14 per step.
inline double ph_cdf(const PhaseTypeRep& rep, double x) {
    validate(rep);
    if (!(x >= 0.0)) throw std::domain_error("phase-type cdf: x must be non-negative");
    const std::size_t n = rep.alpha.size();
    if (x == 0.0) return ph_atom_at_zero(rep);

    double lambda = 0.0;
    for (std::size_t i = 0; i < n; ++i) lambda = std::max(lambda, -rep.A[i][i]);

    // Jump chain P = I + A/lambda and per-jump absorption probabilities.
    std::vector<double> p(n * n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            double v = rep.A[i][j] / lambda;
            if (i == j) v += 1.0;
            p[i * n + j] = std::max(0.0, v);
        }
    }
    const std::vector<double> exit = detail::ph_exit_rates(rep);
    std::vector<double> r(n);
    for (std::size_t i = 0; i < n; ++i) r[i] = exit[i] / lambda;

    const double steps_needed = std::ceil(lambda * x / 256.0);
    const std::size_t steps = std::max<std::size_t>(1, static_cast<std::size_t>(steps_needed));
    const double dx = x / static_cast<double>(steps);
    const double mu = lambda * dx;

    std::vector<double> v = rep.alpha;
    std::vector<double> cur(n), next(n), acc(n);
    double absorbed = 0.0;
    for (std::size_t s = 0; s < steps; ++s) {
        double w = std::exp(-mu);
        double wsum = w;
        double tail = std::max(0.0, 1.0 - w);  // P(at least one jump remains)
        cur = v;
        for (std::size_t i = 0; i < n; ++i) acc[i] = w * cur[i];
        std::size_t j = 0;
        while (wsum < 1.0 - 1e-14) {
            double hit = 0.0;
            for (std::size_t i = 0; i < n; ++i) hit += cur[i] * r[i];
            absorbed += tail * hit;
            for (std::size_t i = 0; i < n; ++i) {
                double si = 0.0;
                for (std::size_t k = 0; k < n; ++k) si += cur[k] * p[k * n + i];
                next[i] = si;
            }
            cur.swap(next);
            ++j;
            w *= mu / static_cast<double>(j);
            wsum += w;
            tail = std::max(0.0, tail - w);
            for (std::size_t i = 0; i < n; ++i) acc[i] += w * cur[i];
            if (j > 1000000) throw numeric_error("phase-type cdf: uniformization failed to converge");
        }
        v = acc;
    }
    const double cdf_value = ph_atom_at_zero(rep) + absorbed;
    return std::min(1.0, std::max(0.0, cdf_value));
}

namespace detail {

// Lattice pmf of the discretized transform of a phase-type law. Successive
// atoms come from repeated resolvent solves against (tI - A); one LU
// factorization serves the whole run.
inline LatticePmf ph_ls_pmf_ext(const PhaseTypeRep& rep, double t, const TruncationPolicy& policy,
                                std::size_t min_len) {
    if (!(t > 0.0) || !std::isfinite(t)) {
        throw std::invalid_argument("phase-type lattice pmf: t must be positive and finite");
    }
    const std::size_t n = rep.alpha.size();
    std::vector<double> m(n * n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) m[i * n + j] = (i == j ? t : 0.0) - rep.A[i][j];
    }
    const LuFactors lu = lu_factor(std::move(m), n);

    std::vector<double> w = ph_exit_rates(rep);
    lu_solve(lu, w);  // w = (tI - A)^{-1} (-A) 1'

    LatticePmf out;
    out.t = t;
    double d = ph_atom_at_zero(rep);
    for (std::size_t i = 0; i < n; ++i) d += rep.alpha[i] * w[i];
    out.masses.push_back(d);
    double cum = d;
    while ((1.0 - cum > policy.tail_tol || out.masses.size() < min_len) &&
           out.masses.size() < policy.k_max) {
        lu_solve(lu, w);
        for (double& wi : w) wi *= t;
        d = 0.0;
        for (std::size_t i = 0; i < n; ++i) d += rep.alpha[i] * w[i];
        if (d < 0.0) {
            if (d < -1e-13) throw numeric_error("phase-type lattice pmf: lost positivity");
            d = 0.0;
        }
        out.masses.push_back(d);
        cum += d;
    }
    if (1.0 - cum > policy.tail_tol) {
        throw numeric_error("phase-type lattice pmf: truncation budget exceeded");
    }
    out.tail_mass = std::max(0.0, 1.0 - cum);
    return out;
}

}  // namespace detail

inline LatticePmf ph_ls_pmf(const PhaseTypeRep& rep, double t, const TruncationPolicy& policy = {}) {
    validate(rep);
    return detail::ph_ls_pmf_ext(rep, t, policy, 0);
}

// Scale parameter used by the Erlang expansion when none is given: the
// largest entry of A in absolute value.
inline double default_expansion_rate(const PhaseTypeRep& rep) {
    double c = 0.0;
    for (const auto& row : rep.A) {
        for (double v : row) c = std::max(c, std::fabs(v));
    }
    return c;
}

// Raw expansion coefficients c_j = alpha (cI + A)^j (-A) 1' for j = 0..j_max.
// With c at least the largest total rate all of them are non-negative; a
// clearly negative value means c was chosen too small.
inline std::vector<double> maier_coefficients(const PhaseTypeRep& rep, double c, std::size_t j_max) {
    validate(rep);
    if (!(c > 0.0) || !std::isfinite(c)) {
        throw std::invalid_argument("erlang expansion: rate c must be positive and finite");
    }
    const std::size_t n = rep.alpha.size();
    std::vector<double> u = detail::ph_exit_rates(rep);
    std::vector<double> coeffs;
    coeffs.reserve(j_max + 1);
    std::vector<double> next(n);
    for (std::size_t j = 0;; ++j) {
        double cj = 0.0;
        double norm = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            cj += rep.alpha[i] * u[i];
            norm = std::max(norm, std::fabs(u[i]));
        }
        if (cj < -1e-12 * std::max(1.0, norm)) {
            throw numeric_error("erlang expansion: coefficient went negative; choose a larger rate c");
        }
        coeffs.push_back(std::max(0.0, cj));
        if (j == j_max) break;
        for (std::size_t i = 0; i < n; ++i) {
            double s = c * u[i];
            for (std::size_t k = 0; k < n; ++k) s += rep.A[i][k] * u[k];
            next[i] = s;
        }
        u.swap(next);
    }
    return coeffs;
}

// Expands a phase-type law into an Erlang mixture with common rate c: an
// atom at zero plus Erlang(j, c) components with weights c_{j-1} / c^j,
// truncated once the cumulative weight reaches 1 - epsilon. The iteration
// runs on (cI + A)/c to keep the magnitudes bounded.
inline ErlangMixture maier_expand(const PhaseTypeRep& rep, double c, double epsilon) {
    validate(rep);
    if (!(c > 0.0) || !std::isfinite(c)) {
        throw std::invalid_argument("erlang expansion: rate c must be positive and finite");
    }
    if (!(epsilon > 0.0 && epsilon < 1.0)) {
        throw std::invalid_argument("erlang expansion: epsilon must lie in (0, 1)");
    }
    const std::size_t n = rep.alpha.size();

    ErlangMixture mix;
    mix.zero_mass = ph_atom_at_zero(rep);

    // v starts as the exit-rate vector over c; each step applies (cI + A)/c,
    // so alpha . v is exactly c_{j-1} / c^j.
    std::vector<double> v = detail::ph_exit_rates(rep);
    for (double& vi : v) vi /= c;
    std::vector<double> next(n);

    double cum = mix.zero_mass;
    const std::size_t j_cap = 2000000;
    for (std::size_t j = 1; cum < 1.0 - epsilon; ++j) {
        if (j > j_cap) throw numeric_error("erlang expansion: truncation budget exceeded");
        double wj = 0.0;
        double norm = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            wj += rep.alpha[i] * v[i];
            norm = std::max(norm, std::fabs(v[i]));
        }
        if (wj < -1e-12 * std::max(1.0, norm)) {
            throw numeric_error("erlang expansion: coefficient went negative; choose a larger rate c");
        }
        if (wj > 0.0) {
            mix.components.push_back(ErlangComponent{c, static_cast<int>(j), wj});
            cum += wj;
            // weights are stage-count probabilities, so running past 1 means
            // the rate was below the generator's spectrum after all
            if (cum > 1.0 + 1e-9) {
                throw numeric_error("erlang expansion: weights exceed 1; choose a larger rate c");
            }
        }
        for (std::size_t i = 0; i < n; ++i) {
            double s = v[i];
            for (std::size_t k = 0; k < n; ++k) s += rep.A[i][k] * v[k] / c;
            next[i] = s;
        }
        v.swap(next);
    }
    mix.truncated_mass = std::max(0.0, 1.0 - cum);
    return mix;
}

}  // namespace lsgrid
