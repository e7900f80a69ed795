#pragma once

// Lattice pmf of a random sum: the recursion for (a,b,0) counting laws and
// explicit convolution powers for finite counting pmfs. The summand arrives
// as a lattice pmf on {k/t}; the compound lives on the same grid.

#include <algorithm>
#include <cstddef>
#include <vector>

#include "lsgrid/distribution_types.hpp"
#include "lsgrid/errors.hpp"
#include "lsgrid/lattice_pmf.hpp"

namespace lsgrid {

namespace detail {

// Convolution of two lattice sequences, truncated to length cap.
inline std::vector<double> convolve_truncated(const std::vector<double>& lhs,
                                              const std::vector<double>& rhs,
                                              std::size_t cap) {
    const std::size_t len = std::min(cap, lhs.size() + rhs.size() - 1);
    std::vector<double> out(len, 0.0);
    for (std::size_t i = 0; i < lhs.size() && i < len; ++i) {
        if (lhs[i] == 0.0) continue;
        const std::size_t jmax = std::min(rhs.size(), len - i);
        for (std::size_t j = 0; j < jmax; ++j) out[i + j] += lhs[i] * rhs[j];
    }
    return out;
}

inline LatticePmf panjer_compound_ext(const CountingSpec& counting, const LatticePmf& summand,
                                      const TruncationPolicy& policy, std::size_t min_len) {
    validate(counting);
    if (!(summand.t > 0.0)) throw std::invalid_argument("panjer compound: summand grid t must be positive");

    if (summand.masses.empty()) throw std::invalid_argument("panjer compound: summand has no atoms");

    LatticePmf out;
    out.t = summand.t;
    out.provenance = LatticeProvenance::compound;
    const std::vector<double>& f = summand.masses;
    const double f0 = f[0];

    // Finite counting laws (and the binomial point-mass edge case) go through
    // explicit convolution powers of the summand.
    const FinitePmf* finite = std::get_if<FinitePmf>(&counting);
    FinitePmf point_mass;
    if (const Binomial* b = std::get_if<Binomial>(&counting); b != nullptr && b->p == 1.0) {
        point_mass.masses.assign(static_cast<std::size_t>(b->n) + 1, 0.0);
        point_mass.masses.back() = 1.0;
        finite = &point_mass;
    }
    if (finite != nullptr) {
        // full support: count_max summands of f.size() - 1 steps each
        const std::size_t support =
            (finite->masses.size() - 1) * (f.size() - 1) + 1;
        const std::size_t len =
            std::min<std::size_t>(policy.k_max, std::max<std::size_t>(support, std::max<std::size_t>(min_len, 1)));
        std::vector<double> g(len, 0.0);
        g[0] = finite->masses[0];
        std::vector<double> power{1.0};  // summand convolved with itself m times
        for (std::size_t m = 1; m < finite->masses.size(); ++m) {
            power = convolve_truncated(power, f, len);
            const double q = finite->masses[m];
            if (q == 0.0) continue;
            for (std::size_t k = 0; k < power.size(); ++k) g[k] += q * power[k];
        }
        double cum = 0.0;
        for (double m : g) cum += m;
        out.masses = std::move(g);
        out.tail_mass = std::max(0.0, 1.0 - cum);
        return out;
    }

    const PanjerAb ab = panjer_ab(counting);
    const double denom = 1.0 - ab.a * f0;
    if (!(denom > 0.0)) {
        throw numeric_error("panjer compound: recursion denominator 1 - a f(0) is not positive");
    }

    // With the summand known only up to its computed range, the recursion can
    // reach at most pgf(sum of known atoms); stop once we are within tolerance
    // of that ceiling rather than of 1, or the loop would never settle.
    double known = 0.0;
    for (double m : f) known += m;
    const double reachable = counting_pgf(counting, std::min(known, 1.0));

    out.masses.push_back(counting_pgf(counting, f0));
    double cum = out.masses[0];
    while ((reachable - cum > policy.tail_tol || out.masses.size() < min_len) &&
           out.masses.size() < policy.k_max) {
        const std::size_t j = out.masses.size();
        // atoms of f beyond its computed range act as zero; any probability
        // they would have carried stays in tail_mass
        const std::size_t top = std::min(j, f.size() - 1);
        double s = 0.0;
        for (std::size_t i = 1; i <= top; ++i) {
            if (f[i] == 0.0) continue;
            s += (ab.a + ab.b * static_cast<double>(i) / static_cast<double>(j)) * f[i] *
                 out.masses[j - i];
        }
        double gj = s / denom;
        if (gj < 0.0) {
            if (gj < -1e-12) throw numeric_error("panjer compound: recursion lost positivity");
            gj = 0.0;
        }
        out.masses.push_back(gj);
        cum += gj;
    }
    out.tail_mass = std::max(0.0, 1.0 - cum);
    return out;
}

}  // namespace detail

// Lattice pmf of the random sum of `counting` many iid copies of `summand`.
// The result extends until its tail is below policy.tail_tol or the summand's
// computed range is used up, whichever comes first; the tail_mass field is
// honest either way.
inline LatticePmf panjer_compound(const CountingSpec& counting, const LatticePmf& summand,
                                  const TruncationPolicy& policy = {}) {
    return detail::panjer_compound_ext(counting, summand, policy, 0);
}

}  // namespace lsgrid
