#pragma once

// Distribution specifications accepted by the approximation machinery, plus
// the counting laws used for compounding. Specs are plain value types;
// validation and the pointwise operations live in free functions.

#include <cmath>
#include <cstddef>
#include <memory>
#include <stdexcept>
#include <variant>
#include <vector>

namespace lsgrid {

namespace detail {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

}  // namespace detail

// ---------------------------------------------------------------- counting

struct Geometric {
    double p = 0.5;  // P(M = k) = (1-p)^k p
};

struct Poisson {
    double lambda = 1.0;
};

struct NegativeBinomial {
    double r = 1.0;  // P(M = k) = C(k+r-1, k) p^r (1-p)^k
    double p = 0.5;
};

struct Binomial {
    int n = 1;
    double p = 0.5;
};

struct FinitePmf {
    std::vector<double> masses;  // masses[k] = P(M = k)
};

using CountingSpec = std::variant<Geometric, Poisson, NegativeBinomial, Binomial, FinitePmf>;

inline void validate(const CountingSpec& spec) {
    std::visit(detail::overloaded{
                   [](const Geometric& g) {
                       if (!(g.p > 0.0 && g.p <= 1.0)) {
                           throw std::invalid_argument("geometric counting: p must lie in (0, 1]");
                       }
                   },
                   [](const Poisson& p) {
                       if (!(p.lambda > 0.0) || !std::isfinite(p.lambda)) {
                           throw std::invalid_argument("poisson counting: lambda must be positive and finite");
                       }
                   },
                   [](const NegativeBinomial& nb) {
                       if (!(nb.r > 0.0) || !std::isfinite(nb.r)) {
                           throw std::invalid_argument("negative binomial counting: r must be positive and finite");
                       }
                       if (!(nb.p > 0.0 && nb.p <= 1.0)) {
                           throw std::invalid_argument("negative binomial counting: p must lie in (0, 1]");
                       }
                   },
                   [](const Binomial& b) {
                       if (b.n < 1) throw std::invalid_argument("binomial counting: n must be at least 1");
                       if (!(b.p >= 0.0 && b.p <= 1.0)) {
                           throw std::invalid_argument("binomial counting: p must lie in [0, 1]");
                       }
                   },
                   [](const FinitePmf& f) {
                       if (f.masses.empty()) {
                           throw std::invalid_argument("finite counting pmf: masses must be non-empty");
                       }
                       double total = 0.0;
                       for (double m : f.masses) {
                           if (!(m >= 0.0) || !std::isfinite(m)) {
                               throw std::invalid_argument("finite counting pmf: masses must be non-negative");
                           }
                           total += m;
                       }
                       if (std::fabs(total - 1.0) > 1e-12) {
                           throw std::invalid_argument("finite counting pmf: masses must sum to 1");
                       }
                   }},
               spec);
}

inline double counting_pmf(const CountingSpec& spec, std::size_t k) {
    return std::visit(
        detail::overloaded{
            [&](const Geometric& g) {
                return g.p * std::pow(1.0 - g.p, static_cast<double>(k));
            },
            [&](const Poisson& p) {
                double w = std::exp(-p.lambda);
                for (std::size_t i = 1; i <= k; ++i) w *= p.lambda / static_cast<double>(i);
                return w;
            },
            [&](const NegativeBinomial& nb) {
                double w = std::pow(nb.p, nb.r);
                for (std::size_t i = 1; i <= k; ++i) {
                    w *= (nb.r + static_cast<double>(i) - 1.0) / static_cast<double>(i) * (1.0 - nb.p);
                }
                return w;
            },
            [&](const Binomial& b) {
                if (k > static_cast<std::size_t>(b.n)) return 0.0;
                double w = 1.0;
                for (std::size_t i = 0; i < k; ++i) {
                    w *= static_cast<double>(b.n - i) / static_cast<double>(i + 1) * b.p;
                }
                for (int i = 0; i < b.n - static_cast<int>(k); ++i) w *= 1.0 - b.p;
                return w;
            },
            [&](const FinitePmf& f) {
                return k < f.masses.size() ? f.masses[k] : 0.0;
            }},
        spec);
}

// Probability generating function E s^M for s in [0, 1].
inline double counting_pgf(const CountingSpec& spec, double s) {
    if (!(s >= 0.0 && s <= 1.0)) throw std::domain_error("counting pgf: s must lie in [0, 1]");
    return std::visit(
        detail::overloaded{
            [&](const Geometric& g) { return g.p / (1.0 - (1.0 - g.p) * s); },
            [&](const Poisson& p) { return std::exp(p.lambda * (s - 1.0)); },
            [&](const NegativeBinomial& nb) {
                return std::pow(nb.p / (1.0 - (1.0 - nb.p) * s), nb.r);
            },
            [&](const Binomial& b) {
                return std::pow(1.0 - b.p + b.p * s, static_cast<double>(b.n));
            },
            [&](const FinitePmf& f) {
                double acc = 0.0;
                for (std::size_t k = f.masses.size(); k-- > 0;) acc = acc * s + f.masses[k];
                return acc;
            }},
        spec);
}

struct PanjerAb {
    double a = 0.0;
    double b = 0.0;
};

// Recursion parameters for counting laws satisfying
// P(M = k) = (a + b/k) P(M = k-1). Finite pmfs are outside this class and
// take the convolution route in panjer_compound instead.
inline PanjerAb panjer_ab(const CountingSpec& spec) {
    return std::visit(
        detail::overloaded{
            [](const Geometric& g) { return PanjerAb{1.0 - g.p, 0.0}; },
            [](const Poisson& p) { return PanjerAb{0.0, p.lambda}; },
            [](const NegativeBinomial& nb) {
                return PanjerAb{1.0 - nb.p, (nb.r - 1.0) * (1.0 - nb.p)};
            },
            [](const Binomial& b) -> PanjerAb {
                if (b.p == 1.0) {
                    throw std::domain_error("panjer parameters: binomial with p = 1 is a point mass");
                }
                return PanjerAb{-b.p / (1.0 - b.p),
                                static_cast<double>(b.n + 1) * b.p / (1.0 - b.p)};
            },
            [](const FinitePmf&) -> PanjerAb {
                throw std::domain_error("panjer parameters: finite pmf is not in the (a, b, 0) class");
            }},
        spec);
}

// ------------------------------------------------------------ distributions

struct Exponential {
    double rate = 1.0;
};

// Two-parameter gamma with rate a and shape p; density ~ x^{p-1} e^{-a x}.
struct Gamma {
    double a = 1.0;
    double p = 1.0;
};

struct ErlangComponent {
    double a = 1.0;  // rate shared notation with Gamma
    int j = 1;       // integer shape
    double w = 1.0;  // mixture weight
};

// Mixture of Erlang distributions plus an optional atom at zero.
// truncated_mass records weight knowingly dropped by a truncated expansion;
// a proper mixture has it at 0 and the weights satisfy
// zero_mass + sum(w) + truncated_mass = 1.
struct ErlangMixture {
    double zero_mass = 0.0;
    std::vector<ErlangComponent> components;
    double truncated_mass = 0.0;
};

// Time to absorption of a finite-state Markov jump process: initial row
// vector alpha over the transient states (sum <= 1, any deficit is an atom
// at zero) and subgenerator A.
struct PhaseTypeRep {
    std::vector<double> alpha;
    std::vector<std::vector<double>> A;
};

// Geometric(p) compound of unit-rate exponentials; cdf 1 - (1-p) e^{-p x}.
struct GeometricExpCompound {
    double p = 0.5;
};

struct Compound;

using DistributionSpec =
    std::variant<Exponential, Gamma, ErlangMixture, PhaseTypeRep, GeometricExpCompound, Compound>;

// Random sum of an (a,b,0)-or-finite counting law over iid summands.
// Nesting depth is one: the summand may not itself be a compound.
struct Compound {
    CountingSpec counting;
    std::shared_ptr<const DistributionSpec> summand;
};

}  // namespace lsgrid
