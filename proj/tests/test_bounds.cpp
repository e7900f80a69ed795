// Verified claims:
//  - the two certificate constants against their exact expressions and the
//    published four-digit roundings
//  - certificate values for worked examples, with the exact quarter scaling
//    under t -> 2t and exact rate/scale equivariance
//  - the derivative-norm chain behind the gamma certificate, checked by
//    dense maximization: |F''| <= 1, |x F'''| <= 1, |x^2 F''''| <= 2 + 3/e
//  - certificate routing for every spec family, including phase-type specs
//    through their mixture expansion
//  - measured approximation errors never exceed their certificates
//
// Reference values computed with mpmath at 50 digits and frozen here.

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <memory>
#include <numbers>
#include <vector>

#include "lsgrid/bounds.hpp"
#include "lsgrid/approximants.hpp"

using Catch::Approx;
using namespace lsgrid;

namespace {

DistributionSpec make_compound(CountingSpec counting, DistributionSpec summand) {
    Compound c;
    c.counting = std::move(counting);
    c.summand = std::make_shared<const DistributionSpec>(std::move(summand));
    return c;
}

double grid_sup_error(const DistributionSpec& spec, double t, std::size_t k_top) {
    const ApproximantCdf curve = m2_curve(spec, t);
    double worst = 0.0;
    for (std::size_t k = 0; k <= k_top; ++k) {
        const double x = static_cast<double>(k) / t;
        const double v = k < curve.knot_values.size() ? curve.knot_values[k]
                                                      : curve.knot_values.back();
        worst = std::max(worst, std::fabs(v - cdf(spec, x)));
    }
    return worst;
}

}  // namespace

TEST_CASE("certificate constants", "[bounds]") {
    const double e = std::numbers::e;
    REQUIRE(gamma_certificate_constant() ==
            Approx(17.0 / 12.0 + 27.0 / (16.0 * e)).margin(1e-16));
    REQUIRE(gamma_certificate_constant() == Approx(2.0374632236434756).margin(1e-15));
    REQUIRE(gamma_certificate_constant() == Approx(2.0375).margin(5e-5));

    REQUIRE(exponential_certificate_constant() ==
            Approx(1.0 / 8.0 + 1.0 / (6.0 * e) + 9.0 / (4.0 * e * e)).margin(1e-16));
    REQUIRE(exponential_certificate_constant() ==
            Approx(0.49081762747761894).margin(1e-15));
}

TEST_CASE("general-form certificate", "[bounds]") {
    const double e = std::numbers::e;

    SECTION("the gamma norm chain reproduces the gamma constant") {
        const ErrorCertificate cert = bound_general(1.0, 1.0, 2.0 + 3.0 / e, 1.0, true);
        REQUIRE(cert.bound == Approx(gamma_certificate_constant()).margin(1e-15));
        REQUIRE(cert.source == BoundSource::richardson_interpolated);
    }
    SECTION("grid-only form drops the interpolation term") {
        const ErrorCertificate with = bound_general(5.0, 1.0, 1.0, 2.0, true);
        const ErrorCertificate without = bound_general(5.0, 1.0, 1.0, 2.0, false);
        REQUIRE(without.source == BoundSource::richardson_step);
        REQUIRE(with.bound - without.bound == Approx(5.0 / 8.0 / 4.0).margin(1e-15));
        const ErrorCertificate ignored = bound_general(99.0, 1.0, 1.0, 2.0, false);
        REQUIRE(ignored.bound == without.bound);
    }
    SECTION("zero norms give a zero bound") {
        REQUIRE(bound_general(0.0, 0.0, 0.0, 3.0, true).bound == 0.0);
    }
    SECTION("quarter scaling under t doubling is exact") {
        for (double t : {5.0, 7.0, 0.3}) {
            const double b1 = bound_general(1.0, 0.7, 2.1, t, true).bound;
            const double b2 = bound_general(1.0, 0.7, 2.1, 2.0 * t, true).bound;
            REQUIRE(b1 == 4.0 * b2);
        }
    }
    SECTION("domain") {
        REQUIRE_THROWS_AS(bound_general(1.0, 1.0, 1.0, 0.0, true), std::domain_error);
        REQUIRE_THROWS_AS(bound_general(-1.0, 1.0, 1.0, 2.0, true), std::domain_error);
    }
}

TEST_CASE("gamma certificate", "[bounds]") {
    SECTION("worked examples") {
        const ErrorCertificate a = bound_gamma(2.0, 1.0, 5.0);
        REQUIRE(a.bound == gamma_certificate_constant() / 25.0);
        REQUIRE(a.bound == Approx(0.0815).margin(5e-5));
        REQUIRE(a.source == BoundSource::gamma);
        REQUIRE(a.t == 5.0);

        const ErrorCertificate b = bound_gamma(1.0, 1.0, 10.0);
        REQUIRE(b.bound == exponential_certificate_constant() / 100.0);
        REQUIRE(b.bound == Approx(0.0049081762747761890).margin(5e-12));
        REQUIRE(b.source == BoundSource::exponential);

        const ErrorCertificate c = bound_gamma(3.0, 2.0, 5.0);
        REQUIRE(c.bound == gamma_certificate_constant() / 6.25);
        REQUIRE(c.bound == Approx(0.326).margin(5e-4));
    }
    SECTION("rate equivariance is exact for power-of-two rates") {
        REQUIRE(bound_gamma(2.0, 0.5, 5.0).bound == bound_gamma(2.0, 1.0, 10.0).bound);
        REQUIRE(bound_gamma(3.0, 2.0, 8.0).bound == bound_gamma(3.0, 1.0, 4.0).bound);
    }
    SECTION("quarter scaling is exact") {
        for (double t : {5.0, 7.0}) {
            REQUIRE(bound_gamma(2.0, 1.0, t).bound == 4.0 * bound_gamma(2.0, 1.0, 2.0 * t).bound);
        }
    }
    SECTION("shape coverage gap") {
        REQUIRE_NOTHROW(bound_gamma(1.0, 1.0, 5.0));
        REQUIRE_NOTHROW(bound_gamma(2.0, 1.0, 5.0));
        REQUIRE_NOTHROW(bound_gamma(2.5, 1.0, 5.0));
        REQUIRE_THROWS_AS(bound_gamma(1.5, 1.0, 5.0), std::domain_error);
        REQUIRE_THROWS_AS(bound_gamma(0.5, 1.0, 5.0), std::domain_error);
        REQUIRE_THROWS_AS(bound_gamma(2.0, 0.0, 5.0), std::domain_error);
        REQUIRE_THROWS_AS(bound_gamma(2.0, 1.0, 0.0), std::domain_error);
    }
}

TEST_CASE("derivative-norm chain by dense maximization", "[bounds]") {
    // the gamma certificate rests on |F''| <= 1, |x F'''| <= 1,
    // |x^2 F''''| <= 2 + 3/e for every unit-rate shape p >= 2
    const double cap4 = 2.0 + 3.0 / std::numbers::e;
    for (double p : {2.0, 3.0, 5.0, 10.0}) {
        const double hi = p + 15.0 * std::sqrt(p) + 5.0;
        double m2 = 0.0, m3 = 0.0, m4 = 0.0;
        const int n = 4000;
        for (int i = 1; i <= n; ++i) {
            const double x = hi * static_cast<double>(i) / n;
            m2 = std::max(m2, std::fabs(gamma_density_derivative(p, 1, x)));
            m3 = std::max(m3, std::fabs(x * gamma_density_derivative(p, 2, x)));
            m4 = std::max(m4, std::fabs(x * x * gamma_density_derivative(p, 3, x)));
        }
        REQUIRE(m2 <= 1.0 + 1e-9);
        REQUIRE(m3 <= 1.0 + 1e-9);
        REQUIRE(m4 <= cap4 + 1e-9);
        // the third-order norm never exceeds the fourth-order one, which is
        // what lets the certificate charge everything to the top term
        REQUIRE(m3 <= m4 + 1e-12);
    }
}

TEST_CASE("mixture certificate", "[bounds]") {
    SECTION("worked example") {
        ErlangMixture mix;
        mix.components = {{1.0, 1, 0.5}, {2.0, 2, 0.5}};
        const ErrorCertificate cert = bound_mixture(mix, 10.0);
        // sum of w a^2 is 0.5 + 2 = 2.5
        REQUIRE(cert.bound == Approx(gamma_certificate_constant() * 2.5 / 100.0).margin(1e-15));
        REQUIRE(cert.bound == Approx(0.05094).margin(5e-6));
        REQUIRE(cert.source == BoundSource::erlang_mixture);
    }
    SECTION("single component collapses to the gamma certificate") {
        ErlangMixture mix;
        mix.components = {{1.0, 3, 1.0}};
        REQUIRE(bound_mixture(mix, 5.0).bound ==
                Approx(bound_gamma(3.0, 1.0, 5.0).bound).margin(1e-16));
    }
    SECTION("pure atom needs no correction") {
        ErlangMixture atom;
        atom.zero_mass = 1.0;
        REQUIRE(bound_mixture(atom, 5.0).bound == 0.0);
    }
    SECTION("quarter scaling is exact") {
        ErlangMixture mix;
        mix.zero_mass = 0.2;
        mix.components = {{0.7, 2, 0.5}, {3.0, 1, 0.3}};
        REQUIRE(bound_mixture(mix, 5.0).bound == 4.0 * bound_mixture(mix, 10.0).bound);
    }
}

TEST_CASE("compound certificate", "[bounds]") {
    SECTION("worked example") {
        ErlangMixture unit;
        unit.components = {{1.0, 1, 1.0}};
        const ErrorCertificate cert = bound_compound(unit, 0.1, 5.0);
        REQUIRE(cert.bound ==
                Approx(gamma_certificate_constant() * 0.9 / 25.0).margin(1e-15));
        REQUIRE(cert.bound == Approx(0.07335).margin(5e-6));
        REQUIRE(cert.source == BoundSource::compound);
    }
    SECTION("certain zero count means zero bound") {
        ErlangMixture unit;
        unit.components = {{1.0, 1, 1.0}};
        REQUIRE(bound_compound(unit, 1.0, 5.0).bound == 0.0);
    }
    SECTION("largest rate drives the bound, exactly") {
        ErlangMixture slow;
        slow.components = {{0.5, 2, 0.5}, {1.0, 1, 0.5}};
        ErlangMixture fast;
        fast.components = {{1.0, 2, 0.5}, {2.0, 1, 0.5}};
        REQUIRE(bound_compound(fast, 0.3, 5.0).bound ==
                4.0 * bound_compound(slow, 0.3, 5.0).bound);
    }
}

TEST_CASE("certificate routing by spec", "[bounds]") {
    SECTION("exponential and gamma") {
        REQUIRE(bound_for_spec(DistributionSpec{Exponential{1.0}}, 10.0).bound ==
                bound_gamma(1.0, 1.0, 10.0).bound);
        REQUIRE(bound_for_spec(DistributionSpec{Exponential{1.0}}, 10.0).source ==
                BoundSource::exponential);
        REQUIRE(bound_for_spec(DistributionSpec{Gamma{2.0, 3.0}}, 5.0).bound ==
                bound_gamma(3.0, 2.0, 5.0).bound);
    }
    SECTION("mixture") {
        ErlangMixture mix;
        mix.components = {{1.0, 2, 1.0}};
        const ErrorCertificate cert = bound_for_spec(DistributionSpec{mix}, 5.0);
        REQUIRE(cert.source == BoundSource::erlang_mixture);
        REQUIRE(cert.bound == bound_mixture(mix, 5.0).bound);
    }
    SECTION("compound families") {
        const ErrorCertificate geo = bound_for_spec(DistributionSpec{GeometricExpCompound{0.1}}, 5.0);
        REQUIRE(geo.source == BoundSource::compound);
        REQUIRE(geo.bound == Approx(gamma_certificate_constant() * 0.9 / 25.0).margin(1e-15));

        const ErrorCertificate same = bound_for_spec(
            make_compound(Geometric{0.1}, DistributionSpec{Exponential{1.0}}), 5.0);
        REQUIRE(same.bound == geo.bound);

        // integer-shape gamma summands expand into a one-component mixture
        const ErrorCertificate gam = bound_for_spec(
            make_compound(Poisson{2.0}, DistributionSpec{Gamma{1.0, 2.0}}), 5.0);
        REQUIRE(gam.source == BoundSource::compound);
        const double q0 = std::exp(-2.0);
        REQUIRE(gam.bound ==
                Approx(gamma_certificate_constant() * (1.0 - q0) / 25.0).margin(1e-15));

        REQUIRE_THROWS_AS(
            bound_for_spec(make_compound(Poisson{2.0}, DistributionSpec{Gamma{1.0, 2.5}}), 5.0),
            std::domain_error);
    }
    SECTION("phase type goes through its expansion") {
        PhaseTypeRep rep;
        rep.alpha = {1.0, 0.0};
        rep.A = {{-1.0, 1.0}, {0.0, -1.0}};
        const ErrorCertificate cert = bound_for_spec(DistributionSpec{rep}, 5.0);
        REQUIRE(cert.source == BoundSource::erlang_mixture);
        // the two-stage chain expands to a single second-order component
        REQUIRE(cert.bound == Approx(gamma_certificate_constant() / 25.0).margin(1e-12));
    }
}

TEST_CASE("measured error never exceeds the certificate", "[bounds]") {
    struct Case {
        DistributionSpec spec;
        double t;
    };
    ErlangMixture mix;
    mix.zero_mass = 0.1;
    mix.components = {{1.0, 2, 0.5}, {2.0, 1, 0.4}};
    const std::vector<Case> cases{
        {DistributionSpec{Exponential{1.0}}, 5.0},
        {DistributionSpec{Gamma{1.0, 3.0}}, 5.0},
        {DistributionSpec{Gamma{2.0, 2.0}}, 10.0},
        {DistributionSpec{mix}, 5.0},
        {DistributionSpec{GeometricExpCompound{0.1}}, 5.0},
    };
    for (const Case& c : cases) {
        const double measured = grid_sup_error(c.spec, c.t, static_cast<std::size_t>(50 * c.t));
        const double certified = bound_for_spec(c.spec, c.t).bound;
        REQUIRE(measured <= certified);
        REQUIRE(measured > 0.0);
    }
}

TEST_CASE("certificate inputs are echoed", "[bounds]") {
    const ErrorCertificate cert = bound_gamma(2.0, 1.5, 5.0);
    bool saw_p = false, saw_a = false;
    for (const auto& [name, value] : cert.inputs) {
        if (name == "p") {
            saw_p = true;
            REQUIRE(value == 2.0);
        }
        if (name == "a") {
            saw_a = true;
            REQUIRE(value == 1.5);
        }
    }
    REQUIRE(saw_p);
    REQUIRE(saw_a);
}
