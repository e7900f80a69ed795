// Checks for the special-function layer:
//  - log_gamma against high-precision reference values, exact integer points,
//    and the recurrence log Gamma(x+1) = log Gamma(x) + log x
//  - digamma against references, the shift recurrence, and the classical
//    log x - Psi(x) sandwich inequalities
//  - regularized lower incomplete gamma against closed forms
//  - the logarithmic test function and its derivatives
//  - the envelopes G1..G4, their frozen values, monotonicity, and their role
//    as sup-norm bounds on the gamma density and |x f_p'|

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "lsgrid/special_functions.hpp"

using namespace lsgrid;

namespace {

// Coarse grid scan followed by golden-section refinement around the best cell.
template <class F>
double maximum_of(F f, double lo, double hi, int cells = 4000) {
    double best_x = lo;
    double best = f(lo);
    for (int i = 1; i <= cells; ++i) {
        const double x = lo + (hi - lo) * i / cells;
        const double v = f(x);
        if (v > best) {
            best = v;
            best_x = x;
        }
    }
    double a = std::max(lo, best_x - (hi - lo) / cells);
    double b = std::min(hi, best_x + (hi - lo) / cells);
    const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
    double c = b - gr * (b - a);
    double d = a + gr * (b - a);
    double fc = f(c), fd = f(d);
    for (int it = 0; it < 200; ++it) {
        if (fc > fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - gr * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + gr * (b - a);
            fd = f(d);
        }
    }
    return std::max({best, fc, fd});
}

}  // namespace

TEST_CASE("log_gamma matches exact and reference values", "[special_functions]") {
    SECTION("integer and half-integer points") {
        CHECK(log_gamma(1.0) == Catch::Approx(0.0).margin(1e-13));
        CHECK(log_gamma(2.0) == Catch::Approx(0.0).margin(1e-13));
        CHECK(log_gamma(5.0) == Catch::Approx(std::log(24.0)).margin(1e-13));
        CHECK(log_gamma(0.5) == Catch::Approx(0.5 * std::log(std::acos(-1.0))).margin(1e-13));
    }
    SECTION("reference values, absolute error") {
        CHECK(log_gamma(1e-3) == Catch::Approx(6.9071788853838537).margin(1e-13));
        CHECK(log_gamma(0.1) == Catch::Approx(2.2527126517342060).margin(1e-13));
        CHECK(log_gamma(1.5) == Catch::Approx(-0.12078223763524522).margin(1e-13));
        CHECK(log_gamma(3.7) == Catch::Approx(1.4280723266653879).margin(1e-13));
        CHECK(log_gamma(10.0) == Catch::Approx(12.801827480081470).margin(1e-13));
    }
    SECTION("reference values, relative error at large arguments") {
        CHECK(log_gamma(100.0) == Catch::Approx(359.13420536957540).epsilon(5e-15));
        CHECK(log_gamma(1000.0) == Catch::Approx(5905.2204232091812).epsilon(5e-15));
        CHECK(log_gamma(1e6) == Catch::Approx(12815504.569147612).epsilon(5e-15));
    }
    SECTION("recurrence residual over a log grid") {
        for (int i = 0; i <= 300; ++i) {
            const double x = std::pow(10.0, -3.0 + 9.0 * i / 300.0);
            const double lhs = log_gamma(x + 1.0);
            const double rhs = log_gamma(x) + std::log(x);
            CHECK(std::fabs(lhs - rhs) <= 5e-15 * std::max(1.0, std::fabs(lhs)));
        }
    }
    SECTION("domain") {
        CHECK_THROWS_AS(log_gamma(0.0), std::domain_error);
        CHECK_THROWS_AS(log_gamma(-2.5), std::domain_error);
    }
}

TEST_CASE("digamma matches references and satisfies its recurrence", "[special_functions]") {
    SECTION("reference values") {
        CHECK(digamma(1.0) == Catch::Approx(-euler_gamma).margin(1e-12));
        CHECK(digamma(0.5) == Catch::Approx(-1.9635100260214235).margin(1e-12));
        CHECK(digamma(1e-3) == Catch::Approx(-1000.5755719318103).margin(1e-11));
        CHECK(digamma(10.0) == Catch::Approx(2.2517525890667211).margin(1e-12));
        CHECK(digamma(1e6) == Catch::Approx(13.815510057964191).margin(1e-12));
    }
    SECTION("recurrence residual on a log grid over [0.01, 1e4]") {
        for (int i = 0; i <= 400; ++i) {
            const double x = std::pow(10.0, -2.0 + 6.0 * i / 400.0);
            const double residual = digamma(x + 1.0) - digamma(x) - 1.0 / x;
            CHECK(std::fabs(residual) <= 1e-12);
        }
        CHECK(digamma(3.0) - digamma(2.0) == Catch::Approx(0.5).margin(1e-12));
    }
    SECTION("log x - Psi(x) sandwich on a 1e4-point log grid over [0.01, 100]") {
        for (int i = 0; i < 10000; ++i) {
            const double x = std::pow(10.0, -2.0 + 4.0 * i / 9999.0);
            const double gap = std::log(x) - digamma(x);
            REQUIRE(gap >= 1.0 / (2.0 * x));
            REQUIRE(gap <= 1.0 / x);
            REQUIRE(gap - 1.0 / (2.0 * x) <= 1.0 / (12.0 * x * x));
        }
    }
    SECTION("domain") {
        CHECK_THROWS_AS(digamma(0.0), std::domain_error);
        CHECK_THROWS_AS(digamma(-1.0), std::domain_error);
    }
}

TEST_CASE("regularized lower incomplete gamma", "[special_functions]") {
    SECTION("shape 1 reduces to the exponential cdf") {
        for (double x : {0.01, 0.3, 1.0, 2.5, 10.0, 40.0}) {
            CHECK(regularized_lower_gamma(1.0, x) ==
                  Catch::Approx(-std::expm1(-x)).margin(1e-13));
        }
    }
    SECTION("integer shape matches the Erlang closed form") {
        const int j = 5;
        for (double x : {0.5, 2.0, 5.0, 9.0, 20.0}) {
            double tail = 0.0;
            double term = 1.0;
            for (int i = 0; i < j; ++i) {
                tail += term;
                term *= x / (i + 1.0);
            }
            const double erlang = 1.0 - std::exp(-x) * tail;
            CHECK(regularized_lower_gamma(5.0, x) == Catch::Approx(erlang).margin(1e-12));
        }
    }
    SECTION("non-integer shape reference values (shape 2.5, rate 2)") {
        CHECK(regularized_lower_gamma(2.5, 2.0 * 0.3) ==
              Catch::Approx(0.055122634997878085).margin(1e-12));
        CHECK(regularized_lower_gamma(2.5, 2.0 * 1.0) ==
              Catch::Approx(0.45058404864721977).margin(1e-12));
        CHECK(regularized_lower_gamma(2.5, 2.0 * 4.0) ==
              Catch::Approx(0.99315592607757957).margin(1e-12));
    }
    SECTION("boundary and monotonicity") {
        CHECK(regularized_lower_gamma(3.2, 0.0) == 0.0);
        double last = 0.0;
        for (int i = 1; i <= 50; ++i) {
            const double v = regularized_lower_gamma(3.2, 0.4 * i);
            CHECK(v >= last);
            last = v;
        }
        CHECK(last <= 1.0 + 1e-14);
    }
}

TEST_CASE("test function phi and its derivatives", "[special_functions]") {
    SECTION("values") {
        CHECK(test_phi(0.0, 0) == 0.0);
        CHECK(test_phi(1.0, 0) == Catch::Approx(0.75).margin(1e-15));
        CHECK(test_phi(2.0, 4) == Catch::Approx(0.25).margin(1e-15));
        CHECK(test_phi(std::exp(1.5), 0) == Catch::Approx(0.0).margin(1e-14));
        CHECK(test_phi(1.0, 1) == Catch::Approx(1.0).margin(1e-15));
        CHECK(test_phi(1.0, 2) == Catch::Approx(0.0).margin(1e-15));
    }
    SECTION("each derivative is the difference quotient of its predecessor") {
        const double h = 1e-6;
        for (double x : {0.5, 1.0, 2.0, 4.0}) {
            for (int order = 1; order <= 4; ++order) {
                const double fd =
                    (test_phi(x + h, order - 1) - test_phi(x - h, order - 1)) / (2.0 * h);
                CHECK(test_phi(x, order) == Catch::Approx(fd).margin(1e-5));
            }
        }
    }
    SECTION("domain") {
        CHECK_THROWS_AS(test_phi(-1.0, 0), std::domain_error);
        CHECK_THROWS_AS(test_phi(0.0, 1), std::domain_error);
        CHECK_THROWS_AS(test_phi(1.0, 5), std::domain_error);
        CHECK_THROWS_AS(test_phi(1.0, -1), std::domain_error);
    }
}

TEST_CASE("envelopes G1..G4", "[special_functions]") {
    SECTION("frozen values") {
        CHECK(envelope(EnvelopeId::G1, 1.0) == 1.0);
        CHECK(envelope(EnvelopeId::G1, 2.0) == Catch::Approx(0.36787944117144233).epsilon(1e-12));
        CHECK(envelope(EnvelopeId::G1, 3.0) == Catch::Approx(0.27067056647322538).epsilon(1e-12));
        CHECK(envelope(EnvelopeId::G1, 10.0) == Catch::Approx(0.13175564000952268).epsilon(1e-12));
        CHECK(envelope(EnvelopeId::G1, 20.0) == Catch::Approx(0.091123132468412291).epsilon(1e-12));

        CHECK(envelope(EnvelopeId::G2, 1.0) == Catch::Approx(std::exp(-1.0)).epsilon(1e-12));
        CHECK(envelope(EnvelopeId::G2, 2.0) == Catch::Approx(0.30900478598767571).epsilon(1e-12));
        CHECK(envelope(EnvelopeId::G2, 5.0) == Catch::Approx(0.27968708223698501).epsilon(1e-12));
        CHECK(envelope(EnvelopeId::G2, 20.0) == Catch::Approx(0.26003153155335072).epsilon(1e-12));

        CHECK(envelope(EnvelopeId::G3, 2.0) == 1.0);
        CHECK(envelope(EnvelopeId::G3, 3.0) == Catch::Approx(0.23057939600360173).epsilon(1e-12));
        CHECK(envelope(EnvelopeId::G3, 10.0) == Catch::Approx(0.034419244510281434).epsilon(1e-12));

        CHECK(envelope(EnvelopeId::G4, 2.0) == 1.0);
        CHECK(envelope(EnvelopeId::G4, 3.0) == Catch::Approx(0.55401641712962144).epsilon(1e-12));
        CHECK(envelope(EnvelopeId::G4, 5.0) == Catch::Approx(0.49555731672495360).epsilon(1e-12));
        CHECK(envelope(EnvelopeId::G4, 10.0) == Catch::Approx(0.47451434678357891).epsilon(1e-12));
    }
    SECTION("monotone non-increasing on a 1000-point grid") {
        auto check_monotone = [](EnvelopeId id, double lo) {
            double last = envelope(id, lo);
            for (int i = 1; i <= 1000; ++i) {
                const double p = lo + (200.0 - lo) * i / 1000.0;
                const double v = envelope(id, p);
                CHECK(v <= last + 1e-14);
                last = v;
            }
        };
        check_monotone(EnvelopeId::G1, 1.0);
        check_monotone(EnvelopeId::G2, 1.0);
        check_monotone(EnvelopeId::G3, 2.0);
        check_monotone(EnvelopeId::G4, 2.0);
    }
    SECTION("G1 is the sup of the density, G2 the sup of |x f_p'|") {
        for (double p : {1.0, 2.0, 5.0, 10.0}) {
            const double sup_f = maximum_of(
                [p](double x) { return gamma_density(p, x); }, 1e-9, p + 30.0);
            CHECK(sup_f == Catch::Approx(envelope(EnvelopeId::G1, p)).epsilon(1e-8));
            const double sup_xfp = maximum_of(
                [p](double x) { return std::fabs(x * gamma_density_derivative(p, 1, x)); },
                1e-9, p + 30.0);
            CHECK(sup_xfp == Catch::Approx(envelope(EnvelopeId::G2, p)).epsilon(1e-8));
        }
    }
    SECTION("domain") {
        CHECK_THROWS_AS(envelope(EnvelopeId::G1, 0.5), std::domain_error);
        CHECK_THROWS_AS(envelope(EnvelopeId::G3, 1.5), std::domain_error);
        CHECK_THROWS_AS(envelope(EnvelopeId::G4, 1.0), std::domain_error);
    }
}

TEST_CASE("gamma density derivatives", "[special_functions]") {
    SECTION("order 0 equals the density") {
        for (double x : {0.2, 1.0, 3.5}) {
            CHECK(gamma_density_derivative(2.5, 0, x) ==
                  Catch::Approx(gamma_density(2.5, x)).epsilon(1e-14));
        }
    }
    SECTION("analytic spot values") {
        CHECK(gamma_density_derivative(3.0, 2, 1.0) ==
              Catch::Approx(-0.5 * std::exp(-1.0)).epsilon(1e-13));
        CHECK(gamma_density_derivative(2.0, 1, 1.0) == Catch::Approx(0.0).margin(1e-15));
    }
    SECTION("orders 1..4 are difference quotients of the previous order") {
        const double h = 1e-6;
        for (double p : {2.0, 3.5, 6.0}) {
            for (double x : {0.5, 2.0, 5.0}) {
                for (int order = 1; order <= 4; ++order) {
                    const double fd = (gamma_density_derivative(p, order - 1, x + h) -
                                       gamma_density_derivative(p, order - 1, x - h)) /
                                      (2.0 * h);
                    const double v = gamma_density_derivative(p, order, x);
                    CHECK(v == Catch::Approx(fd).margin(1e-5 * std::max(1.0, std::fabs(v))));
                }
            }
        }
    }
}
