// Command line front end: comparison and acceleration tables, pointwise
// approximant evaluation, error certificates, and the Erlang-mixture
// expansion of phase-type laws. Specs come from JSON files; without --spec
// every subcommand runs on the built-in geometric-exponential compound with
// p = 0.1, the worked example the tables were designed around.
//
// Exit codes: 0 on success, 1 for bad input (unparsable flags, malformed
// specs, domain violations), 2 when a computation starts but cannot finish
// within its numeric budget.

#include <cmath>
#include <cstddef>
#include <cstdio>
#include <iostream>
#include <string>
#include <variant>
#include <vector>

#include <CLI11.hpp>

#include "lsgrid/lsgrid.hpp"

namespace {

double parse_number(const std::string& text, const char* what) {
    std::size_t pos = 0;
    double value = 0.0;
    try {
        value = std::stod(text, &pos);
    } catch (const std::exception&) {
        throw std::invalid_argument(std::string(what) + ": cannot parse \"" + text + "\"");
    }
    if (pos != text.size()) {
        throw std::invalid_argument(std::string(what) + ": cannot parse \"" + text + "\"");
    }
    return value;
}

// Accepts either a decimal or a fraction "k/m", so grid points like 25/5
// can be named exactly.
double parse_rational(const std::string& token, const char* what) {
    const std::size_t slash = token.find('/');
    if (slash == std::string::npos) return parse_number(token, what);
    const double num = parse_number(token.substr(0, slash), what);
    const double den = parse_number(token.substr(slash + 1), what);
    if (!(den > 0.0)) {
        throw std::invalid_argument(std::string(what) + ": denominator must be positive in \"" +
                                    token + "\"");
    }
    return num / den;
}

int require_integer_scale(double t) {
    if (!(t >= 1.0) || std::abs(t - std::round(t)) > 1e-9) {
        throw std::domain_error("t must be a positive integer for this subcommand");
    }
    return static_cast<int>(std::llround(t));
}

lsgrid::DistributionSpec load_or_default(const std::string& path) {
    if (path.empty()) return lsgrid::GeometricExpCompound{0.1};
    return lsgrid::load_spec(path);
}

void emit_comparison(const std::vector<lsgrid::ComparisonRow>& rows, const std::string& format) {
    if (format == "json") {
        nlohmann::json out = nlohmann::json::array();
        for (const lsgrid::ComparisonRow& r : rows) {
            out.push_back({{"k", r.k},
                           {"x", r.x},
                           {"exact", r.exact},
                           {"lattice", r.lattice},
                           {"rounding", r.rounding},
                           {"post_widder", r.post_widder}});
        }
        std::cout << out.dump(2) << "\n";
    } else if (format == "csv") {
        std::printf("x,exact,lattice,rounding,post_widder\n");
        for (const lsgrid::ComparisonRow& r : rows) {
            std::printf("%g,%.4f,%.4f,%.4f,%.4f\n", r.x, r.exact, r.lattice, r.rounding,
                        r.post_widder);
        }
    } else {
        std::printf("%10s %10s %10s %10s %12s\n", "x", "exact", "lattice", "rounding",
                    "post-widder");
        for (const lsgrid::ComparisonRow& r : rows) {
            std::printf("%10g %10.4f %10.4f %10.4f %12.4f\n", r.x, r.exact, r.lattice, r.rounding,
                        r.post_widder);
        }
    }
}

void emit_acceleration(const std::vector<lsgrid::AccelerationRow>& rows,
                       const std::string& format) {
    if (format == "json") {
        nlohmann::json out = nlohmann::json::array();
        for (const lsgrid::AccelerationRow& r : rows) {
            out.push_back({{"k", r.k},
                           {"x", r.x},
                           {"exact", r.exact},
                           {"lattice_t", r.lattice_t},
                           {"lattice_2t", r.lattice_2t},
                           {"accelerated", r.accelerated},
                           {"stehfest", r.stehfest}});
        }
        std::cout << out.dump(2) << "\n";
    } else if (format == "csv") {
        std::printf("x,exact,lattice_t,lattice_2t,accelerated,stehfest\n");
        for (const lsgrid::AccelerationRow& r : rows) {
            std::printf("%g,%.4f,%.4f,%.4f,%.4f,%.4f\n", r.x, r.exact, r.lattice_t, r.lattice_2t,
                        r.accelerated, r.stehfest);
        }
    } else {
        std::printf("%10s %10s %10s %11s %12s %10s\n", "x", "exact", "lattice-t", "lattice-2t",
                    "accelerated", "stehfest");
        for (const lsgrid::AccelerationRow& r : rows) {
            std::printf("%10g %10.4f %10.4f %11.4f %12.4f %10.4f\n", r.x, r.exact, r.lattice_t,
                        r.lattice_2t, r.accelerated, r.stehfest);
        }
    }
}

struct ApproxRow {
    double x = 0.0;
    double lattice = 0.0;
    double accelerated = 0.0;
};

void emit_approx(const std::vector<ApproxRow>& rows, const std::string& format) {
    if (format == "json") {
        nlohmann::json out = nlohmann::json::array();
        for (const ApproxRow& r : rows) {
            out.push_back({{"x", r.x}, {"lattice", r.lattice}, {"accelerated", r.accelerated}});
        }
        std::cout << out.dump(2) << "\n";
    } else if (format == "csv") {
        std::printf("x,lattice,accelerated\n");
        for (const ApproxRow& r : rows) {
            std::printf("%g,%.6f,%.6f\n", r.x, r.lattice, r.accelerated);
        }
    } else {
        std::printf("%10s %10s %12s\n", "x", "lattice", "accelerated");
        for (const ApproxRow& r : rows) {
            std::printf("%10g %10.6f %12.6f\n", r.x, r.lattice, r.accelerated);
        }
    }
}

void emit_certificate(const lsgrid::ErrorCertificate& cert, const std::string& format) {
    if (format == "json") {
        std::cout << lsgrid::certificate_to_json(cert).dump(2) << "\n";
    } else if (format == "csv") {
        std::printf("field,value\n");
        std::printf("bound,%.17g\n", cert.bound);
        std::printf("source,%s\n", lsgrid::bound_source_name(cert.source));
        std::printf("t,%.17g\n", cert.t);
        for (const auto& [name, value] : cert.inputs) {
            std::printf("%s,%.17g\n", name.c_str(), value);
        }
    } else {
        std::printf("%-12s %.6g\n", "bound", cert.bound);
        std::printf("%-12s %s\n", "source", lsgrid::bound_source_name(cert.source));
        std::printf("%-12s %g\n", "t", cert.t);
        for (const auto& [name, value] : cert.inputs) {
            std::printf("%-12s %g\n", name.c_str(), value);
        }
    }
}

void emit_mixture(const lsgrid::ErlangMixture& mix, const std::string& format) {
    if (format == "json") {
        std::cout << lsgrid::mixture_to_json(mix).dump(2) << "\n";
    } else if (format == "csv") {
        std::printf("j,a,w\n");
        for (const lsgrid::ErlangComponent& comp : mix.components) {
            std::printf("%d,%.17g,%.17g\n", comp.j, comp.a, comp.w);
        }
    } else {
        std::printf("%-16s %.6g\n", "zero mass", mix.zero_mass);
        std::printf("%-16s %.6g\n", "truncated mass", mix.truncated_mass);
        std::printf("%6s %10s %14s\n", "j", "rate", "weight");
        for (const lsgrid::ErlangComponent& comp : mix.components) {
            std::printf("%6d %10g %14.8g\n", comp.j, comp.a, comp.w);
        }
    }
}

int run(int argc, char** argv) {
    CLI::App app{"Distribution approximation from Laplace transform data"};
    app.require_subcommand(1);

    std::string spec_path;
    std::string t_token = "5";
    std::string format = "pretty";
    app.add_option("--spec", spec_path, "JSON spec file (default: geometric-exp compound, p=0.1)");
    app.add_option("--t", t_token, "lattice scale, decimal or fraction");
    app.add_option("--format", format, "output format")
        ->check(CLI::IsMember({"pretty", "csv", "json"}));

    std::vector<std::size_t> table1_ks{0, 5, 25, 50, 75, 100, 150, 200};
    CLI::App* table1 = app.add_subcommand(
        "table1", "exact cdf vs lattice, rounding, and Post-Widder columns on the grid k/t");
    table1->fallthrough();
    table1->add_option("--k", table1_ks, "grid indices")->delimiter(',');

    std::vector<std::size_t> table2_ks{5, 25, 50, 75, 100, 150, 200};
    CLI::App* table2 = app.add_subcommand(
        "table2", "Richardson-accelerated knots vs their ingredients and Stehfest-2");
    table2->fallthrough();
    table2->add_option("--k", table2_ks, "grid indices (>= 1)")->delimiter(',');

    std::vector<std::string> x_tokens;
    bool clamp = false;
    CLI::App* approx = app.add_subcommand(
        "approx", "lattice and accelerated cdf values at the given points");
    approx->fallthrough();
    approx->add_option("--x", x_tokens, "evaluation points, decimals or fractions k/t")
        ->required()
        ->delimiter(',');
    approx->add_flag("--clamp", clamp, "clamp accelerated values into [0,1]");

    double epsilon = 1e-10;
    CLI::App* bound = app.add_subcommand(
        "bound", "a-priori uniform error certificate for the accelerated approximant");
    bound->fallthrough();
    bound->add_option("--epsilon", epsilon, "expansion truncation tolerance for phase-type specs");

    std::string c_token;
    double expand_epsilon = 1e-10;
    CLI::App* ph_expand = app.add_subcommand(
        "ph-expand", "expand a phase-type spec into an Erlang mixture with a common rate");
    ph_expand->fallthrough();
    ph_expand->add_option("--c", c_token, "expansion rate (default: largest generator entry)");
    ph_expand->add_option("--epsilon", expand_epsilon, "truncation tolerance");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    const lsgrid::DistributionSpec spec = load_or_default(spec_path);
    const double t = parse_rational(t_token, "--t");

    if (table1->parsed()) {
        emit_comparison(lsgrid::comparison_table(spec, require_integer_scale(t), table1_ks),
                        format);
    } else if (table2->parsed()) {
        emit_acceleration(lsgrid::acceleration_table(spec, require_integer_scale(t), table2_ks),
                          format);
    } else if (approx->parsed()) {
        if (!(t > 0.0)) throw std::domain_error("--t must be positive");
        const lsgrid::StepCdf step = lsgrid::to_step_cdf(lsgrid::ls_pmf(spec, t));
        std::vector<ApproxRow> rows;
        rows.reserve(x_tokens.size());
        for (const std::string& token : x_tokens) {
            ApproxRow row;
            row.x = parse_rational(token, "--x");
            if (!(row.x >= 0.0)) throw std::domain_error("--x must be non-negative");
            const double u = t * row.x;
            // A point that lands on the grid gets the exact knot, not an
            // interpolated neighbour.
            if (std::abs(u - std::round(u)) < 1e-9) {
                const std::size_t k = static_cast<std::size_t>(std::llround(u));
                row.lattice = step.at_index(k);
                row.accelerated = lsgrid::m2_grid(spec, t, k);
                if (clamp) row.accelerated = std::min(1.0, std::max(0.0, row.accelerated));
            } else {
                row.lattice = step.value(row.x);
                row.accelerated = lsgrid::m2_eval(spec, t, row.x, {}, clamp);
            }
            rows.push_back(row);
        }
        emit_approx(rows, format);
    } else if (bound->parsed()) {
        if (!(t > 0.0)) throw std::domain_error("--t must be positive");
        emit_certificate(lsgrid::bound_for_spec(spec, t, epsilon), format);
    } else if (ph_expand->parsed()) {
        const lsgrid::PhaseTypeRep* rep = std::get_if<lsgrid::PhaseTypeRep>(&spec);
        if (rep == nullptr) {
            throw std::invalid_argument("ph-expand: spec must be a phase-type representation");
        }
        const double c = c_token.empty() ? lsgrid::default_expansion_rate(*rep)
                                         : parse_rational(c_token, "--c");
        emit_mixture(lsgrid::maier_expand(*rep, c, expand_epsilon), format);
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const lsgrid::numeric_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
