#pragma once

// JSON wire formats for specs, lattices, mixtures, and certificates, plus
// the lattice CSV emitter. Parsing throws std::invalid_argument for shape
// problems; the JSON library's own exceptions pass through for missing or
// mistyped fields.

#include <cstddef>
#include <cstdio>
#include <fstream>
#include <memory>
#include <sstream>
#include <stdexcept>
#include <string>
#include <variant>

#include <json.hpp>

#include "lsgrid/bounds.hpp"
#include "lsgrid/distribution.hpp"
#include "lsgrid/distribution_types.hpp"
#include "lsgrid/lattice_pmf.hpp"

namespace lsgrid {

inline const char* bound_source_name(BoundSource source) {
    switch (source) {
        case BoundSource::richardson_step: return "richardson_step";
        case BoundSource::richardson_interpolated: return "richardson_interpolated";
        case BoundSource::exponential: return "exponential";
        case BoundSource::gamma: return "gamma";
        case BoundSource::erlang_mixture: return "erlang_mixture";
        case BoundSource::compound: return "compound";
    }
    return "unknown";
}

inline const char* provenance_name(LatticeProvenance provenance) {
    switch (provenance) {
        case LatticeProvenance::ls_discretization: return "ls_discretization";
        case LatticeProvenance::rounding: return "rounding";
        case LatticeProvenance::compound: return "compound";
    }
    return "unknown";
}

inline nlohmann::json counting_to_json(const CountingSpec& spec) {
    return std::visit(
        detail::overloaded{
            [](const Geometric& g) { return nlohmann::json{{"type", "geometric"}, {"p", g.p}}; },
            [](const Poisson& p) { return nlohmann::json{{"type", "poisson"}, {"lambda", p.lambda}}; },
            [](const NegativeBinomial& nb) {
                return nlohmann::json{{"type", "negative_binomial"}, {"r", nb.r}, {"p", nb.p}};
            },
            [](const Binomial& b) {
                return nlohmann::json{{"type", "binomial"}, {"n", b.n}, {"p", b.p}};
            },
            [](const FinitePmf& f) {
                return nlohmann::json{{"type", "finite_pmf"}, {"masses", f.masses}};
            }},
        spec);
}

inline CountingSpec counting_from_json(const nlohmann::json& j) {
    const std::string type = j.at("type").get<std::string>();
    if (type == "geometric") return Geometric{j.at("p").get<double>()};
    if (type == "poisson") return Poisson{j.at("lambda").get<double>()};
    if (type == "negative_binomial") {
        return NegativeBinomial{j.at("r").get<double>(), j.at("p").get<double>()};
    }
    if (type == "binomial") return Binomial{j.at("n").get<int>(), j.at("p").get<double>()};
    if (type == "finite_pmf") return FinitePmf{j.at("masses").get<std::vector<double>>()};
    throw std::invalid_argument("counting spec: unknown type \"" + type + "\"");
}

inline nlohmann::json mixture_to_json(const ErlangMixture& mix) {
    nlohmann::json comps = nlohmann::json::array();
    for (const ErlangComponent& comp : mix.components) {
        comps.push_back({{"a", comp.a}, {"j", comp.j}, {"w", comp.w}});
    }
    return nlohmann::json{{"type", "erlang_mixture"},
                          {"zero_mass", mix.zero_mass},
                          {"components", comps},
                          {"truncated_mass", mix.truncated_mass}};
}

inline nlohmann::json spec_to_json(const DistributionSpec& spec) {
    return std::visit(
        detail::overloaded{
            [](const Exponential& e) {
                return nlohmann::json{{"type", "exponential"}, {"rate", e.rate}};
            },
            [](const Gamma& g) { return nlohmann::json{{"type", "gamma"}, {"a", g.a}, {"p", g.p}}; },
            [](const ErlangMixture& mix) { return mixture_to_json(mix); },
            [](const PhaseTypeRep& rep) {
                return nlohmann::json{{"type", "phase_type"}, {"alpha", rep.alpha}, {"A", rep.A}};
            },
            [](const GeometricExpCompound& g) {
                return nlohmann::json{{"type", "geometric_exp_compound"}, {"p", g.p}};
            },
            [](const Compound& c) {
                return nlohmann::json{{"type", "compound"},
                                      {"counting", counting_to_json(c.counting)},
                                      {"summand", spec_to_json(*c.summand)}};
            }},
        spec);
}

inline DistributionSpec spec_from_json(const nlohmann::json& j) {
    const std::string type = j.at("type").get<std::string>();
    if (type == "exponential") return Exponential{j.at("rate").get<double>()};
    if (type == "gamma") return Gamma{j.at("a").get<double>(), j.at("p").get<double>()};
    if (type == "erlang_mixture") {
        ErlangMixture mix;
        mix.zero_mass = j.at("zero_mass").get<double>();
        for (const nlohmann::json& comp : j.at("components")) {
            mix.components.push_back(ErlangComponent{comp.at("a").get<double>(),
                                                     comp.at("j").get<int>(),
                                                     comp.at("w").get<double>()});
        }
        if (j.contains("truncated_mass")) mix.truncated_mass = j.at("truncated_mass").get<double>();
        return mix;
    }
    if (type == "phase_type") {
        PhaseTypeRep rep;
        rep.alpha = j.at("alpha").get<std::vector<double>>();
        rep.A = j.at("A").get<std::vector<std::vector<double>>>();
        return rep;
    }
    if (type == "geometric_exp_compound") return GeometricExpCompound{j.at("p").get<double>()};
    if (type == "compound") {
        Compound c;
        c.counting = counting_from_json(j.at("counting"));
        c.summand = std::make_shared<const DistributionSpec>(spec_from_json(j.at("summand")));
        return c;
    }
    throw std::invalid_argument("distribution spec: unknown type \"" + type + "\"");
}

// Reads, parses, and validates a spec file.
inline DistributionSpec load_spec(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("spec file: cannot open \"" + path + "\"");
    nlohmann::json j;
    in >> j;
    DistributionSpec spec = spec_from_json(j);
    validate(spec);
    return spec;
}

inline nlohmann::json certificate_to_json(const ErrorCertificate& cert) {
    nlohmann::json inputs = nlohmann::json::object();
    for (const auto& [name, value] : cert.inputs) inputs[name] = value;
    return nlohmann::json{{"bound", cert.bound},
                          {"source", bound_source_name(cert.source)},
                          {"t", cert.t},
                          {"inputs", inputs}};
}

inline nlohmann::json lattice_to_json(const LatticePmf& pmf) {
    return nlohmann::json{{"t", pmf.t},
                          {"provenance", provenance_name(pmf.provenance)},
                          {"masses", pmf.masses},
                          {"tail_mass", pmf.tail_mass}};
}

inline std::string lattice_to_csv(const LatticePmf& pmf) {
    std::ostringstream out;
    out << "k,mass,cumulative\n";
    char buf[64];
    double cum = 0.0;
    for (std::size_t k = 0; k < pmf.masses.size(); ++k) {
        cum += pmf.masses[k];
        std::snprintf(buf, sizeof(buf), "%zu,%.17g,%.17g\n", k, pmf.masses[k], cum);
        out << buf;
    }
    return out.str();
}

}  // namespace lsgrid
