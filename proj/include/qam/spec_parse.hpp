#pragma once

#include <optional>
#include <string>
#include <vector>

#include "qam/artifact_io.hpp"
#include "qam/errors.hpp"
#include "qam/family.hpp"
#include "qam/generator.hpp"

namespace qam {

// Mini-grammar shared by the CLI and the config file:
//   generator  :=  name[:p1[,p2...]][@lo,hi]  |  affine(generator,alpha,beta)[@lo,hi]
//   family     :=  kind[:params][@lo,hi]      |  file:PATH
//   n-grid     :=  a..b[..step]               (or an explicit comma list)
// Domains may be omitted when the command can infer one (grid hull, entries).

inline std::vector<double> parse_number_list(const std::string& s) {
    std::vector<double> out;
    std::size_t pos = 0;
    while (pos < s.size()) {
        std::size_t comma = s.find(',', pos);
        std::string tok = s.substr(pos, comma == std::string::npos ? comma : comma - pos);
        try {
            std::size_t used = 0;
            out.push_back(std::stod(tok, &used));
            if (used != tok.size()) throw std::invalid_argument(tok);
        } catch (const std::exception&) {
            throw InvalidParameter("cannot parse number '" + tok + "' in '" + s + "'");
        }
        if (comma == std::string::npos) break;
        pos = comma + 1;
    }
    if (out.empty()) throw InvalidParameter("empty number list: '" + s + "'");
    return out;
}

inline Interval parse_interval(const std::string& s) {
    auto v = parse_number_list(s);
    if (v.size() != 2) throw InvalidParameter("interval must be 'lo,hi', got '" + s + "'");
    return Interval(v[0], v[1]);
}

inline NGrid parse_ngrid(const std::string& s) {
    NGrid g;
    std::size_t dots = s.find("..");
    if (dots == std::string::npos) {
        for (double v : parse_number_list(s)) g.indices.push_back(int(v));
        g.validate();
        return g;
    }
    std::string first = s.substr(0, dots);
    std::string rest = s.substr(dots + 2);
    int step = 1;
    std::size_t dots2 = rest.find("..");
    std::string last = rest;
    if (dots2 != std::string::npos) {
        last = rest.substr(0, dots2);
        step = std::stoi(rest.substr(dots2 + 2));
    }
    try {
        return NGrid::range(std::stoi(first), std::stoi(last), step);
    } catch (const Error&) {
        throw;
    } catch (const std::exception&) {
        throw InvalidParameter("cannot parse n-grid '" + s + "'");
    }
}

namespace detail {

struct SpecParts {
    std::string base;                 // name[:params] or affine(...)
    std::optional<Interval> domain;   // from @lo,hi
};

inline SpecParts split_domain(const std::string& spec) {
    SpecParts p;
    std::size_t at = spec.rfind('@');
    if (at == std::string::npos) {
        p.base = spec;
    } else {
        p.base = spec.substr(0, at);
        p.domain = parse_interval(spec.substr(at + 1));
    }
    if (p.base.empty()) throw InvalidParameter("empty spec");
    return p;
}

inline std::pair<std::string, std::vector<double>> split_params(const std::string& base) {
    std::size_t colon = base.find(':');
    if (colon == std::string::npos) return {base, {}};
    return {base.substr(0, colon), parse_number_list(base.substr(colon + 1))};
}

} // namespace detail

/// Parse a single-generator spec. `fallback` supplies the domain when the
/// spec has no @lo,hi part.
inline Generator parse_generator_spec(const std::string& spec,
                                      std::optional<Interval> fallback = {}) {
    auto parts = detail::split_domain(spec);
    std::optional<Interval> domain = parts.domain ? parts.domain : fallback;

    if (parts.base.rfind("affine(", 0) == 0) {
        if (parts.base.back() != ')')
            throw InvalidParameter("unbalanced affine(...) in '" + spec + "'");
        std::string inner = parts.base.substr(7, parts.base.size() - 8);
        // split off the trailing ,alpha,beta (the inner spec may itself contain commas)
        std::size_t c2 = inner.rfind(',');
        if (c2 == std::string::npos) throw InvalidParameter("affine needs (spec,alpha,beta)");
        std::size_t c1 = inner.rfind(',', c2 - 1);
        if (c1 == std::string::npos) throw InvalidParameter("affine needs (spec,alpha,beta)");
        double beta, alpha;
        try {
            alpha = std::stod(inner.substr(c1 + 1, c2 - c1 - 1));
            beta = std::stod(inner.substr(c2 + 1));
        } catch (const std::exception&) {
            throw InvalidParameter("cannot parse affine coefficients in '" + spec + "'");
        }
        Generator g = parse_generator_spec(inner.substr(0, c1), domain);
        return affine_transform(g, alpha, beta);
    }

    auto [name, params] = detail::split_params(parts.base);
    if (!domain) throw InvalidParameter("generator spec '" + spec + "' needs a domain @lo,hi");
    if (name == "identity") return identity_generator(*domain);
    if (name == "power") {
        if (params.size() != 1) throw InvalidParameter("power needs one parameter: power:p");
        return power_generator(params[0], *domain);
    }
    if (name == "exp") {
        if (params.size() != 1) throw InvalidParameter("exp needs one parameter: exp:t");
        return exponential_generator(params[0], *domain);
    }
    if (name == "log") return log_generator(*domain);
    throw InvalidParameter("unknown generator '" + name + "' in '" + spec + "'");
}

/// Parse a family spec (builtin sequences, constant wrapper, or file:PATH
/// artifact).
inline GeneratorFamily parse_family_spec(const std::string& spec,
                                         std::optional<Interval> fallback = {},
                                         QuadratureConfig quad = {}) {
    if (spec.rfind("file:", 0) == 0) {
        FamilyArtifact art = load_artifact(spec.substr(5));
        return family_from_artifact(art, quad);
    }
    auto parts = detail::split_domain(spec);
    std::optional<Interval> domain = parts.domain ? parts.domain : fallback;
    if (!domain) throw InvalidParameter("family spec '" + spec + "' needs a domain @lo,hi");

    std::size_t colon = parts.base.find(':');
    std::string name = colon == std::string::npos ? parts.base : parts.base.substr(0, colon);
    std::string rest = colon == std::string::npos ? "" : parts.base.substr(colon + 1);

    if (name == "exp-seq") {
        double scale = rest.empty() ? 1.0 : parse_number_list(rest).at(0);
        return exp_seq_family(*domain, scale);
    }
    if (name == "power-seq") {
        double scale = rest.empty() ? 1.0 : parse_number_list(rest).at(0);
        return power_seq_family(*domain, scale);
    }
    if (name == "constant") {
        if (rest.empty()) throw InvalidParameter("constant family needs a generator: constant:NAME[,p]");
        // rewrite 'name,p1,p2' into the generator grammar 'name:p1,p2'
        std::size_t comma = rest.find(',');
        std::string gen_spec = comma == std::string::npos
                                   ? rest
                                   : rest.substr(0, comma) + ":" + rest.substr(comma + 1);
        return constant_family(parse_generator_spec(gen_spec, domain));
    }
    throw InvalidParameter("unknown family '" + name + "' in '" + spec + "'");
}

} // namespace qam
