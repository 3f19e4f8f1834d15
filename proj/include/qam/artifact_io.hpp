#pragma once

#include <fstream>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "qam/arrow_profile.hpp"
#include "qam/constructions.hpp"
#include "qam/errors.hpp"
#include "qam/family.hpp"

namespace qam {

using ordered_json = nlohmann::ordered_json;

/// On-disk form of an Arrow-profile family: piecewise-linear knots per n plus
/// the shared anchor, with the construction certificate appended on request.
struct FamilyArtifact {
    Interval domain{0.0, 1.0};
    double anchor = 0.5;
    std::map<int, ArrowProfile> profiles;
    std::optional<ConstructionCertificate> certificate;
};

inline ordered_json certificate_to_json(const ConstructionCertificate& c) {
    ordered_json j;
    if (std::isfinite(c.eps)) j["eps"] = c.eps;
    j["bump_l1"] = c.bump_l1;
    j["family_l1"] = c.family_l1;
    if (!c.cover_lengths.empty()) j["cover_lengths"] = c.cover_lengths;
    if (!c.cover_delta_h.empty()) j["cover_delta_h"] = c.cover_delta_h;
    if (!c.sample_heights.empty()) {
        j["sample_point"] = c.sample_point;
        j["sample_heights"] = c.sample_heights;
    }
    if (c.away) {
        j["away"] = {{"ratio_bound", c.away->ratio_bound},
                     {"x", c.away->x},
                     {"z", c.away->z},
                     {"xi", c.away->xi},
                     {"y", c.away->y}};
    }
    if (!c.rational_centers.empty()) j["rational_centers"] = c.rational_centers;
    if (c.query) j["query"] = {{"lo", c.query->lo}, {"hi", c.query->hi}};
    if (!c.query_integrals.empty()) {
        j["query_integrals"] = c.query_integrals;
        j["growth_i"] = c.growth_i;
        j["growth_k0"] = c.growth_k0;
        j["growth_bound"] = c.growth_bound;
    }
    j["anchor"] = c.anchor;
    if (!c.notes.empty()) j["notes"] = c.notes;
    return j;
}

inline ConstructionCertificate certificate_from_json(const ordered_json& j) {
    ConstructionCertificate c;
    if (j.contains("eps")) c.eps = j["eps"].get<double>();
    if (j.contains("bump_l1")) c.bump_l1 = j["bump_l1"].get<std::vector<double>>();
    if (j.contains("family_l1")) c.family_l1 = j["family_l1"].get<std::vector<double>>();
    if (j.contains("cover_lengths")) c.cover_lengths = j["cover_lengths"].get<std::vector<double>>();
    if (j.contains("cover_delta_h")) c.cover_delta_h = j["cover_delta_h"].get<std::vector<double>>();
    if (j.contains("sample_point")) c.sample_point = j["sample_point"].get<double>();
    if (j.contains("sample_heights"))
        c.sample_heights = j["sample_heights"].get<std::vector<double>>();
    if (j.contains("away")) {
        BoundedAwayWitness w;
        w.ratio_bound = j["away"]["ratio_bound"].get<double>();
        w.x = j["away"]["x"].get<double>();
        w.z = j["away"]["z"].get<double>();
        w.xi = j["away"]["xi"].get<double>();
        w.y = j["away"]["y"].get<double>();
        c.away = w;
    }
    if (j.contains("rational_centers"))
        c.rational_centers = j["rational_centers"].get<std::vector<double>>();
    if (j.contains("query"))
        c.query = Interval(j["query"]["lo"].get<double>(), j["query"]["hi"].get<double>());
    if (j.contains("query_integrals")) {
        c.query_integrals = j["query_integrals"].get<std::vector<double>>();
        c.growth_i = j["growth_i"].get<int>();
        c.growth_k0 = j["growth_k0"].get<int>();
        c.growth_bound = j["growth_bound"].get<std::vector<double>>();
    }
    if (j.contains("anchor")) c.anchor = j["anchor"].get<double>();
    if (j.contains("notes")) c.notes = j["notes"].get<std::vector<std::string>>();
    return c;
}

inline ordered_json artifact_to_json(const FamilyArtifact& art) {
    ordered_json j;
    j["domain"] = {{"lo", art.domain.lo}, {"hi", art.domain.hi}};
    j["anchor"] = art.anchor;
    j["profiles"] = ordered_json::array();
    for (const auto& [n, prof] : art.profiles) {
        ordered_json knots = ordered_json::array();
        auto xs = prof.knots_x();
        auto as = prof.knots_a();
        for (std::size_t i = 0; i < xs.size(); ++i)
            knots.push_back({{"x", xs[i]}, {"a", as[i]}});
        j["profiles"].push_back({{"n", n}, {"knots", std::move(knots)}});
    }
    if (art.certificate) j["certificate"] = certificate_to_json(*art.certificate);
    return j;
}

inline FamilyArtifact artifact_from_json(const ordered_json& j) {
    FamilyArtifact art;
    art.domain = Interval(j.at("domain").at("lo").get<double>(),
                          j.at("domain").at("hi").get<double>());
    art.anchor = j.at("anchor").get<double>();
    for (const auto& p : j.at("profiles")) {
        int n = p.at("n").get<int>();
        std::vector<double> xs, as;
        for (const auto& k : p.at("knots")) {
            xs.push_back(k.at("x").get<double>());
            as.push_back(k.at("a").get<double>());
        }
        art.profiles.emplace(n, ArrowProfile(art.domain, std::move(xs), std::move(as)));
    }
    if (j.contains("certificate"))
        art.certificate = certificate_from_json(j.at("certificate"));
    return art;
}

inline void save_artifact(const std::string& path, const FamilyArtifact& art) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot open artifact path for writing: " + path);
    out << artifact_to_json(art).dump(2) << "\n";
}

inline FamilyArtifact load_artifact(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open artifact: " + path);
    ordered_json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        throw Error("artifact parse failure (" + path + "): " + e.what());
    }
    return artifact_from_json(j);
}

inline GeneratorFamily family_from_artifact(const FamilyArtifact& art,
                                            QuadratureConfig quad = {}) {
    return arrow_profile_seq_family("file-family", art.profiles, art.anchor, quad);
}

} // namespace qam
