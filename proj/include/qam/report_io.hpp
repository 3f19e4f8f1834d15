#pragma once

#include <charconv>
#include <span>
#include <string>
#include <system_error>

#include <json.hpp>

#include "qam/diagnostics.hpp"

namespace qam {

/// Shortest round-trip decimal form of a double (deterministic across runs).
inline std::string format_double(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    if (res.ec != std::errc()) return "nan";
    return std::string(buf, res.ptr);
}

inline std::string csv_quote(const std::string& s) {
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += "\"\"";
        out += c;
    }
    out += "\"";
    return out;
}

inline nlohmann::ordered_json evidence_to_json(const DiagnosticReport& rep) {
    nlohmann::ordered_json ev;
    ev["window"] = rep.verdict.evidence.window_size;
    ev["window_min"] = rep.verdict.evidence.window_min;
    ev["window_max"] = rep.verdict.evidence.window_max;
    ev["log_slope"] = rep.verdict.evidence.log_slope;
    if (rep.c_hat) ev["c_hat"] = *rep.c_hat;
    if (rep.phi) ev["phi"] = *rep.phi;
    return ev;
}

inline nlohmann::ordered_json params_to_json(const DiagnosticReport& rep) {
    nlohmann::ordered_json p;
    for (const auto& [k, v] : rep.params) p[k] = v;
    return p;
}

/// CSV encoding: a self-describing config comment, the header row, one row per
/// (test, n), then one summary row per test. LF line endings, UTF-8.
inline std::string reports_to_csv(const nlohmann::ordered_json& config,
                                  std::span<const DiagnosticReport> reports) {
    std::string out;
    out += "# config ";
    out += config.dump();
    out += "\n";
    out += "test,n,value,status\n";
    for (const DiagnosticReport& rep : reports) {
        for (const PerN& row : rep.values) {
            out += rep.test;
            out += ",";
            out += std::to_string(row.n);
            out += ",";
            out += row.ok ? format_double(row.value) : "";
            out += ",";
            out += row.ok ? "ok" : "failed";
            out += "\n";
        }
        nlohmann::ordered_json meta;
        meta["params"] = params_to_json(rep);
        meta["evidence"] = evidence_to_json(rep);
        if (!rep.note.empty()) meta["note"] = rep.note;
        out += rep.test;
        out += ",summary,";
        out += to_string(rep.verdict.cls);
        out += ",";
        out += csv_quote(meta.dump());
        out += "\n";
    }
    return out;
}

/// JSON encoding mirroring the CSV fields.
inline nlohmann::ordered_json reports_to_json(const nlohmann::ordered_json& config,
                                              std::span<const DiagnosticReport> reports) {
    nlohmann::ordered_json j;
    j["config"] = config;
    j["reports"] = nlohmann::ordered_json::array();
    for (const DiagnosticReport& rep : reports) {
        nlohmann::ordered_json r;
        r["test"] = rep.test;
        r["params"] = params_to_json(rep);
        r["values"] = nlohmann::ordered_json::array();
        for (const PerN& row : rep.values) {
            nlohmann::ordered_json v;
            v["n"] = row.n;
            if (row.ok)
                v["value"] = row.value;
            else
                v["value"] = nullptr;
            v["status"] = row.ok ? "ok" : "failed";
            if (!row.note.empty()) v["note"] = row.note;
            r["values"].push_back(std::move(v));
        }
        r["verdict"] = to_string(rep.verdict.cls);
        r["evidence"] = evidence_to_json(rep);
        if (!rep.note.empty()) r["note"] = rep.note;
        j["reports"].push_back(std::move(r));
    }
    return j;
}

} // namespace qam
