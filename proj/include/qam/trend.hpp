#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "qam/errors.hpp"
#include "qam/numeric.hpp"

namespace qam {

enum class TrendClass { diverges_to_infinity, converges_to_zero, bounded, indeterminate };

inline const char* to_string(TrendClass c) {
    switch (c) {
        case TrendClass::diverges_to_infinity: return "diverges_to_infinity";
        case TrendClass::converges_to_zero: return "converges_to_zero";
        case TrendClass::bounded: return "bounded";
        case TrendClass::indeterminate: return "indeterminate";
    }
    return "?";
}

/// Thresholds for the finite-n limit proxy. window = 0 means the trailing
/// quarter of the recorded sequence. log_scale marks sequences recorded in
/// log space (derivative-ratio and integral diagnostics): divergence and
/// smallness are then judged against log(div_threshold) / log(zero_tol).
struct TrendConfig {
    double div_threshold = 1e3;
    double zero_tol = 1e-3;
    double stability_tol = 1e-6;
    int window = 0;
    bool log_scale = false;
};

struct TrendEvidence {
    int window_size = 0;
    double window_min = 0.0;
    double window_max = 0.0;
    double log_slope = 0.0; // slope of log-values (or of raw values in log scale)
};

struct TrendVerdict {
    TrendClass cls = TrendClass::indeterminate;
    TrendEvidence evidence;
};

/// Deterministic classification of a per-n sequence (failed indices already
/// removed by the caller). Values pair each retained index n with its value.
inline TrendVerdict classify_trend(std::span<const std::pair<int, double>> values,
                                   const TrendConfig& cfg) {
    TrendVerdict out;
    std::size_t m = values.size();
    std::size_t w = cfg.window > 0 ? std::size_t(cfg.window) : (m + 3) / 4;
    if (m == 0 || m < w || w == 0) return out; // indeterminate

    std::span<const std::pair<int, double>> tail = values.subspan(m - w);
    double vmin = tail.front().second, vmax = tail.front().second;
    double variation = 0.0;
    std::vector<double> ns, logs;
    ns.reserve(w);
    logs.reserve(w);
    for (std::size_t i = 0; i < tail.size(); ++i) {
        double v = tail[i].second;
        vmin = std::fmin(vmin, v);
        vmax = std::fmax(vmax, v);
        if (i > 0) variation += std::fabs(v - tail[i - 1].second);
        double lv = cfg.log_scale ? v : std::log(std::fabs(v));
        if (std::isfinite(lv)) {
            ns.push_back(double(tail[i].first));
            logs.push_back(lv);
        }
    }
    double slope = linear_slope(ns, logs);
    out.evidence = {int(w), vmin, vmax, slope};

    double div_level = cfg.log_scale ? std::log(cfg.div_threshold) : cfg.div_threshold;
    if (vmin > div_level && slope > 0) {
        out.cls = TrendClass::diverges_to_infinity;
        return out;
    }
    bool small = cfg.log_scale ? (vmax < std::log(cfg.zero_tol))
                               : (std::fmax(std::fabs(vmin), std::fabs(vmax)) < cfg.zero_tol);
    if (small) {
        out.cls = TrendClass::converges_to_zero;
        return out;
    }
    if (variation < cfg.stability_tol) {
        out.cls = TrendClass::bounded;
        return out;
    }
    return out; // indeterminate
}

} // namespace qam
