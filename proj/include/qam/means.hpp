#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "qam/errors.hpp"
#include "qam/generator.hpp"
#include "qam/numeric.hpp"

namespace qam {

/// Entries a_1..a_r with positive weights summing to 1 (within 1e-12).
struct WeightedSample {
    std::vector<double> entries;
    std::vector<double> weights;

    void validate(const Interval& domain) const {
        if (entries.empty() || entries.size() != weights.size())
            throw InvalidParameter("weighted sample needs r >= 1 entries with matching weights");
        double sum = 0.0;
        for (double w : weights) {
            if (!(w > 0)) throw InvalidParameter("weights must be positive");
            sum += w;
        }
        if (std::fabs(sum - 1.0) > 1e-12)
            throw InvalidParameter("weights must sum to 1, got " + std::to_string(sum));
        for (double a : entries) require_inside(domain, a, "entry");
    }

    /// Equal-weight sample.
    static WeightedSample uniform(std::vector<double> entries) {
        WeightedSample s;
        s.weights.assign(entries.size(), 1.0 / double(entries.size()));
        s.entries = std::move(entries);
        return s;
    }
};

/// Two entries x, z with weight xi on x; everything reduces to this case.
struct TwoPointQuery {
    double x = 0.0;
    double z = 1.0;
    double xi = 0.5;

    void validate(const Interval& domain) const {
        require_inside(domain, x, "x");
        require_inside(domain, z, "z");
        if (!(xi > 0 && xi < 1)) throw InvalidParameter("xi must lie in (0, 1)");
    }
};

/// Weighted quasi-arithmetic mean f^{-1}(sum w_i f(a_i)). Internal: the value
/// lies in [min a, max a], and the inversion is bracketed there.
inline double qa_mean(const Generator& g, const WeightedSample& s) {
    s.validate(g.domain);
    double amin = *std::min_element(s.entries.begin(), s.entries.end());
    double amax = *std::max_element(s.entries.begin(), s.entries.end());
    if (amin == amax) return amin; // degenerate sample, no inversion needed

    KahanSum acc;
    double fmin = 0, fmax = 0;
    bool first = true;
    for (std::size_t i = 0; i < s.entries.size(); ++i) {
        double fa = g.eval(s.entries[i]);
        if (!std::isfinite(fa))
            throw OverflowError("qa_mean: generator overflowed at entry " + std::to_string(i) +
                                " (a = " + std::to_string(s.entries[i]) + ")");
        acc.add(s.weights[i] * fa);
        fmin = first ? fa : std::fmin(fmin, fa);
        fmax = first ? fa : std::fmax(fmax, fa);
        first = false;
    }
    double y = std::clamp(acc.value(), fmin, fmax); // roundoff guard; internality is exact
    return invert(g, y, Interval(amin, amax));
}

/// Two-variable mean f^{-1}(xi f(x) + (1-xi) f(z)); symmetric in
/// (x, z, xi) <-> (z, x, 1-xi) by commutativity of the inner sum.
inline double qa_mean_two(const Generator& g, const TwoPointQuery& q) {
    q.validate(g.domain);
    if (q.x == q.z) return q.x;
    double fx = g.eval(q.x);
    double fz = g.eval(q.z);
    if (!std::isfinite(fx))
        throw OverflowError("qa_mean_two: generator overflowed at x = " + std::to_string(q.x));
    if (!std::isfinite(fz))
        throw OverflowError("qa_mean_two: generator overflowed at z = " + std::to_string(q.z));
    double y = q.xi * fx + (1.0 - q.xi) * fz;
    double lo = std::fmin(q.x, q.z), hi = std::fmax(q.x, q.z);
    y = std::clamp(y, std::fmin(fx, fz), std::fmax(fx, fz));
    return invert(g, y, Interval(lo, hi));
}

/// Closed-form power mean (sum w_i a_i^p)^{1/p}, computed in log space.
/// Oracle for the power-generator special case.
inline double power_mean_closed_form(double p, const WeightedSample& s) {
    if (p == 0.0) throw InvalidParameter("power mean oracle requires p != 0");
    if (s.entries.empty() || s.entries.size() != s.weights.size())
        throw InvalidParameter("weighted sample needs r >= 1 entries with matching weights");
    std::vector<double> terms(s.entries.size());
    for (std::size_t i = 0; i < s.entries.size(); ++i) {
        if (!(s.entries[i] > 0)) throw DomainError("power mean requires positive entries");
        if (!(s.weights[i] > 0)) throw InvalidParameter("weights must be positive");
        terms[i] = std::log(s.weights[i]) + p * std::log(s.entries[i]);
    }
    return std::exp(log_sum_exp(terms) / p);
}

} // namespace qam
