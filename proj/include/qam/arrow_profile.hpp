#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "qam/errors.hpp"
#include "qam/interval.hpp"

namespace qam {

/// Continuous piecewise-linear profile x -> A(x) on a finite interval, given by
/// knots (x_j, a_j) with x_0 = lo and x_m = hi. Linear between knots, so sums,
/// antiderivatives and L1 norms are exact.
class ArrowProfile {
  public:
    ArrowProfile(Interval domain, std::vector<double> xs, std::vector<double> as)
        : domain_(domain), x_(std::move(xs)), a_(std::move(as)) {
        if (x_.size() != a_.size() || x_.size() < 2)
            throw InvalidParameter("arrow profile needs >= 2 knots with matching values");
        for (std::size_t j = 0; j + 1 < x_.size(); ++j)
            if (!(x_[j] < x_[j + 1]))
                throw InvalidParameter("arrow profile knots must be strictly increasing");
        double slack = 1e-12 * (1.0 + domain_.scale());
        if (std::fabs(x_.front() - domain_.lo) > slack || std::fabs(x_.back() - domain_.hi) > slack)
            throw InvalidParameter("arrow profile knots must cover the domain exactly");
        x_.front() = domain_.lo;
        x_.back() = domain_.hi;
        for (double a : a_)
            if (!std::isfinite(a)) throw InvalidParameter("arrow profile values must be finite");
        build_cumulative();
    }

    static ArrowProfile constant(Interval domain, double value) {
        return ArrowProfile(domain, {domain.lo, domain.hi}, {value, value});
    }

    const Interval& domain() const { return domain_; }
    std::span<const double> knots_x() const { return x_; }
    std::span<const double> knots_a() const { return a_; }

    double operator()(double x) const {
        require_inside(domain_, x, "profile point");
        std::size_t j = locate(x);
        double h = x_[j + 1] - x_[j];
        double t = (x - x_[j]) / h;
        return a_[j] + t * (a_[j + 1] - a_[j]);
    }

    /// Exact antiderivative value: integral from domain.lo to t.
    double cumulative(double t) const {
        require_inside(domain_, t, "profile point");
        std::size_t j = locate(t);
        double dt = t - x_[j];
        double slope = (a_[j + 1] - a_[j]) / (x_[j + 1] - x_[j]);
        return cum_[j] + dt * (a_[j] + 0.5 * slope * dt);
    }

    /// Exact signed integral over [s, t] (negative when t < s).
    double integral(double s, double t) const { return cumulative(t) - cumulative(s); }

    /// Exact L1 norm over the domain; splits cells at sign changes.
    double l1_norm() const {
        double total = 0.0;
        for (std::size_t j = 0; j + 1 < x_.size(); ++j) {
            double h = x_[j + 1] - x_[j];
            double u = a_[j], v = a_[j + 1];
            if (u == 0.0 && v == 0.0) continue;
            if (u >= 0.0 && v >= 0.0) {
                total += 0.5 * (u + v) * h;
            } else if (u <= 0.0 && v <= 0.0) {
                total += -0.5 * (u + v) * h;
            } else {
                double cross = h * u / (u - v); // offset of the zero inside the cell
                total += 0.5 * std::fabs(u) * cross + 0.5 * std::fabs(v) * (h - cross);
            }
        }
        return total;
    }

    /// Pointwise sum; the result's knot set is the union of both knot sets.
    friend ArrowProfile operator+(const ArrowProfile& lhs, const ArrowProfile& rhs) {
        if (std::fabs(lhs.domain_.lo - rhs.domain_.lo) > 1e-12 ||
            std::fabs(lhs.domain_.hi - rhs.domain_.hi) > 1e-12)
            throw InvalidParameter("profile sum requires identical domains");
        std::vector<double> xs;
        xs.reserve(lhs.x_.size() + rhs.x_.size());
        xs.insert(xs.end(), lhs.x_.begin(), lhs.x_.end());
        xs.insert(xs.end(), rhs.x_.begin(), rhs.x_.end());
        std::sort(xs.begin(), xs.end());
        double slack = 1e-15 * (1.0 + lhs.domain_.scale());
        xs.erase(std::unique(xs.begin(), xs.end(),
                             [&](double u, double v) { return v - u <= slack; }),
                 xs.end());
        xs.front() = lhs.domain_.lo;
        xs.back() = lhs.domain_.hi;
        std::vector<double> as(xs.size());
        for (std::size_t j = 0; j < xs.size(); ++j) as[j] = lhs(xs[j]) + rhs(xs[j]);
        return ArrowProfile(lhs.domain_, std::move(xs), std::move(as));
    }

    /// Reflection x -> -x onto the mirrored domain (used by family dualization;
    /// note the value sign also flips there, handled by the caller).
    ArrowProfile reflected_negated() const {
        std::vector<double> xs(x_.size()), as(a_.size());
        for (std::size_t j = 0; j < x_.size(); ++j) {
            xs[j] = -x_[x_.size() - 1 - j];
            as[j] = -a_[a_.size() - 1 - j];
        }
        return ArrowProfile(domain_.reflected(), std::move(xs), std::move(as));
    }

  private:
    void build_cumulative() {
        cum_.assign(x_.size(), 0.0);
        for (std::size_t j = 0; j + 1 < x_.size(); ++j)
            cum_[j + 1] = cum_[j] + 0.5 * (a_[j] + a_[j + 1]) * (x_[j + 1] - x_[j]);
    }

    std::size_t locate(double x) const {
        if (x <= x_.front()) return 0;
        if (x >= x_[x_.size() - 2]) return x_.size() - 2;
        auto it = std::upper_bound(x_.begin(), x_.end(), x);
        return std::size_t(it - x_.begin()) - 1;
    }

    Interval domain_;
    std::vector<double> x_, a_;
    std::vector<double> cum_;
};

/// Sorted union of closed intervals with overlapping members merged.
using IntervalUnion = std::vector<std::pair<double, double>>;

inline IntervalUnion merge_intervals(IntervalUnion parts) {
    std::sort(parts.begin(), parts.end());
    IntervalUnion out;
    for (auto& [lo, hi] : parts) {
        if (!(lo < hi)) continue;
        if (!out.empty() && lo <= out.back().second)
            out.back().second = std::fmax(out.back().second, hi);
        else
            out.emplace_back(lo, hi);
    }
    return out;
}

inline double total_length(const IntervalUnion& u) {
    double s = 0.0;
    for (auto& [lo, hi] : u) s += hi - lo;
    return s;
}

inline IntervalUnion clip_to(const IntervalUnion& u, const Interval& box) {
    IntervalUnion out;
    for (auto& [lo, hi] : u) {
        double a = std::fmax(lo, box.lo), b = std::fmin(hi, box.hi);
        if (a < b) out.emplace_back(a, b);
    }
    return out;
}

/// Flat-top bump: `height` on the plateau, 0 outside the support, linear ramps
/// between. Plateau components inside one support component are bridged at
/// full height so the profile stays continuous.
struct BumpSpec {
    IntervalUnion plateau;
    IntervalUnion support;
    double height = 1.0;
};

inline ArrowProfile render_bump(const Interval& domain, const BumpSpec& spec) {
    if (!(spec.height >= 0)) throw InvalidParameter("bump height must be >= 0");
    IntervalUnion plat = merge_intervals(spec.plateau);
    IntervalUnion supp = merge_intervals(spec.support);
    if (plat.empty() || supp.empty())
        throw InvalidParameter("bump needs nonempty plateau and support");

    // Bridge plateau components within each support component.
    IntervalUnion hull;
    for (auto& [s0, s1] : supp) {
        double p0 = 0, p1 = 0;
        bool found = false;
        for (auto& [a, b] : plat) {
            if (a >= s0 - 1e-300 && b <= s1 + 1e-300) {
                if (!found) {
                    p0 = a;
                    p1 = b;
                    found = true;
                } else {
                    p0 = std::fmin(p0, a);
                    p1 = std::fmax(p1, b);
                }
            }
        }
        if (!found)
            throw InvalidParameter("bump support component contains no plateau component");
        hull.emplace_back(p0, p1);
    }

    auto eval = [&](double x) -> double {
        for (std::size_t c = 0; c < supp.size(); ++c) {
            auto [s0, s1] = supp[c];
            auto [p0, p1] = hull[c];
            if (x < s0 || x > s1) continue;
            if (x >= p0 && x <= p1) return spec.height;
            if (x < p0) return spec.height * (x - s0) / (p0 - s0);
            return spec.height * (s1 - x) / (s1 - p1);
        }
        return 0.0;
    };

    std::vector<double> xs;
    xs.push_back(domain.lo);
    xs.push_back(domain.hi);
    for (std::size_t c = 0; c < supp.size(); ++c) {
        for (double e : {supp[c].first, supp[c].second, hull[c].first, hull[c].second})
            if (e > domain.lo && e < domain.hi) xs.push_back(e);
    }
    std::sort(xs.begin(), xs.end());
    double slack = 1e-15 * (1.0 + domain.scale());
    xs.erase(std::unique(xs.begin(), xs.end(),
                         [&](double u, double v) { return v - u <= slack; }),
             xs.end());
    std::vector<double> as(xs.size());
    for (std::size_t j = 0; j < xs.size(); ++j) as[j] = eval(std::clamp(xs[j], domain.lo, domain.hi));
    return ArrowProfile(domain, std::move(xs), std::move(as));
}

} // namespace qam
