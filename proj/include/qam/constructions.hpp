#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qam/arrow_profile.hpp"
#include "qam/diagnostics.hpp"
#include "qam/errors.hpp"
#include "qam/family.hpp"

namespace qam {

/// Target set V for the non-max / X_infinity constructions: either a finite
/// point set or a finite-depth middle-thirds Cantor approximation (2^depth
/// closed intervals). True measure zero is out of reach in finite arithmetic;
/// certificates report the cover lengths actually achieved.
struct TargetSetSpec {
    enum class Kind { finite_points, cantor_approx };

    Kind kind = Kind::finite_points;
    Interval base{0.0, 1.0};
    std::vector<double> points; // finite_points
    int depth = 0;              // cantor_approx

    static TargetSetSpec finite(Interval base, std::vector<double> pts) {
        if (pts.empty()) throw InvalidParameter("target set needs at least one point");
        std::sort(pts.begin(), pts.end());
        for (std::size_t i = 0; i < pts.size(); ++i) {
            if (!(pts[i] > base.lo && pts[i] < base.hi))
                throw InvalidParameter("target points must lie strictly inside the base interval");
            if (i > 0 && pts[i] == pts[i - 1])
                throw InvalidParameter("target points must be distinct");
        }
        TargetSetSpec s;
        s.kind = Kind::finite_points;
        s.base = base;
        s.points = std::move(pts);
        return s;
    }

    static TargetSetSpec cantor(Interval base, int depth) {
        if (depth < 0 || depth > 24) throw InvalidParameter("cantor depth must lie in [0, 24]");
        TargetSetSpec s;
        s.kind = Kind::cantor_approx;
        s.base = base;
        s.depth = depth;
        return s;
    }

    /// Closed components; degenerate [p, p] for point targets.
    IntervalUnion components() const {
        if (kind == Kind::finite_points) {
            IntervalUnion u;
            for (double p : points) u.emplace_back(p, p);
            return u;
        }
        IntervalUnion u{{base.lo, base.hi}};
        for (int level = 0; level < depth; ++level) {
            IntervalUnion next;
            next.reserve(2 * u.size());
            for (auto& [a, b] : u) {
                double third = (b - a) / 3.0;
                next.emplace_back(a, a + third);
                next.emplace_back(b - third, b);
            }
            u = std::move(next);
        }
        return u;
    }

    double measure() const {
        if (kind == Kind::finite_points) return 0.0;
        return base.width() * std::pow(2.0 / 3.0, depth);
    }
};

/// Everything a build commits to: exact bump/profile norms, the cover
/// schedule, and the derived obstruction or growth quantities. All values are
/// recomputable from the emitted profiles.
struct ConstructionCertificate {
    double eps = std::numeric_limits<double>::quiet_NaN(); // prop51 L1 budget
    std::vector<double> bump_l1;       // per k
    std::vector<double> family_l1;     // per n
    std::vector<double> cover_lengths; // prop51: achieved lambda(H_k inside U)
    std::vector<double> cover_delta_h; // prop51: support inflation per k
    std::vector<double> sample_heights; // prop51: A_{f_n}(v0) per n
    double sample_point = std::numeric_limits<double>::quiet_NaN();
    std::optional<BoundedAwayWitness> away; // prop51, H = e^eps

    std::vector<double> rational_centers; // prop53 q_i
    std::optional<Interval> query;
    std::vector<double> query_integrals; // per n, exact
    int growth_i = 0;                    // q_i used by the growth bound
    int growth_k0 = 0;                   // first level whose ball fits the query
    std::vector<double> growth_bound;    // per n: (n - k0) * 2^{1-i}

    double anchor = std::numeric_limits<double>::quiet_NaN();
    std::vector<std::string> notes;
};

/// First `count` rationals strictly inside U, ordered by denominator then
/// numerator, in lowest terms.
inline std::vector<double> rational_enumeration(const Interval& U, int count) {
    if (count < 1) throw InvalidParameter("rational enumeration needs count >= 1");
    std::vector<double> out;
    out.reserve(std::size_t(count));
    for (long long d = 1; int(out.size()) < count; ++d) {
        if (d > 100000000LL)
            throw InternalError("rational enumeration: denominator bound exceeded");
        auto m_lo = (long long)std::floor(U.lo * double(d)) - 1;
        auto m_hi = (long long)std::ceil(U.hi * double(d)) + 1;
        for (long long m = m_lo; m <= m_hi && int(out.size()) < count; ++m) {
            if (std::gcd(std::llabs(m), d) != 1) continue;
            double q = double(m) / double(d);
            if (q > U.lo && q < U.hi) out.push_back(q);
        }
    }
    return out;
}

/// Explicit majorant 4^d / (n^{2d} (1 - 2^{-d})) of the d-dimensional covering
/// sums of X_infinity in the increasing-max construction.
inline double covering_bound(double d, int n) {
    if (!(d > 0)) throw InvalidParameter("covering_bound requires d > 0");
    if (n < 1) throw InvalidParameter("covering_bound requires n >= 1");
    return std::pow(4.0, d) / (std::pow(double(n), 2.0 * d) * (1.0 - std::pow(2.0, -d)));
}

/// Direct covering sum sum_{i<=n} (4/(n^2 2^i))^d + sum_{n<i<=cap} (4/(i^2 2^i))^d,
/// evaluated in log space so deep terms underflow to zero instead of blowing up.
inline double covering_sum_direct(double d, int n, int cap = 10000) {
    if (!(d > 0)) throw InvalidParameter("covering_sum_direct requires d > 0");
    if (n < 1 || cap < n) throw InvalidParameter("covering_sum_direct requires 1 <= n <= cap");
    const double log4 = std::log(4.0), log2 = std::log(2.0);
    double total = 0.0;
    for (int i = 1; i <= n; ++i)
        total += std::exp(d * (log4 - 2.0 * std::log(double(n)) - double(i) * log2));
    for (int i = n + 1; i <= cap; ++i)
        total += std::exp(d * (log4 - 2.0 * std::log(double(i)) - double(i) * log2));
    return total;
}

namespace detail {

/// Midpoint of the longest zero run of the profile; domain midpoint when the
/// profile never rests at zero. Matches the anchor normalization freedom.
inline double pick_anchor(const ArrowProfile& p) {
    auto xs = p.knots_x();
    auto as = p.knots_a();
    double best_lo = 0, best_hi = 0, best_w = -1;
    std::size_t j = 0;
    while (j + 1 < xs.size()) {
        if (as[j] == 0.0 && as[j + 1] == 0.0) {
            std::size_t k = j;
            while (k + 1 < xs.size() && as[k + 1] == 0.0) ++k;
            if (xs[k] - xs[j] > best_w) {
                best_w = xs[k] - xs[j];
                best_lo = xs[j];
                best_hi = xs[k];
            }
            j = k;
        } else {
            ++j;
        }
    }
    if (best_w <= 0) return p.domain().midpoint();
    return 0.5 * (best_lo + best_hi);
}

inline IntervalUnion inflate(const IntervalUnion& comps, double delta) {
    IntervalUnion out;
    out.reserve(comps.size());
    for (auto& [a, b] : comps) out.emplace_back(a - delta, b + delta);
    return merge_intervals(out);
}

} // namespace detail

struct ConstructionResult {
    GeneratorFamily family;
    ConstructionCertificate certificate;
    std::map<int, ArrowProfile> profiles; // A_{f_n} per n, as built
};

/// Smooth increasing family that is NOT max although X_infinity contains V:
/// nested covers G_k inside H_k of V carry height-1 bumps s_k, and
/// A_{f_n} = s_1 + ... + s_n keeps its L1 norm below eps while A_{f_n} = n on V.
/// Cover lengths follow a geometric schedule with sum below eps/2; the paper's
/// eps/2^k rate is unrepresentable in doubles past k ~ 50 and any summable
/// schedule certifies the same bound.
inline ConstructionResult build_prop51_family(const TargetSetSpec& V, double eps, Interval U,
                                              int n_max, std::optional<Interval> query = {},
                                              QuadratureConfig quad = {}) {
    if (!(eps > 0)) throw InvalidParameter("prop51 requires eps > 0");
    if (n_max < 1) throw InvalidParameter("prop51 requires n_max >= 1");
    if (!(V.base.lo >= U.lo && V.base.hi <= U.hi))
        throw InvalidParameter("target set must live inside U");

    IntervalUnion comps = V.components();
    double base = 0.0;
    for (auto& [a, b] : comps) base += b - a;
    double m = double(comps.size());

    const double budget = 0.5 * eps;
    double excess = budget - double(n_max) * base;
    if (!(excess > 0.05 * budget))
        throw ConstructionInfeasible(
            "prop51: eps too small; the target set alone needs L1 >= " +
            std::to_string(double(n_max) * base) + " over " + std::to_string(n_max) + " levels");

    const double ratio = 0.865;       // H_{k+1} inflation / H_k inflation
    const double plateau_frac = 0.93; // G_k inflation / H_k inflation
    double geom_sum = (1.0 - std::pow(ratio, n_max)) / (1.0 - ratio);
    double delta1 = 0.999 * excess / (2.0 * m * geom_sum);

    double ramp_last = (1.0 - plateau_frac) * delta1 * std::pow(ratio, n_max - 1);
    if (!(ramp_last > 128.0 * std::numeric_limits<double>::epsilon() * (1.0 + U.scale())))
        throw ConstructionInfeasible(
            "prop51: cover geometry collapses below double resolution at depth " +
            std::to_string(n_max) + "; increase eps or reduce n_max");

    ConstructionCertificate cert;
    cert.eps = eps;
    std::map<int, ArrowProfile> profiles;
    std::optional<ArrowProfile> acc;
    for (int k = 1; k <= n_max; ++k) {
        double dh = delta1 * std::pow(ratio, k - 1);
        double dg = plateau_frac * dh;
        BumpSpec bump;
        bump.plateau = detail::inflate(comps, dg);
        bump.support = detail::inflate(comps, dh);
        bump.height = 1.0;
        ArrowProfile s_k = render_bump(U, bump);
        cert.bump_l1.push_back(s_k.l1_norm());
        cert.cover_delta_h.push_back(dh);
        cert.cover_lengths.push_back(total_length(clip_to(bump.support, U)));
        acc = acc ? (*acc + s_k) : s_k;
        profiles.emplace(k, *acc);
        cert.family_l1.push_back(acc->l1_norm());
    }
    if (!(cert.family_l1.back() < eps))
        throw InternalError("prop51: accumulated L1 exceeded eps despite schedule");

    double v0 = comps.front().first == comps.front().second
                    ? comps.front().first
                    : 0.5 * (comps.front().first + comps.front().second);
    cert.sample_point = v0;
    for (int n = 1; n <= n_max; ++n) cert.sample_heights.push_back(profiles.at(n)(v0));

    Interval q = query.value_or(Interval(U.lo + 0.1 * U.width(), U.lo + 0.9 * U.width()));
    cert.query = q;
    cert.away = bounded_ratio_witness(std::exp(eps), q.lo, q.hi, 0.5);

    double anchor = detail::pick_anchor(profiles.at(n_max));
    cert.anchor = anchor;
    if (anchor > comps.front().first - delta1 && anchor < comps.back().second + delta1)
        cert.notes.push_back("anchor falls inside the outer cover; normalization is unaffected");

    GeneratorFamily fam =
        arrow_profile_seq_family("prop51(" + std::to_string(eps) + ")", profiles, anchor, quad);
    return ConstructionResult{std::move(fam), std::move(cert), std::move(profiles)};
}

/// Increasing max-family whose X_infinity has Hausdorff dimension 0: bumps of
/// height k^2 on shrinking ball unions around an enumeration of the rationals,
/// A_{f_n} = c_1 + ... + c_n. The certificate records exact per-n integrals
/// over the query interval together with the proof's (n - k0) 2^{1-i} lower
/// bound.
inline ConstructionResult build_prop53_family(Interval U, int max_k, int rational_count,
                                              std::optional<Interval> query = {},
                                              QuadratureConfig quad = {}) {
    if (max_k < 1) throw InvalidParameter("prop53 requires max_k >= 1");
    if (rational_count < max_k)
        throw InvalidParameter("prop53 requires rational_count >= max_k");

    std::vector<double> qs = rational_enumeration(U, rational_count);

    // deepest ball must stay representable around its center
    double r_min = 1.0 / (double(max_k) * double(max_k) * std::pow(2.0, max_k));
    double ulp_scale = 64.0 * std::numeric_limits<double>::epsilon() * (1.0 + U.scale());
    if (!(r_min > ulp_scale))
        throw ConstructionInfeasible("prop53: ball radii at k = " + std::to_string(max_k) +
                                     " collapse below double resolution; reduce max_k");

    ConstructionCertificate cert;
    cert.rational_centers = qs;
    std::map<int, ArrowProfile> profiles;
    std::optional<ArrowProfile> acc;
    int clipped = 0;
    for (int k = 1; k <= max_k; ++k) {
        BumpSpec bump;
        bump.height = double(k) * double(k);
        for (int i = 1; i <= k; ++i) {
            double r = 1.0 / (double(k) * double(k) * std::pow(2.0, i));
            double c = qs[std::size_t(i - 1)];
            bump.plateau.emplace_back(c - r, c + r);
            bump.support.emplace_back(c - 2.0 * r, c + 2.0 * r);
            if (c - 2.0 * r < U.lo || c + 2.0 * r > U.hi) ++clipped;
        }
        ArrowProfile c_k = render_bump(U, bump);
        cert.bump_l1.push_back(c_k.l1_norm());
        acc = acc ? (*acc + c_k) : c_k;
        profiles.emplace(k, *acc);
        cert.family_l1.push_back(acc->l1_norm());
    }
    if (clipped > 0)
        cert.notes.push_back("clipped " + std::to_string(clipped) + " ball supports to U");

    Interval q = query.value_or(Interval(U.lo + 0.2 * U.width(), U.lo + 0.8 * U.width()));
    cert.query = q;
    int gi = 0;
    for (std::size_t i = 0; i < qs.size(); ++i) {
        if (qs[i] > q.lo && qs[i] < q.hi) {
            gi = int(i) + 1;
            break;
        }
    }
    if (gi == 0) throw ConstructionInfeasible("prop53: no enumerated rational inside the query");
    cert.growth_i = gi;
    double qc = qs[std::size_t(gi - 1)];
    int k0 = gi;
    for (int k = 1;; ++k) {
        double r = 1.0 / (double(k) * double(k) * std::pow(2.0, gi));
        if (qc - r > q.lo && qc + r < q.hi) {
            k0 = std::max(gi, k);
            break;
        }
        if (k > 1000000) throw InternalError("prop53: ball never fits the query interval");
    }
    cert.growth_k0 = k0;
    for (int n = 1; n <= max_k; ++n) {
        cert.query_integrals.push_back(profiles.at(n).integral(q.lo, q.hi));
        cert.growth_bound.push_back(double(n - k0) * std::pow(2.0, 1 - gi));
    }

    double anchor = detail::pick_anchor(profiles.at(max_k));
    cert.anchor = anchor;

    GeneratorFamily fam =
        arrow_profile_seq_family("prop53(k<=" + std::to_string(max_k) + ")", profiles, anchor, quad);
    return ConstructionResult{std::move(fam), std::move(cert), std::move(profiles)};
}

} // namespace qam
