#pragma once

#include <cmath>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "qam/comparison.hpp"
#include "qam/errors.hpp"
#include "qam/family.hpp"
#include "qam/means.hpp"
#include "qam/quadrature.hpp"
#include "qam/trend.hpp"

namespace qam {

/// Strictly increasing indices n >= 1; discretizes "n -> infinity".
struct NGrid {
    std::vector<int> indices;

    void validate() const {
        if (indices.empty()) throw InvalidParameter("n-grid must be nonempty");
        int prev = 0;
        for (int n : indices) {
            if (n < 1 || n <= prev)
                throw InvalidParameter("n-grid must be strictly increasing with n >= 1");
            prev = n;
        }
    }

    static NGrid range(int first, int last, int step = 1) {
        if (step < 1) throw InvalidParameter("n-grid step must be >= 1");
        NGrid g;
        for (int n = first; n <= last; n += step) g.indices.push_back(n);
        g.validate();
        return g;
    }
};

struct PerN {
    int n = 0;
    double value = 0.0;
    bool ok = true;
    std::string note;
};

/// One criterion's run over an n-grid: raw per-n values (failures marked, not
/// dropped), the trend verdict, and auxiliary scalars when the test computes
/// them.
struct DiagnosticReport {
    std::string test;
    std::vector<std::pair<std::string, double>> params;
    std::vector<PerN> values;
    TrendVerdict verdict;
    std::optional<double> c_hat;
    std::optional<double> phi;
    std::string note;

    std::vector<std::pair<int, double>> ok_values() const {
        std::vector<std::pair<int, double>> out;
        out.reserve(values.size());
        for (const PerN& v : values)
            if (v.ok) out.emplace_back(v.n, v.value);
        return out;
    }
};

namespace detail {

template <class Fn>
DiagnosticReport run_per_n(std::string test, const NGrid& ns, TrendConfig cfg, Fn&& per_n) {
    ns.validate();
    DiagnosticReport rep;
    rep.test = std::move(test);
    for (int n : ns.indices) {
        PerN row;
        row.n = n;
        try {
            row.value = per_n(n);
            row.ok = std::isfinite(row.value);
            if (!row.ok) row.note = "non-finite value";
        } catch (const Error& e) {
            row.ok = false;
            row.note = e.what();
        }
        rep.values.push_back(std::move(row));
    }
    auto ok = rep.ok_values();
    rep.verdict = classify_trend(ok, cfg);
    return rep;
}

} // namespace detail

/// Quotient (f_n(x) - f_n(y)) / (f_n(z) - f_n(y)) for x < y < z; a max-family
/// drives it to 0. Generators are normalized increasing first, so every
/// recorded value is negative.
inline DiagnosticReport ratio_test(const GeneratorFamily& fam, double x, double y, double z,
                                   const NGrid& ns, TrendConfig cfg = {}) {
    if (!(x < y && y < z)) throw InvalidParameter("ratio_test requires x < y < z");
    require_inside(fam.domain(), x, "x");
    require_inside(fam.domain(), z, "z");
    cfg.log_scale = false;
    auto rep = detail::run_per_n("ratio", ns, cfg, [&](int n) {
        Generator f = normalized_increasing(fam.at(n));
        double fy = f.eval(y);
        double num = f.eval(x) - fy;
        double den = f.eval(z) - fy;
        return num / den;
    });
    rep.params = {{"x", x}, {"y", y}, {"z", z}};
    return rep;
}

/// log f_n'(q) - log f_n'(p) for p < q; equals log of the derivative ratio and
/// is recorded in log space so e^n-scale growth never overflows.
inline DiagnosticReport derivative_ratio_test(const GeneratorFamily& fam, double p, double q,
                                              const NGrid& ns, TrendConfig cfg = {}) {
    if (!(p < q)) throw InvalidParameter("derivative_ratio_test requires p < q");
    require_inside(fam.domain(), p, "p");
    require_inside(fam.domain(), q, "q");
    cfg.log_scale = true;
    auto rep = detail::run_per_n("deriv-ratio", ns, cfg, [&](int n) {
        Generator f = normalized_increasing(fam.at(n));
        double dp = f.deriv1(p), dq = f.deriv1(q);
        if (!(dp > 0) || !(dq > 0))
            throw InternalError("derivative_ratio_test: nonpositive derivative after normalization");
        return std::log(dq) - std::log(dp);
    });
    rep.params = {{"p", p}, {"q", q}};
    return rep;
}

/// integral_p^q A_{f_n}; same verdict semantics as derivative_ratio_test. For
/// arrow-built generators the profile knots become quadrature breakpoints.
/// Each row's note carries the defect against log f'(q) - log f'(p) (the
/// calculus identity) for auditing.
inline DiagnosticReport integral_test(const GeneratorFamily& fam, double p, double q,
                                      const NGrid& ns, QuadratureConfig quad = {},
                                      TrendConfig cfg = {}) {
    if (!(p < q)) throw InvalidParameter("integral_test requires p < q");
    require_inside(fam.domain(), p, "p");
    require_inside(fam.domain(), q, "q");
    cfg.log_scale = true;
    auto rep = detail::run_per_n("integral", ns, cfg, [&](int n) {
        const Generator& g = fam.at(n);
        std::span<const double> cuts;
        if (g.arrow) cuts = g.arrow->knots_x();
        return integrate([&](double t) { return arrow_operator(g, t); }, p, q, quad, cuts);
    });
    rep.params = {{"p", p}, {"q", q}};
    return rep;
}

/// Grid estimate of the lower-bound constant: minimum slope of log f_n' over
/// adjacent grid pairs and all sampled n. Finite on the sampled set is
/// necessary evidence of lower-boundedness, nothing more.
inline double lower_bounded_estimate(const GeneratorFamily& fam, std::span<const double> grid,
                                     const NGrid& ns) {
    ns.validate();
    if (grid.size() < 2) throw InvalidParameter("lower_bounded_estimate needs >= 2 grid points");
    double c_hat = std::numeric_limits<double>::infinity();
    for (int n : ns.indices) {
        Generator f = normalized_increasing(fam.at(n));
        double prev_x = grid[0];
        double prev_l = std::log(f.deriv1(prev_x));
        for (std::size_t i = 1; i < grid.size(); ++i) {
            double xi = grid[i];
            if (!(xi > prev_x)) throw InvalidParameter("lower_bounded_estimate grid must be sorted");
            double li = std::log(f.deriv1(xi));
            c_hat = std::fmin(c_hat, (li - prev_l) / (xi - prev_x));
            prev_x = xi;
            prev_l = li;
        }
    }
    return c_hat;
}

struct IncreasingReport {
    bool increasing = true;
    /// (n_prev, n_next, x) where A dropped, when the check fails.
    std::optional<std::tuple<int, int, double>> witness;
};

/// A_{f_next} >= A_{f_prev} - tol at every grid point, for consecutive
/// entries of the n-grid (the Mikusinski form of the increasing attribute).
inline IncreasingReport increasing_check(const GeneratorFamily& fam, std::span<const double> grid,
                                         const NGrid& ns, double tol = 1e-10) {
    ns.validate();
    IncreasingReport rep;
    for (std::size_t i = 0; i + 1 < ns.indices.size(); ++i) {
        const Generator& a = fam.at(ns.indices[i]);
        const Generator& b = fam.at(ns.indices[i + 1]);
        for (double x : grid) {
            if (arrow_operator(b, x) < arrow_operator(a, x) - tol) {
                rep.increasing = false;
                rep.witness = {ns.indices[i], ns.indices[i + 1], x};
                return rep;
            }
        }
    }
    return rep;
}

/// Gap max(x, z) - M_{f_n}(x, z, xi) per query; a max-family drives every gap
/// to zero. One report per query.
inline std::vector<DiagnosticReport> empirical_max_test(const GeneratorFamily& fam,
                                                        std::span<const TwoPointQuery> queries,
                                                        const NGrid& ns, TrendConfig cfg = {}) {
    if (queries.empty()) throw InvalidParameter("empirical_max_test needs >= 1 query");
    cfg.log_scale = false;
    std::vector<DiagnosticReport> out;
    out.reserve(queries.size());
    for (std::size_t qi = 0; qi < queries.size(); ++qi) {
        const TwoPointQuery& q = queries[qi];
        q.validate(fam.domain());
        auto rep = detail::run_per_n(queries.size() == 1 ? std::string("empirical")
                                                         : "empirical[" + std::to_string(qi) + "]",
                                     ns, cfg,
                                     [&](int n) { return std::fmax(q.x, q.z) - qa_mean_two(fam.at(n), q); });
        rep.params = {{"x", q.x}, {"z", q.z}, {"xi", q.xi}};
        out.push_back(std::move(rep));
    }
    return out;
}

/// Derivative-ratio level that forces M(x, z, xi) >= y for a generator obeying
/// the lower bound with constant C < 0:
///   Phi = xi (e^{C(x-y)} - 1) / ((1-xi)(1 - e^{C eps})).
inline double phi_threshold(double xi, double C, double eps, double x, double y) {
    if (!(xi > 0 && xi < 1)) throw InvalidParameter("phi_threshold: xi must lie in (0,1)");
    if (!(C < 0)) throw InvalidParameter("phi_threshold: C must be negative");
    if (!(eps > 0)) throw InvalidParameter("phi_threshold: eps must be positive");
    if (!(x < y)) throw InvalidParameter("phi_threshold: requires x < y");
    return xi * (std::exp(C * (x - y)) - 1.0) / ((1.0 - xi) * (1.0 - std::exp(C * eps)));
}

/// Checks the sufficiency implication f'(z-eps)/f'(y) >= Phi  =>  M(x,z,xi) >= y
/// for one configuration. The lower-bound hypothesis with constant C is
/// verified on a grid over [x, z] first; failing it raises HypothesisViolated.
inline bool phi_implication_check(const Generator& g, double xi, double C, double eps, double x,
                                  double y, double z) {
    if (!(x < y && y < z)) throw InvalidParameter("phi_implication_check requires x < y < z");
    if (!(eps > 0 && eps < z - y))
        throw InvalidParameter("phi_implication_check requires 0 < eps < z - y");
    if (!(C < 0)) throw InvalidParameter("phi_implication_check: C must be negative");
    Generator f = normalized_increasing(g);

    const int kGridPoints = 64;
    double prev_x = x, prev_l = std::log(f.deriv1(x));
    for (int i = 1; i <= kGridPoints; ++i) {
        double t = x + (z - x) * double(i) / double(kGridPoints);
        double lt = std::log(f.deriv1(t));
        if ((lt - prev_l) / (t - prev_x) < C - 1e-10)
            throw HypothesisViolated("phi_implication_check: generator violates the C lower bound");
        prev_x = t;
        prev_l = lt;
    }

    double ratio = f.deriv1(z - eps) / f.deriv1(y);
    double phi = phi_threshold(xi, C, eps, x, y);
    if (!(ratio >= phi)) return true; // hypothesis not triggered
    double m = qa_mean_two(f, TwoPointQuery{x, z, xi});
    return m >= y - 1e-9 * (1.0 + std::fabs(y));
}

/// Finite proxy for X_infinity: a grid point is flagged when A_{f_n} clears
/// the threshold at the last index and is nondecreasing over the trailing
/// half of the n-grid.
struct XInfinityEstimate {
    std::vector<double> grid;
    std::vector<bool> member;
    double threshold = 0.0;
    int trailing = 0; // number of trailing indices whose monotonicity was required
};

inline XInfinityEstimate x_infinity_estimate(const GeneratorFamily& fam,
                                             std::span<const double> grid, const NGrid& ns,
                                             double threshold) {
    ns.validate();
    XInfinityEstimate est;
    est.grid.assign(grid.begin(), grid.end());
    est.threshold = threshold;
    std::size_t half = (ns.indices.size() + 1) / 2;
    est.trailing = int(half);
    est.member.assign(grid.size(), false);
    for (std::size_t gi = 0; gi < grid.size(); ++gi) {
        double x = grid[gi];
        std::vector<double> a(ns.indices.size());
        for (std::size_t i = 0; i < ns.indices.size(); ++i)
            a[i] = arrow_operator(fam.at(ns.indices[i]), x);
        bool mono = true;
        for (std::size_t i = ns.indices.size() - half; i + 1 < ns.indices.size(); ++i)
            if (a[i + 1] < a[i] - 1e-10) mono = false;
        est.member[gi] = mono && a.back() >= threshold;
    }
    return est;
}

/// g_n(x) = f_n(-x) on the reflected interval; min-family questions about fam
/// become max-family questions about the dual with reflected queries.
inline GeneratorFamily dualize(const GeneratorFamily& fam) {
    return GeneratorFamily("dual(" + fam.label() + ")", fam.domain().reflected(),
                           [fam](int n) { return dual_generator(fam.at(n)); });
}

/// Witness extracted from the bounded-derivative-ratio obstruction: when
/// f_n'(q)/f_n'(p) <= H on [x, z] for every n, the two-point mean with weight
/// xi on x stays below y < z uniformly in n.
struct BoundedAwayWitness {
    double ratio_bound = 1.0; // H
    double x = 0.0;
    double z = 1.0;
    double xi = 0.5;
    double y = 0.0;
};

inline BoundedAwayWitness bounded_ratio_witness(double H, double x, double z, double xi = 0.5) {
    if (!(H >= 1.0)) throw InvalidParameter("bounded_ratio_witness requires H >= 1");
    if (!(x < z)) throw InvalidParameter("bounded_ratio_witness requires x < z");
    if (!(xi > 0 && xi < 1)) throw InvalidParameter("bounded_ratio_witness: xi in (0,1)");
    // smallest y making xi*(y - x)/H >= (1 - xi)*H*(z - y), nudged upward for
    // a strict margin
    double h2 = H * H;
    double y_star = (xi * x + h2 * (1.0 - xi) * z) / (xi + h2 * (1.0 - xi));
    double y = y_star + 0.01 * (z - y_star);
    return BoundedAwayWitness{H, x, z, xi, y};
}

} // namespace qam
