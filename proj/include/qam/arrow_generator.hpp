#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <string>
#include <vector>

#include "qam/arrow_profile.hpp"
#include "qam/errors.hpp"
#include "qam/generator.hpp"
#include "qam/quadrature.hpp"

namespace qam {

namespace detail {

/// Tabulated antiderivative of f' = exp(integral of A) with monotone cubic
/// Hermite evaluation between nodes. Node slopes are the exact f' values,
/// limited Fritsch-Carlson style so the interpolant stays strictly monotone.
struct ArrowTable {
    std::vector<double> x;  // nodes (anchor is one of them)
    std::vector<double> f;  // antiderivative values, f(anchor) = 0
    std::vector<double> m;  // interpolation slopes

    double eval(double t) const {
        std::size_t j = locate(t);
        double h = x[j + 1] - x[j];
        double s = (t - x[j]) / h;
        double s2 = s * s, s3 = s2 * s;
        double h00 = 2 * s3 - 3 * s2 + 1;
        double h10 = s3 - 2 * s2 + s;
        double h01 = -2 * s3 + 3 * s2;
        double h11 = s3 - s2;
        return h00 * f[j] + h10 * h * m[j] + h01 * f[j + 1] + h11 * h * m[j + 1];
    }

    std::size_t locate(double t) const {
        if (t <= x.front()) return 0;
        if (t >= x[x.size() - 2]) return x.size() - 2;
        auto it = std::upper_bound(x.begin(), x.end(), t);
        return std::size_t(it - x.begin()) - 1;
    }
};

} // namespace detail

/// Reconstruct a generator from a prescribed Arrow profile, normalized so that
/// eval(anchor) = 0 and deriv1(anchor) = 1:
///   deriv1(t) = exp(integral_anchor^t A),  eval(tau) = integral_anchor^tau deriv1,
///   deriv2(t) = A(t) * deriv1(t).
/// deriv1/deriv2 use the profile's exact antiderivative; eval is accumulated by
/// per-cell Simpson on a grid of max_step refined with the profile knots, with
/// monotone cubic interpolation between nodes.
inline Generator generator_from_arrow(const ArrowProfile& profile, double anchor,
                                      const QuadratureConfig& quad = {}) {
    quad.validate();
    const Interval domain = profile.domain();
    if (!(anchor > domain.lo && anchor < domain.hi))
        throw InvalidParameter("generator_from_arrow: anchor must lie strictly inside the domain");

    auto prof = std::make_shared<const ArrowProfile>(profile);
    auto dlog = [prof, anchor](double t) { return prof->integral(anchor, t); };
    auto d1 = [prof, dlog](double t) { return std::exp(dlog(t)); };

    // node set: uniform grid + profile knots + anchor
    std::vector<double> nodes;
    auto cells = std::max<std::size_t>(2, std::size_t(std::ceil(domain.width() / quad.max_step)));
    nodes.reserve(cells + 1 + profile.knots_x().size());
    for (std::size_t i = 0; i <= cells; ++i)
        nodes.push_back(domain.lo + domain.width() * double(i) / double(cells));
    for (double k : profile.knots_x()) nodes.push_back(k);
    nodes.push_back(anchor);
    std::sort(nodes.begin(), nodes.end());
    double slack = 1e-15 * (1.0 + domain.scale());
    nodes.erase(std::unique(nodes.begin(), nodes.end(),
                            [&](double u, double v) { return v - u <= slack; }),
                nodes.end());
    nodes.front() = domain.lo;
    nodes.back() = domain.hi;

    auto table = std::make_shared<detail::ArrowTable>();
    table->x = nodes;
    const std::size_t n = nodes.size();
    table->f.assign(n, 0.0);
    std::vector<double> dv(n);
    for (std::size_t i = 0; i < n; ++i) dv[i] = d1(nodes[i]);

    // cumulative Simpson with Richardson error control per cell
    double err_total = 0.0;
    for (std::size_t i = 0; i + 1 < n; ++i) {
        double a = nodes[i], b = nodes[i + 1];
        double mid = 0.5 * (a + b);
        double fm = d1(mid);
        double s1 = (b - a) / 6.0 * (dv[i] + 4.0 * fm + dv[i + 1]);
        double q1 = 0.5 * (a + mid), q3 = 0.5 * (mid + b);
        double s2 = (mid - a) / 6.0 * (dv[i] + 4.0 * d1(q1) + fm) +
                    (b - mid) / 6.0 * (fm + 4.0 * d1(q3) + dv[i + 1]);
        err_total += std::fabs(s2 - s1) / 15.0;
        table->f[i + 1] = table->f[i] + s2;
    }
    if (!std::isfinite(table->f.back()))
        throw QuadratureError("generator_from_arrow: antiderivative overflowed");
    if (err_total > std::fmax(quad.abs_tol, 1e-13 * std::fabs(table->f.back())))
        throw QuadratureError("generator_from_arrow: cumulative Simpson error " +
                              std::to_string(err_total) + " exceeds abs_tol with max_step " +
                              std::to_string(quad.max_step));

    // shift so eval(anchor) = 0; anchor is a node by construction
    auto ait = std::lower_bound(nodes.begin(), nodes.end(), anchor);
    std::size_t ai = std::size_t(ait - nodes.begin());
    if (ai >= n || std::fabs(nodes[ai] - anchor) > slack + 1e-12)
        ai = table->locate(anchor);
    double shift = table->f[ai];
    for (double& v : table->f) v -= shift;

    // monotone limiter on the exact slopes
    table->m = dv;
    for (std::size_t i = 0; i < n; ++i) {
        double cap = std::numeric_limits<double>::infinity();
        if (i > 0) cap = std::fmin(cap, 3.0 * (table->f[i] - table->f[i - 1]) / (nodes[i] - nodes[i - 1]));
        if (i + 1 < n) cap = std::fmin(cap, 3.0 * (table->f[i + 1] - table->f[i]) / (nodes[i + 1] - nodes[i]));
        if (table->m[i] > cap) table->m[i] = cap;
    }

    Generator g;
    g.domain = domain;
    g.eval = [table, domain](double t) {
        require_inside(domain, t, "generator point");
        return table->eval(std::clamp(t, domain.lo, domain.hi));
    };
    g.deriv1 = d1;
    g.deriv2 = [prof, d1](double t) { return (*prof)(t)*d1(t); };
    g.direction = Direction::increasing;
    g.label = "arrow";
    g.arrow = prof;
    return g;
}

} // namespace qam
