#pragma once

#include <cmath>
#include <optional>
#include <span>
#include <string>
#include <utility>

#include "qam/errors.hpp"
#include "qam/generator.hpp"

namespace qam {

/// A_f(x) = f''(x) / f'(x). Orders quasi-arithmetic means pointwise.
inline double arrow_operator(const Generator& g, double x) {
    if (!g.has_deriv2())
        throw UnsupportedGenerator("arrow operator needs a second derivative (" + g.label + ")");
    require_inside(g.domain, x, "x");
    double d1 = g.deriv1(x);
    if (d1 == 0.0) throw InternalError("arrow operator: vanishing first derivative at x");
    return g.deriv2(x) / d1;
}

enum class OrderingRelation { f_le_g, g_le_f, equal_affine, incomparable };

inline const char* to_string(OrderingRelation r) {
    switch (r) {
        case OrderingRelation::f_le_g: return "f_le_g";
        case OrderingRelation::g_le_f: return "g_le_f";
        case OrderingRelation::equal_affine: return "equal_affine";
        case OrderingRelation::incomparable: return "incomparable";
    }
    return "?";
}

/// Grid-certified ordering verdict. The witness pair (present only for
/// incomparable) holds one point with A_f > A_g and one with A_f < A_g.
struct OrderingVerdict {
    OrderingRelation relation = OrderingRelation::incomparable;
    std::optional<std::pair<double, double>> witness;
    std::string grid_note; // points the verdict was certified on
};

/// Pointwise comparison of A_f and A_g over a grid; a finite proxy for the
/// all-of-U statement, so the verdict records the grid it was checked on.
inline OrderingVerdict compare_generators(const Generator& f, const Generator& g,
                                          std::span<const double> grid, double tol = 1e-10) {
    if (grid.empty()) throw InvalidParameter("compare_generators: empty grid");
    std::optional<double> above; // A_f > A_g here
    std::optional<double> below; // A_f < A_g here
    for (double x : grid) {
        double d = arrow_operator(f, x) - arrow_operator(g, x);
        if (d > tol && !above) above = x;
        if (d < -tol && !below) below = x;
    }
    OrderingVerdict v;
    v.grid_note = std::to_string(grid.size()) + " points in [" + std::to_string(grid.front()) +
                  ", " + std::to_string(grid.back()) + "]";
    if (!above && !below)
        v.relation = OrderingRelation::equal_affine;
    else if (!above)
        v.relation = OrderingRelation::f_le_g;
    else if (!below)
        v.relation = OrderingRelation::g_le_f;
    else {
        v.relation = OrderingRelation::incomparable;
        v.witness = std::make_pair(*above, *below);
    }
    return v;
}

/// Least-squares fit f ~ alpha*g + beta on the grid; returned only when the
/// max residual is below 1e-8 of f's range there.
inline std::optional<std::pair<double, double>> affine_fit(const Generator& f, const Generator& g,
                                                           std::span<const double> grid) {
    if (grid.size() < 3) throw InvalidParameter("affine_fit needs at least 3 grid points");
    double mf = 0, mg = 0;
    for (double x : grid) {
        mf += f.eval(x);
        mg += g.eval(x);
    }
    mf /= double(grid.size());
    mg /= double(grid.size());
    double sgg = 0, sgf = 0;
    for (double x : grid) {
        double df = f.eval(x) - mf, dg = g.eval(x) - mg;
        sgg += dg * dg;
        sgf += dg * df;
    }
    if (sgg == 0) return std::nullopt;
    double alpha = sgf / sgg;
    if (alpha == 0) return std::nullopt;
    double beta = mf - alpha * mg;
    double fmin = 0, fmax = 0, resid = 0;
    bool first = true;
    for (double x : grid) {
        double fv = f.eval(x);
        fmin = first ? fv : std::fmin(fmin, fv);
        fmax = first ? fv : std::fmax(fmax, fv);
        first = false;
        resid = std::fmax(resid, std::fabs(fv - (alpha * g.eval(x) + beta)));
    }
    double range = fmax - fmin;
    if (resid > 1e-8 * std::fmax(range, 1e-300)) return std::nullopt;
    return std::make_pair(alpha, beta);
}

} // namespace qam
