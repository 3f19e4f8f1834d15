#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "qam/errors.hpp"

namespace qam {

enum class QuadratureMethod { composite_simpson, adaptive_simpson };

struct QuadratureConfig {
    QuadratureMethod method = QuadratureMethod::adaptive_simpson;
    double max_step = 1e-3;
    double abs_tol = 1e-9;

    void validate() const {
        if (!(max_step > 0)) throw InvalidParameter("quadrature max_step must be > 0");
        if (!(abs_tol > 0)) throw InvalidParameter("quadrature abs_tol must be > 0");
    }
};

namespace detail {

template <class F>
double simpson_cell(F&& f, double a, double fa, double b, double fb) {
    double m = 0.5 * (a + b);
    return (b - a) / 6.0 * (fa + 4.0 * f(m) + fb);
}

template <class F>
double adaptive_cell(F&& f, double a, double fa, double b, double fb, double whole,
                     double tol, int depth) {
    double m = 0.5 * (a + b);
    double fm = f(m);
    double left = (m - a) / 6.0 * (fa + 4.0 * f(0.5 * (a + m)) + fm);
    double right = (b - m) / 6.0 * (fm + 4.0 * f(0.5 * (m + b)) + fb);
    double err = (left + right - whole) / 15.0;
    if (std::fabs(err) <= tol || b - a <= 1e-14 * std::fmax(1.0, std::fabs(a) + std::fabs(b)))
        return left + right + err;
    if (depth <= 0)
        throw QuadratureError("adaptive Simpson: tolerance " + std::to_string(tol) +
                              " not met on [" + std::to_string(a) + ", " + std::to_string(b) + "]");
    return adaptive_cell(f, a, fa, m, fm, left, 0.5 * tol, depth - 1) +
           adaptive_cell(f, m, fm, b, fb, right, 0.5 * tol, depth - 1);
}

} // namespace detail

/// Integrate f over [a, b] splitting first at the supplied interior breakpoints.
/// Composite mode subdivides every cell to max_step; adaptive mode refines each
/// cell until its share of abs_tol is met.
template <class F>
double integrate(F&& f, double a, double b, const QuadratureConfig& cfg,
                 std::span<const double> breakpoints = {}) {
    cfg.validate();
    if (a == b) return 0.0;
    if (b < a) return -integrate(f, b, a, cfg, breakpoints);

    std::vector<double> cuts;
    cuts.push_back(a);
    for (double t : breakpoints)
        if (t > a && t < b) cuts.push_back(t);
    cuts.push_back(b);
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end(),
                           [&](double u, double v) {
                               return v - u <= 1e-15 * std::fmax(1.0, std::fabs(u));
                           }),
               cuts.end());
    if (cuts.size() < 2 || cuts.back() < b) cuts.push_back(b);

    double total = 0.0;
    double width = b - a;
    for (std::size_t c = 0; c + 1 < cuts.size(); ++c) {
        double lo = cuts[c], hi = cuts[c + 1];
        if (cfg.method == QuadratureMethod::composite_simpson) {
            auto cells = std::max<std::size_t>(1, std::size_t(std::ceil((hi - lo) / cfg.max_step)));
            double h = (hi - lo) / double(cells);
            double prev_x = lo, prev_f = f(lo);
            for (std::size_t i = 1; i <= cells; ++i) {
                double x = (i == cells) ? hi : lo + h * double(i);
                double fx = f(x);
                total += detail::simpson_cell(f, prev_x, prev_f, x, fx);
                prev_x = x;
                prev_f = fx;
            }
        } else {
            double tol = cfg.abs_tol * ((hi - lo) / width);
            auto cells = std::max<std::size_t>(1, std::size_t(std::ceil((hi - lo) / std::fmax(cfg.max_step, 1e-12))));
            // cap the pre-split; the adaptive pass handles the rest
            cells = std::min<std::size_t>(cells, 1024);
            double h = (hi - lo) / double(cells);
            double cell_tol = tol / double(cells);
            double prev_x = lo, prev_f = f(lo);
            for (std::size_t i = 1; i <= cells; ++i) {
                double x = (i == cells) ? hi : lo + h * double(i);
                double fx = f(x);
                double whole = detail::simpson_cell(f, prev_x, prev_f, x, fx);
                total += detail::adaptive_cell(f, prev_x, prev_f, x, fx, whole, cell_tol, 48);
                prev_x = x;
                prev_f = fx;
            }
        }
    }
    return total;
}

} // namespace qam
