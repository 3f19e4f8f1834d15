#pragma once

#include <cmath>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "qam/arrow_profile.hpp"
#include "qam/errors.hpp"
#include "qam/interval.hpp"

namespace qam {

enum class Direction { increasing, decreasing };

/// A continuous, strictly monotone scalar map with derivatives and (numeric or
/// closed-form) inverse on a finite interval. Generators are immutable value
/// types; all callables must be pure.
struct Generator {
    Interval domain;
    std::function<double(double)> eval;
    std::function<double(double)> deriv1;
    std::function<double(double)> deriv2;  // empty when unavailable
    std::function<double(double)> inverse; // empty when only numeric inversion applies
    Direction direction = Direction::increasing;
    std::string label;
    /// Set for generators reconstructed from an Arrow profile; integral
    /// routines use the knots as quadrature breakpoints.
    std::shared_ptr<const ArrowProfile> arrow;

    double operator()(double x) const { return eval(x); }
    bool has_deriv2() const { return static_cast<bool>(deriv2); }
    bool has_inverse() const { return static_cast<bool>(inverse); }
    bool increasing() const { return direction == Direction::increasing; }
};

enum class BuiltinKind { identity, power, exponential, log };

inline Generator identity_generator(Interval domain) {
    Generator g;
    g.domain = domain;
    g.eval = [](double x) { return x; };
    g.deriv1 = [](double) { return 1.0; };
    g.deriv2 = [](double) { return 0.0; };
    g.inverse = [](double y) { return y; };
    g.direction = Direction::increasing;
    g.label = "identity";
    return g;
}

/// x -> x^p on a positive domain; increasing for p > 0, decreasing for p < 0.
inline Generator power_generator(double p, Interval domain) {
    if (p == 0.0) throw InvalidParameter("power generator requires p != 0");
    if (!(domain.lo > 0)) throw DomainError("power generator requires domain inside (0, inf)");
    Generator g;
    g.domain = domain;
    g.eval = [p](double x) { return std::pow(x, p); };
    g.deriv1 = [p](double x) { return p * std::pow(x, p - 1.0); };
    g.deriv2 = [p](double x) { return p * (p - 1.0) * std::pow(x, p - 2.0); };
    g.inverse = [p](double y) { return std::pow(y, 1.0 / p); };
    g.direction = p > 0 ? Direction::increasing : Direction::decreasing;
    g.label = "power:" + std::to_string(p);
    return g;
}

/// x -> e^{t x}; increasing for t > 0, decreasing for t < 0.
inline Generator exponential_generator(double t, Interval domain) {
    if (t == 0.0) throw InvalidParameter("exponential generator requires t != 0");
    Generator g;
    g.domain = domain;
    g.eval = [t](double x) { return std::exp(t * x); };
    g.deriv1 = [t](double x) { return t * std::exp(t * x); };
    g.deriv2 = [t](double x) { return t * t * std::exp(t * x); };
    g.inverse = [t](double y) { return std::log(y) / t; };
    g.direction = t > 0 ? Direction::increasing : Direction::decreasing;
    g.label = "exp:" + std::to_string(t);
    return g;
}

inline Generator log_generator(Interval domain) {
    // margin keeps the singular endpoint strictly away from 0
    if (!(domain.lo >= 1e-12)) throw DomainError("log generator requires domain inside (0, inf)");
    Generator g;
    g.domain = domain;
    g.eval = [](double x) { return std::log(x); };
    g.deriv1 = [](double x) { return 1.0 / x; };
    g.deriv2 = [](double x) { return -1.0 / (x * x); };
    g.inverse = [](double y) { return std::exp(y); };
    g.direction = Direction::increasing;
    g.label = "log";
    return g;
}

inline Generator builtin_generator(BuiltinKind kind, std::span<const double> params,
                                   Interval domain) {
    switch (kind) {
        case BuiltinKind::identity:
            return identity_generator(domain);
        case BuiltinKind::power:
            if (params.empty()) throw InvalidParameter("power generator needs exponent p");
            return power_generator(params[0], domain);
        case BuiltinKind::exponential:
            if (params.empty()) throw InvalidParameter("exponential generator needs rate t");
            return exponential_generator(params[0], domain);
        case BuiltinKind::log:
            return log_generator(domain);
    }
    throw InvalidParameter("unknown builtin generator kind");
}

/// alpha * g + beta. Flips direction when alpha < 0; never changes A_g.
inline Generator affine_transform(const Generator& g, double alpha, double beta) {
    if (alpha == 0.0) throw InvalidParameter("affine transform requires alpha != 0");
    Generator out;
    out.domain = g.domain;
    auto eval = g.eval;
    out.eval = [eval, alpha, beta](double x) { return alpha * eval(x) + beta; };
    auto d1 = g.deriv1;
    out.deriv1 = [d1, alpha](double x) { return alpha * d1(x); };
    if (g.deriv2) {
        auto d2 = g.deriv2;
        out.deriv2 = [d2, alpha](double x) { return alpha * d2(x); };
    }
    if (g.inverse) {
        auto inv = g.inverse;
        out.inverse = [inv, alpha, beta](double y) { return inv((y - beta) / alpha); };
    }
    bool flip = alpha < 0;
    out.direction = (g.increasing() != flip) ? Direction::increasing : Direction::decreasing;
    out.label = "affine(" + g.label + "," + std::to_string(alpha) + "," + std::to_string(beta) + ")";
    out.arrow = g.arrow;
    return out;
}

/// View with guaranteed increasing direction (g itself, or -g).
inline Generator normalized_increasing(const Generator& g) {
    return g.increasing() ? g : affine_transform(g, -1.0, 0.0);
}

/// x -> g(-x) on the reflected interval. A flips sign and reflects.
inline Generator dual_generator(const Generator& g) {
    Generator out;
    out.domain = g.domain.reflected();
    auto eval = g.eval;
    out.eval = [eval](double x) { return eval(-x); };
    auto d1 = g.deriv1;
    out.deriv1 = [d1](double x) { return -d1(-x); };
    if (g.deriv2) {
        auto d2 = g.deriv2;
        out.deriv2 = [d2](double x) { return d2(-x); };
    }
    if (g.inverse) {
        auto inv = g.inverse;
        out.inverse = [inv](double y) { return -inv(y); };
    }
    out.direction = g.increasing() ? Direction::decreasing : Direction::increasing;
    out.label = "dual(" + g.label + ")";
    if (g.arrow) out.arrow = std::make_shared<ArrowProfile>(g.arrow->reflected_negated());
    return out;
}

/// Solve g(x) = y inside `bracket`. Uses the closed-form inverse when the
/// generator carries one; otherwise bisection down to 1e-12 of the bracket
/// width followed by a Newton polish.
inline double invert(const Generator& g, double y, const Interval& bracket) {
    double flo = g.eval(bracket.lo);
    double fhi = g.eval(bracket.hi);
    double lo_img = std::fmin(flo, fhi), hi_img = std::fmax(flo, fhi);
    double slack = 1e-9 * (std::fabs(lo_img) + std::fabs(hi_img) + 1.0);
    if (y < lo_img - slack || y > hi_img + slack)
        throw NoBracketError("invert: y = " + std::to_string(y) + " outside bracket image [" +
                             std::to_string(lo_img) + ", " + std::to_string(hi_img) + "]");
    y = std::clamp(y, lo_img, hi_img);

    if (g.inverse) {
        double x = g.inverse(y);
        return std::clamp(x, bracket.lo, bracket.hi);
    }

    bool inc = flo <= fhi;
    double lo = bracket.lo, hi = bracket.hi;
    double tol = 1e-12 * std::fmax(1.0, bracket.width());
    while (hi - lo > tol) {
        double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break; // ran out of floating-point resolution
        double fm = g.eval(mid);
        bool go_right = inc ? (fm < y) : (fm > y);
        if (go_right)
            lo = mid;
        else
            hi = mid;
    }
    double x = 0.5 * (lo + hi);
    double best = std::fabs(g.eval(x) - y);
    for (int it = 0; it < 2 && best > 0; ++it) {
        double d = g.deriv1(x);
        if (d == 0 || !std::isfinite(d)) break;
        double cand = std::clamp(x - (g.eval(x) - y) / d, bracket.lo, bracket.hi);
        double r = std::fabs(g.eval(cand) - y);
        if (r < best) {
            x = cand;
            best = r;
        } else {
            break;
        }
    }
    return x;
}

} // namespace qam
