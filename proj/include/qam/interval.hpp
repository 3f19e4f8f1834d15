#pragma once

#include <cmath>
#include <string>

#include "qam/errors.hpp"

namespace qam {

/// Finite closed interval [lo, hi] with lo < hi.
struct Interval {
    double lo = 0.0;
    double hi = 1.0;

    Interval() = default;
    Interval(double lo_, double hi_) : lo(lo_), hi(hi_) {
        if (!std::isfinite(lo) || !std::isfinite(hi) || !(lo < hi))
            throw InvalidParameter("interval requires finite lo < hi, got [" +
                                   std::to_string(lo_) + ", " + std::to_string(hi_) + "]");
    }

    double width() const { return hi - lo; }
    double midpoint() const { return 0.5 * (lo + hi); }

    bool contains(double x, double slack = 0.0) const {
        return x >= lo - slack && x <= hi + slack;
    }

    /// Largest of |lo|, |hi|; handy for relative tolerances.
    double scale() const { return std::fmax(std::fabs(lo), std::fabs(hi)); }

    Interval reflected() const { return Interval(-hi, -lo); }
};

inline void require_inside(const Interval& domain, double x, const char* what) {
    if (!domain.contains(x, 1e-12 * (1.0 + domain.scale())))
        throw DomainError(std::string(what) + " = " + std::to_string(x) +
                          " outside domain [" + std::to_string(domain.lo) + ", " +
                          std::to_string(domain.hi) + "]");
}

} // namespace qam
