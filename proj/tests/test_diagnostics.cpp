#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>
#include <vector>

#include "qam/diagnostics.hpp"
#include "qam/numeric.hpp"

using namespace qam;

namespace {

const Interval kUnit(0.0, 1.0);
const Interval kOneTwo(1.0, 2.0);

TrendConfig loose_zero() {
    TrendConfig cfg;
    cfg.zero_tol = 0.05; // 1/n-rate gaps over n <= 64 sit above the 1e-3 default
    return cfg;
}

} // namespace

TEST_CASE("ngrid validation") {
    CHECK_THROWS_AS(NGrid{}.validate(), InvalidParameter);
    CHECK_THROWS_AS((NGrid{{2, 2, 3}}).validate(), InvalidParameter);
    CHECK_THROWS_AS((NGrid{{0, 1}}).validate(), InvalidParameter);
    auto g = NGrid::range(1, 9, 3);
    CHECK(g.indices == std::vector<int>{1, 4, 7});
}

TEST_CASE("ratio test on exp-seq matches the closed form -e^{-n/2}") {
    auto fam = exp_seq_family(kUnit);
    auto rep = ratio_test(fam, 0.0, 0.5, 1.0, NGrid::range(1, 64));
    REQUIRE(rep.values.size() == 64);
    for (const PerN& row : rep.values) {
        REQUIRE(row.ok);
        double expected = -std::exp(-0.5 * row.n);
        CHECK(std::fabs(row.value - expected) <= 1e-10 * std::fabs(expected) + 1e-300);
        CHECK(row.value < 0.0);
    }
    CHECK(rep.verdict.cls == TrendClass::converges_to_zero);
}

TEST_CASE("ratio test on a constant family is the fixed chord ratio") {
    auto fam = constant_family(identity_generator(kUnit));
    auto rep = ratio_test(fam, 0.2, 0.5, 0.9, NGrid::range(1, 32));
    for (const PerN& row : rep.values)
        CHECK(row.value == Catch::Approx((0.2 - 0.5) / (0.9 - 0.5)).epsilon(1e-14));
    CHECK(rep.verdict.cls == TrendClass::bounded);
}

TEST_CASE("ratio test on power-seq converges to zero") {
    auto fam = power_seq_family(kOneTwo);
    auto rep = ratio_test(fam, 1.0, 1.5, 2.0, NGrid::range(1, 64));
    for (const PerN& row : rep.values) {
        double n = row.n;
        double expected = (1.0 - std::pow(1.5, n)) / (std::pow(2.0, n) - std::pow(1.5, n));
        CHECK(row.value == Catch::Approx(expected).epsilon(1e-10));
    }
    CHECK(rep.verdict.cls == TrendClass::converges_to_zero);
}

TEST_CASE("ratio test rejects unordered points") {
    auto fam = exp_seq_family(kUnit);
    CHECK_THROWS_AS(ratio_test(fam, 0.5, 0.2, 0.9, NGrid::range(1, 4)), InvalidParameter);
}

TEST_CASE("derivative ratio test records log ratios") {
    auto fam = exp_seq_family(kUnit);
    auto rep = derivative_ratio_test(fam, 0.0, 1.0, NGrid::range(1, 64));
    for (const PerN& row : rep.values)
        CHECK(row.value == Catch::Approx(double(row.n)).epsilon(1e-12));
    CHECK(rep.verdict.cls == TrendClass::diverges_to_infinity);

    auto pows = power_seq_family(kOneTwo);
    auto rep2 = derivative_ratio_test(pows, 1.0, 2.0, NGrid::range(1, 64));
    for (const PerN& row : rep2.values)
        CHECK(row.value == Catch::Approx((row.n - 1) * std::log(2.0)).margin(1e-10));
    CHECK(rep2.verdict.cls == TrendClass::diverges_to_infinity);

    auto cons = constant_family(identity_generator(kUnit));
    auto rep3 = derivative_ratio_test(cons, 0.1, 0.9, NGrid::range(1, 32));
    for (const PerN& row : rep3.values) CHECK(row.value == 0.0);
    CHECK(rep3.verdict.cls == TrendClass::bounded);
}

TEST_CASE("integral test equals the log derivative ratio (calculus identity)") {
    auto fam = exp_seq_family(kUnit);
    auto ns = NGrid::range(1, 64, 7);
    auto integ = integral_test(fam, 0.0, 1.0, ns);
    auto deriv = derivative_ratio_test(fam, 0.0, 1.0, ns);
    REQUIRE(integ.values.size() == deriv.values.size());
    for (std::size_t i = 0; i < integ.values.size(); ++i) {
        CHECK(integ.values[i].value == Catch::Approx(double(integ.values[i].n)).margin(1e-8));
        CHECK(std::fabs(integ.values[i].value - deriv.values[i].value) <= 1e-8);
    }
    CHECK(integ.verdict.cls == TrendClass::diverges_to_infinity);

    auto pows = power_seq_family(kOneTwo);
    auto integ2 = integral_test(pows, 1.0, 2.0, ns);
    for (const PerN& row : integ2.values)
        CHECK(row.value == Catch::Approx((row.n - 1) * std::log(2.0)).margin(1e-8));

    auto cons = constant_family(identity_generator(kUnit));
    auto integ3 = integral_test(cons, 0.1, 0.9, NGrid::range(1, 8));
    for (const PerN& row : integ3.values) CHECK(std::fabs(row.value) <= 1e-12);
    CHECK(integ3.verdict.cls == TrendClass::bounded);
}

TEST_CASE("lower bounded estimate") {
    auto grid = uniform_grid(0.05, 0.95, 24);
    auto fam = exp_seq_family(kUnit);
    CHECK(lower_bounded_estimate(fam, grid, NGrid::range(1, 16)) ==
          Catch::Approx(1.0).epsilon(1e-9));

    auto pows = power_seq_family(kOneTwo);
    CHECK(lower_bounded_estimate(pows, uniform_grid(1.05, 1.95, 24), NGrid::range(1, 16)) >= 0.0);

    auto cons = constant_family(identity_generator(kUnit));
    CHECK(lower_bounded_estimate(cons, grid, NGrid::range(1, 8)) ==
          Catch::Approx(0.0).margin(1e-12));

    CHECK_THROWS_AS(lower_bounded_estimate(fam, std::vector<double>{0.5}, NGrid::range(1, 4)),
                    InvalidParameter);
}

TEST_CASE("increasing check") {
    auto grid = uniform_grid(0.05, 0.95, 16);
    CHECK(increasing_check(exp_seq_family(kUnit), grid, NGrid::range(1, 16)).increasing);
    CHECK(increasing_check(constant_family(identity_generator(kUnit)), grid, NGrid::range(1, 8))
              .increasing);

    // alternating e^x, e^{-x}: A alternates between +1 and -1
    GeneratorFamily alt("alt", kUnit, [](int n) {
        return exponential_generator(n % 2 == 1 ? 1.0 : -1.0, kUnit);
    });
    auto rep = increasing_check(alt, grid, NGrid::range(1, 6));
    CHECK_FALSE(rep.increasing);
    REQUIRE(rep.witness.has_value());
    CHECK(std::get<0>(*rep.witness) == 1);
    CHECK(std::get<1>(*rep.witness) == 2);
}

TEST_CASE("empirical max test gap formulas") {
    auto fam = exp_seq_family(kUnit);
    std::vector<TwoPointQuery> queries{{0.0, 1.0, 0.5}};
    auto reps = empirical_max_test(fam, queries, NGrid::range(1, 64), loose_zero());
    REQUIRE(reps.size() == 1);
    for (const PerN& row : reps[0].values) {
        double n = row.n;
        double expected = -(std::log1p(std::exp(-n)) - std::log(2.0)) / n;
        CHECK(row.value == Catch::Approx(expected).margin(1e-10));
    }
    CHECK(reps[0].verdict.cls == TrendClass::converges_to_zero);

    auto cons = constant_family(identity_generator(kUnit));
    auto creps = empirical_max_test(cons, queries, NGrid::range(1, 16));
    for (const PerN& row : creps[0].values) CHECK(row.value == Catch::Approx(0.5).margin(1e-12));
    CHECK(creps[0].verdict.cls == TrendClass::bounded);

    auto pows = power_seq_family(kOneTwo);
    std::vector<TwoPointQuery> q2{{1.0, 2.0, 0.5}};
    auto preps = empirical_max_test(pows, q2, NGrid::range(1, 64), loose_zero());
    CHECK(preps[0].verdict.cls == TrendClass::converges_to_zero);
}

TEST_CASE("phi threshold") {
    CHECK(phi_threshold(0.5, -1.0, 1.0, 0.0, 1.0) ==
          Catch::Approx(std::exp(1.0)).epsilon(1e-14));

    // xi -> 1 blows up
    double prev = 0;
    for (double xi : {0.9, 0.99, 0.999, 0.9999}) {
        double phi = phi_threshold(xi, -1.0, 1.0, 0.0, 1.0);
        CHECK(phi > prev);
        prev = phi;
    }
    CHECK(prev > 1e3);

    // eps -> infinity: denominator factor tends to 1
    CHECK(phi_threshold(0.5, -1.0, 50.0, 0.0, 1.0) ==
          Catch::Approx(std::exp(1.0) - 1.0).epsilon(1e-12));

    CHECK_THROWS_AS(phi_threshold(0.5, 0.0, 1.0, 0.0, 1.0), InvalidParameter);
    CHECK_THROWS_AS(phi_threshold(0.5, 1.0, 1.0, 0.0, 1.0), InvalidParameter);
    CHECK_THROWS_AS(phi_threshold(1.5, -1.0, 1.0, 0.0, 1.0), InvalidParameter);
}

TEST_CASE("phi implication examples") {
    auto e5 = exponential_generator(5.0, kUnit);
    CHECK(phi_implication_check(e5, 0.5, -0.01, 0.25, 0.0, 0.5, 1.0));

    auto id = identity_generator(kUnit);
    CHECK(phi_implication_check(id, 0.5, -0.5, 0.2, 0.0, 0.5, 1.0)); // vacuous

    // decreasing exp violates every negative-C-bounded-below... it satisfies C <= -t;
    // asking for a bound above its slope must throw
    auto em = exponential_generator(-3.0, kUnit);
    CHECK_THROWS_AS(phi_implication_check(em, 0.5, -1.0, 0.2, 0.0, 0.5, 1.0), HypothesisViolated);
}

TEST_CASE("phi implication holds on randomized valid configurations") {
    std::mt19937_64 rng(20260810);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    int checked = 0;
    for (int trial = 0; trial < 1000; ++trial) {
        Interval dom(0.1, 3.0);
        Generator g;
        switch (trial % 4) {
            case 0: g = exponential_generator(0.2 + 4.0 * unit(rng), dom); break;
            case 1: g = power_generator(1.0 + 3.0 * unit(rng), dom); break;
            case 2: g = identity_generator(dom); break;
            default: g = log_generator(dom); break;
        }
        // generator-adapted lower-bound constant: C below min slope of log f'
        double cmin = std::numeric_limits<double>::infinity();
        auto grid = uniform_grid(dom.lo, dom.hi, 40);
        Generator f = normalized_increasing(g);
        for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
            double s = (std::log(f.deriv1(grid[i + 1])) - std::log(f.deriv1(grid[i]))) /
                       (grid[i + 1] - grid[i]);
            cmin = std::fmin(cmin, s);
        }
        double C = std::fmin(-0.01, cmin - 0.1);
        double x = dom.lo + 0.1 + 0.5 * unit(rng);
        double z = dom.hi - 0.1 - 0.5 * unit(rng);
        if (!(x < z)) continue;
        double y = x + (z - x) * (0.2 + 0.6 * unit(rng));
        double eps = (z - y) * (0.1 + 0.8 * unit(rng));
        double xi = 0.05 + 0.9 * unit(rng);
        CHECK(phi_implication_check(g, xi, C, eps, x, y, z));
        ++checked;
    }
    CHECK(checked > 900);
}

TEST_CASE("x-infinity estimate flags divergent points only") {
    auto grid = uniform_grid(0.1, 0.9, 9);
    auto est = x_infinity_estimate(exp_seq_family(kUnit), grid, NGrid::range(1, 64), 10.0);
    for (bool m : est.member) CHECK(m);

    auto none = x_infinity_estimate(constant_family(identity_generator(kUnit)), grid,
                                    NGrid::range(1, 64), 10.0);
    for (bool m : none.member) CHECK_FALSE(m);
}

TEST_CASE("dualize maps max diagnostics to min diagnostics") {
    auto fam = exp_seq_family(kUnit);
    auto dual = dualize(fam);
    CHECK(dual.domain().lo == -1.0);

    // dual of e^{nx} behaves like e^{-nx} on the reflected interval
    CHECK(dual.at(3).eval(-0.5) == Catch::Approx(std::exp(1.5)));
    CHECK(arrow_operator(dual.at(3), -0.5) == Catch::Approx(-3.0));

    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> pick(0.05, 0.95), xis(0.1, 0.9);
    for (int i = 0; i < 50; ++i) {
        double x = pick(rng), z = pick(rng), xi = xis(rng);
        if (x == z) continue;
        for (int n : {1, 3, 9}) {
            double min_gap = qa_mean_two(fam.at(n), {x, z, xi}) - std::fmin(x, z);
            double dual_gap =
                std::fmax(-x, -z) - qa_mean_two(dual.at(n), {-x, -z, xi});
            CHECK(std::fabs(min_gap - dual_gap) <= 1e-10 * (1.0 + std::fabs(min_gap)));
        }
    }

    // double dualization restores values pointwise
    auto dd = dualize(dual);
    CHECK(dd.at(5).eval(0.3) == Catch::Approx(fam.at(5).eval(0.3)).epsilon(1e-14));
}

TEST_CASE("lemma-1 chain equivalence on builtin families") {
    std::mt19937_64 rng(20260810);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::uniform_int_distribution<int> ndist(1, 40);
    auto exps = exp_seq_family(kUnit);
    auto pows = power_seq_family(kOneTwo);
    int violations = 0, tested = 0;
    for (int trial = 0; trial < 500; ++trial) {
        const GeneratorFamily& fam = (trial % 2 == 0) ? exps : pows;
        double lo = fam.domain().lo, w = fam.domain().width();
        double a = lo + w * unit(rng), b = lo + w * unit(rng), c = lo + w * unit(rng);
        double x = std::min({a, b, c}), z = std::max({a, b, c});
        double y = a + b + c - x - z;
        if (!(x < y && y < z)) continue;
        double xi = 0.02 + 0.96 * unit(rng);
        int n = ndist(rng);
        const Generator& f = fam.at(n);

        double fy = f.eval(y);
        double ratio = (f.eval(x) - fy) / (f.eval(z) - fy);
        double lo_bound = (xi - 1.0) / xi;
        double m = qa_mean_two(f, {x, z, xi});

        // skip boundary-degenerate draws per the 1e-10 tolerance
        if (std::fabs(ratio - lo_bound) < 1e-10 || std::fabs(m - y) < 1e-10) continue;
        bool lhs = y < m;
        bool rhs = ratio > lo_bound && ratio < 0.0;
        if (lhs != rhs) ++violations;
        ++tested;
    }
    CHECK(violations == 0);
    CHECK(tested > 400);
}

TEST_CASE("theorem consistency: derivative-ratio divergence tracks empirical max") {
    struct Case {
        GeneratorFamily fam;
        std::vector<std::pair<double, double>> pqs;
        bool expect_max;
    };
    std::vector<Case> cases;
    cases.push_back({exp_seq_family(kUnit), {{0.1, 0.6}, {0.3, 0.9}}, true});
    cases.push_back({power_seq_family(kOneTwo), {{1.1, 1.6}, {1.2, 1.9}}, true});
    cases.push_back({constant_family(identity_generator(kUnit)), {{0.1, 0.6}, {0.3, 0.9}}, false});

    auto ns = NGrid::range(1, 64);
    for (const Case& c : cases) {
        double c_hat = lower_bounded_estimate(
            c.fam, uniform_grid(c.fam.domain().lo + 0.01, c.fam.domain().hi - 0.01, 16), ns);
        REQUIRE(std::isfinite(c_hat));

        bool all_diverge = true;
        for (auto [p, q] : c.pqs)
            all_diverge = all_diverge && derivative_ratio_test(c.fam, p, q, ns).verdict.cls ==
                                             TrendClass::diverges_to_infinity;

        std::vector<TwoPointQuery> queries;
        for (auto [p, q] : c.pqs) queries.push_back({p, q, 0.5});
        bool all_converge = true;
        for (auto& rep : empirical_max_test(c.fam, queries, ns, loose_zero()))
            all_converge = all_converge && rep.verdict.cls == TrendClass::converges_to_zero;

        CHECK(all_diverge == c.expect_max);
        CHECK(all_converge == c.expect_max);
    }
}

TEST_CASE("bounded ratio witness pins the mean below y") {
    auto w = bounded_ratio_witness(std::exp(0.1), 0.1, 0.9, 0.5);
    CHECK(w.y > 0.1);
    CHECK(w.y < 0.9);
    // identity generator has ratio bound 1 <= H, so the witness applies
    auto id = identity_generator(kUnit);
    CHECK(qa_mean_two(id, {w.x, w.z, w.xi}) < w.y);
    CHECK_THROWS_AS(bounded_ratio_witness(0.5, 0.0, 1.0), InvalidParameter);
}
