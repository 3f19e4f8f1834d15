#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "qam/means.hpp"

using namespace qam;

namespace {

WeightedSample random_sample(std::mt19937_64& rng, double lo, double hi, int max_r = 6) {
    std::uniform_int_distribution<int> rdist(1, max_r);
    std::uniform_real_distribution<double> adist(lo, hi);
    std::uniform_real_distribution<double> wdist(0.05, 1.0);
    int r = rdist(rng);
    WeightedSample s;
    double wsum = 0;
    for (int i = 0; i < r; ++i) {
        s.entries.push_back(adist(rng));
        s.weights.push_back(wdist(rng));
        wsum += s.weights.back();
    }
    for (double& w : s.weights) w /= wsum;
    // remove the normalization residue deterministically
    double resid = std::accumulate(s.weights.begin(), s.weights.end(), 0.0) - 1.0;
    s.weights.back() -= resid;
    return s;
}

} // namespace

TEST_CASE("qa_mean examples") {
    auto id = identity_generator(Interval(0, 10));
    WeightedSample s1 = WeightedSample::uniform({1.0, 2.0, 3.0});
    CHECK(qa_mean(id, s1) == Catch::Approx(2.0).margin(1e-12));

    auto lg = log_generator(Interval(0.5, 10));
    WeightedSample s2 = WeightedSample::uniform({1.0, 4.0});
    CHECK(qa_mean(lg, s2) == Catch::Approx(2.0).epsilon(1e-12));

    auto p2 = power_generator(2.0, Interval(0.5, 10));
    WeightedSample s3 = WeightedSample::uniform({1.0, 7.0});
    CHECK(qa_mean(p2, s3) == Catch::Approx(5.0).epsilon(1e-12));
}

TEST_CASE("qa_mean_two examples") {
    auto id = identity_generator(Interval(-1, 10));
    CHECK(qa_mean_two(id, {0.0, 4.0, 0.5}) == Catch::Approx(2.0));

    auto lg = log_generator(Interval(0.5, 10));
    CHECK(qa_mean_two(lg, {1.0, std::exp(2.0), 0.5}) == Catch::Approx(std::exp(1.0)).epsilon(1e-12));

    auto p10 = power_generator(10.0, Interval(0.5, 3));
    // ((1 + 2^10)/2)^(1/10)
    CHECK(qa_mean_two(p10, {1.0, 2.0, 0.5}) ==
          Catch::Approx(1.8662481360464057).epsilon(1e-12));
}

TEST_CASE("power mean closed form examples") {
    WeightedSample s13 = WeightedSample::uniform({1.0, 3.0});
    CHECK(power_mean_closed_form(1.0, s13) == Catch::Approx(2.0).epsilon(1e-12));

    WeightedSample s17 = WeightedSample::uniform({1.0, 7.0});
    CHECK(power_mean_closed_form(2.0, s17) == Catch::Approx(5.0).epsilon(1e-12));

    WeightedSample s12 = WeightedSample::uniform({1.0, 2.0});
    CHECK(power_mean_closed_form(-1.0, s12) == Catch::Approx(4.0 / 3.0).epsilon(1e-12));

    CHECK_THROWS_AS(power_mean_closed_form(0.0, s12), InvalidParameter);
    WeightedSample bad = WeightedSample::uniform({-1.0, 2.0});
    CHECK_THROWS_AS(power_mean_closed_form(1.0, bad), DomainError);
}

TEST_CASE("sample validation") {
    auto id = identity_generator(Interval(0, 10));
    WeightedSample s;
    CHECK_THROWS_AS(qa_mean(id, s), InvalidParameter);
    s.entries = {1.0, 2.0};
    s.weights = {0.5, 0.6};
    CHECK_THROWS_AS(qa_mean(id, s), InvalidParameter);
    s.weights = {0.5, -0.5};
    CHECK_THROWS_AS(qa_mean(id, s), InvalidParameter);
    s.weights = {0.5, 0.5};
    s.entries = {1.0, 42.0};
    CHECK_THROWS_AS(qa_mean(id, s), DomainError);
}

TEST_CASE("degenerate samples short-circuit") {
    auto e = exponential_generator(400.0, Interval(0, 1)); // would overflow if evaluated
    WeightedSample s = WeightedSample::uniform({0.25, 0.25, 0.25});
    CHECK(qa_mean(e, s) == 0.25);
}

TEST_CASE("overflow names the offending entry") {
    auto e = exponential_generator(1000.0, Interval(0, 1));
    WeightedSample s = WeightedSample::uniform({0.1, 0.9});
    try {
        qa_mean(e, s);
        FAIL("expected OverflowError");
    } catch (const OverflowError& err) {
        CHECK(std::string(err.what()).find("entry 1") != std::string::npos);
    }
}

TEST_CASE("internality and permutation invariance") {
    std::mt19937_64 rng(20260810);
    auto gens = {identity_generator(Interval(0.1, 10)), power_generator(3.0, Interval(0.1, 10)),
                 power_generator(-2.0, Interval(0.1, 10)),
                 exponential_generator(1.5, Interval(0.1, 10)), log_generator(Interval(0.1, 10))};
    for (const Generator& g : gens) {
        for (int i = 0; i < 100; ++i) {
            WeightedSample s = random_sample(rng, 0.2, 9.5);
            double m = qa_mean(g, s);
            double lo = *std::min_element(s.entries.begin(), s.entries.end());
            double hi = *std::max_element(s.entries.begin(), s.entries.end());
            CHECK(m >= lo - 1e-12);
            CHECK(m <= hi + 1e-12);

            // joint permutation leaves the value unchanged (same multiset sum)
            WeightedSample p = s;
            std::vector<std::size_t> idx(s.entries.size());
            std::iota(idx.begin(), idx.end(), 0);
            std::shuffle(idx.begin(), idx.end(), rng);
            for (std::size_t j = 0; j < idx.size(); ++j) {
                p.entries[j] = s.entries[idx[j]];
                p.weights[j] = s.weights[idx[j]];
            }
            CHECK(std::fabs(qa_mean(g, p) - m) <= 1e-12 * (1.0 + std::fabs(m)));
        }
    }
}

TEST_CASE("two-point symmetry is exact") {
    std::mt19937_64 rng(5);
    auto lg = log_generator(Interval(0.1, 10));
    std::uniform_real_distribution<double> pick(0.2, 9.0), xi(0.01, 0.99);
    for (int i = 0; i < 200; ++i) {
        double x = pick(rng), z = pick(rng), w = xi(rng);
        if (x == z) continue;
        double a = qa_mean_two(lg, {x, z, w});
        double b = qa_mean_two(lg, {z, x, 1.0 - w});
        CHECK(std::fabs(a - b) <= 1e-12 * (1.0 + std::fabs(a)));
    }
}

TEST_CASE("affine invariance of the mean") {
    std::mt19937_64 rng(11);
    auto g = exponential_generator(1.0, Interval(0.1, 5));
    std::uniform_real_distribution<double> coef(-4.0, 4.0);
    for (int i = 0; i < 100; ++i) {
        double alpha = coef(rng);
        if (std::fabs(alpha) < 0.05) alpha = 1.3;
        double beta = coef(rng);
        WeightedSample s = random_sample(rng, 0.2, 4.8);
        double spread = *std::max_element(s.entries.begin(), s.entries.end()) -
                        *std::min_element(s.entries.begin(), s.entries.end());
        double m1 = qa_mean(g, s);
        double m2 = qa_mean(affine_transform(g, alpha, beta), s);
        CHECK(std::fabs(m1 - m2) <= 1e-9 * (spread + 1e-6));
    }
}

TEST_CASE("reduction bound from the two-point mean") {
    std::mt19937_64 rng(13);
    auto gens = {identity_generator(Interval(0.1, 10)), exponential_generator(2.0, Interval(0.1, 10)),
                 power_generator(2.0, Interval(0.1, 10)), log_generator(Interval(0.1, 10))};
    for (const Generator& g : gens) {
        for (int i = 0; i < 100; ++i) {
            WeightedSample s = random_sample(rng, 0.2, 9.5);
            std::vector<std::size_t> idx(s.entries.size());
            std::iota(idx.begin(), idx.end(), 0);
            std::sort(idx.begin(), idx.end(),
                      [&](std::size_t a, std::size_t b) { return s.entries[a] < s.entries[b]; });
            WeightedSample sorted;
            for (std::size_t j : idx) {
                sorted.entries.push_back(s.entries[j]);
                sorted.weights.push_back(s.weights[j]);
            }
            double m = qa_mean(g, sorted);
            double hi = sorted.entries.back();
            double lo = sorted.entries.front();
            if (hi == lo) continue;
            double two = qa_mean_two(g, {hi, lo, sorted.weights.back()});
            CHECK(hi >= m - 1e-12);
            CHECK(m >= two - 1e-9);
        }
    }
}

TEST_CASE("oracle equivalence with closed-form power means") {
    std::mt19937_64 rng(17);
    for (double p : {-2.0, -1.0, 0.5, 1.0, 2.0, 3.0, 10.0}) {
        auto g = power_generator(p, Interval(0.05, 11));
        for (int i = 0; i < 100; ++i) {
            WeightedSample s = random_sample(rng, 0.1, 10.0);
            double a = qa_mean(g, s);
            double b = power_mean_closed_form(p, s);
            CHECK(std::fabs(a - b) <= 1e-9 * std::fabs(b));
        }
    }
}

TEST_CASE("monotonicity in each entry") {
    std::mt19937_64 rng(19);
    auto gens = {power_generator(-1.0, Interval(0.1, 12)), log_generator(Interval(0.1, 12)),
                 exponential_generator(0.7, Interval(0.1, 12))};
    for (const Generator& g : gens) {
        for (int i = 0; i < 100; ++i) {
            WeightedSample s = random_sample(rng, 0.2, 9.0);
            double m = qa_mean(g, s);
            std::uniform_int_distribution<std::size_t> which(0, s.entries.size() - 1);
            WeightedSample bumped = s;
            bumped.entries[which(rng)] += 0.5;
            CHECK(qa_mean(g, bumped) >= m - 1e-12);
        }
    }
}
