#include "doctest.h"

#include <cmath>

#include "eadmm/uc_selection.hpp"
#include "eadmm/variation.hpp"
#include "support.hpp"

using namespace eadmm;

namespace {

std::vector<Bounds> unit_box(std::size_t n) { return std::vector<Bounds>(n, Bounds{0.0, 1.0}); }

} // namespace

TEST_SUITE("variation") {

TEST_CASE("SBX with beta = 1 reproduces the parents") {
    CHECK(sbx_beta(0.5, 20.0) == 1.0);
    const auto [a, b] = sbx_blend(0.2, 0.7, 1.0);
    CHECK(a == doctest::Approx(0.2).epsilon(1e-15));
    CHECK(b == doctest::Approx(0.7).epsilon(1e-15));
}

TEST_CASE("SBX with p_c = 0 copies the parents") {
    Rng rng(1);
    const std::vector<double> p1{0.1, 0.2, 0.3};
    const std::vector<double> p2{0.9, 0.8, 0.7};
    const auto [c1, c2] = sbx_crossover(p1, p2, unit_box(3), {0.0, 20.0}, rng);
    CHECK(c1 == p1);
    CHECK(c2 == p2);
}

TEST_CASE("SBX child mean is the parent midpoint") {
    Rng rng(2);
    const std::vector<double> p1{0.4};
    const std::vector<double> p2{0.6};
    const int trials = 100000;
    double sum = 0.0;
    double sq = 0.0;
    for (int t = 0; t < trials; ++t) {
        const auto [c1, c2] = sbx_crossover(p1, p2, unit_box(1), {}, rng);
        for (double v : {c1[0], c2[0]}) {
            sum += v;
            sq += v * v;
        }
    }
    const double n = 2.0 * trials;
    const double mean = sum / n;
    const double se = std::sqrt((sq / n - mean * mean) / n);
    CHECK(std::fabs(mean - 0.5) <= 3.0 * se);
}

TEST_CASE("SBX stays in bounds") {
    Rng rng(3);
    for (int t = 0; t < 10000; ++t) {
        const std::vector<double> p1{rng.uniform(), 0.0, 1.0};
        const std::vector<double> p2{rng.uniform(), 1.0, 0.0};
        const auto [c1, c2] = sbx_crossover(p1, p2, unit_box(3), {1.0, 2.0}, rng);
        for (double v : c1) CHECK((v >= 0.0 && v <= 1.0));
        for (double v : c2) CHECK((v >= 0.0 && v <= 1.0));
    }
}

TEST_CASE("polynomial mutation with p_m = 0 is the identity") {
    Rng rng(4);
    const std::vector<double> x{0.1, 0.5, 0.9};
    CHECK(polynomial_mutation(x, unit_box(3), {0.0, 20.0}, rng) == x);
}

TEST_CASE("polynomial mutation never leaves the box") {
    Rng rng(5);
    const std::vector<double> x{0.0, 1.0};
    for (int t = 0; t < 100000; ++t) {
        const auto y = polynomial_mutation(x, unit_box(2), {1.0, 20.0}, rng);
        CHECK(y[0] >= 0.0);
        CHECK(y[1] <= 1.0);
    }
}

TEST_CASE("polynomial mutation with p_m = 1 changes every interior coordinate") {
    Rng rng(6);
    std::size_t changed = 0;
    std::size_t total = 0;
    for (int t = 0; t < 2000; ++t) {
        std::vector<double> x(5);
        for (auto& v : x) v = rng.uniform(0.01, 0.99);
        const auto y = polynomial_mutation(x, unit_box(5), {1.0, 20.0}, rng);
        for (std::size_t i = 0; i < x.size(); ++i) changed += y[i] != x[i];
        total += x.size();
    }
    CHECK(changed == total);
}

TEST_CASE("DE degenerate cases return the base") {
    Rng rng(7);
    const std::vector<double> base{0.3, 0.4, 0.5};
    const std::vector<double> a{0.9, 0.1, 0.7};
    const std::vector<double> b{0.2, 0.6, 0.1};
    // f = 0 makes the mutant equal to the base
    CHECK(de_variation(base, a, b, unit_box(3), {1.0, 0.0}, rng) == base);
    const auto t2 = de_variation(base, a, a, unit_box(3), {1.0, 2.0}, rng);
    CHECK(t2 == base);
    CHECK_THROWS_AS(de_variation(base, std::vector<double>{0.1}, b, unit_box(3), {}, rng), std::invalid_argument);
}

TEST_CASE("DE trial follows the binomial mask of the generator") {
    const std::vector<double> base{0.5, 0.5, 0.5, 0.5, 0.5, 0.5};
    const std::vector<double> a{0.9, 0.8, 0.7, 0.6, 0.4, 0.3};
    const std::vector<double> b{0.1, 0.2, 0.3, 0.4, 0.6, 0.7};
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        Rng rng(seed);
        Rng replay(seed);
        const auto trial = de_variation(base, a, b, unit_box(6), {0.5, 0.5}, rng);
        const auto forced = replay.index(6);
        std::size_t inherited = 0;
        for (std::size_t j = 0; j < 6; ++j) {
            const bool take = j == forced || replay.bernoulli(0.5);
            const double expected = take ? base[j] + 0.5 * (a[j] - b[j]) : base[j];
            CHECK(trial[j] == expected);
            inherited += take;
        }
        CHECK(inherited >= 1);
    }
}

TEST_CASE("binary tournament") {
    Rng rng(8);
    const Population one{testing::sol({1, 1})};
    CHECK(&binary_tournament(one, constraint_dominates_uc, rng) == &one[0]);

    const Population pair{testing::sol({5, 5}, {0}), testing::sol({0, 0}, {1})};
    const Population empty;
    CHECK_THROWS_AS(binary_tournament(empty, constraint_dominates_uc, rng), std::invalid_argument);

    int feasible_when_mixed = 0;
    int mixed = 0;
    int better = 0;
    const int draws = 10000;
    for (int t = 0; t < draws; ++t) {
        Rng probe = rng;
        const auto i = probe.index(2);
        const auto j = probe.index(2);
        const auto& w = binary_tournament(pair, constraint_dominates_uc, rng);
        if (i != j) {
            ++mixed;
            feasible_when_mixed += &w == &pair[0];
        }
        better += &w == &pair[0];
    }
    CHECK(feasible_when_mixed == mixed);
    // P(better) = 1/2 (distinct draw) + 1/2 * 1/2 (same member twice, coin)
    const double p = static_cast<double>(better) / draws;
    CHECK(std::fabs(p - 0.75) < 4.0 * std::sqrt(0.75 * 0.25 / draws));
}

TEST_CASE("parameter validation") {
    CHECK_THROWS_AS(validate(SbxParams{1.5, 20}), std::invalid_argument);
    CHECK_THROWS_AS(validate(SbxParams{1.0, 0}), std::invalid_argument);
    CHECK_THROWS_AS(validate(PmParams{1.5, 20}), std::invalid_argument);
    CHECK_THROWS_AS(validate(DeParams{0.5, 0.0}), std::invalid_argument);
    CHECK_THROWS_AS(validate(DeParams{1.1, 0.5}), std::invalid_argument);
    CHECK_NOTHROW(validate(DeParams{}));
}

} // TEST_SUITE
