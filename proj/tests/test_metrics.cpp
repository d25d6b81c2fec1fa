#include "doctest.h"

#include <cmath>
#include <limits>

#include "eadmm/metrics.hpp"
#include "eadmm/random.hpp"

using namespace eadmm;

namespace {

constexpr double kTol = 1e-10;

// Inclusion-exclusion over all subsets; small sets only.
double hv_inclusion_exclusion(const std::vector<ObjectiveVector>& pts, const std::vector<double>& ref) {
    const std::size_t n = pts.size();
    const std::size_t m = ref.size();
    double total = 0.0;
    for (std::size_t mask = 1; mask < (std::size_t{1} << n); ++mask) {
        double vol = 1.0;
        int bits = 0;
        for (std::size_t i = 0; i < m; ++i) {
            double hi = -std::numeric_limits<double>::infinity();
            for (std::size_t k = 0; k < n; ++k) {
                if (mask & (std::size_t{1} << k)) hi = std::max(hi, pts[k][i]);
            }
            vol *= std::max(0.0, ref[i] - hi);
        }
        for (std::size_t k = 0; k < n; ++k) bits += (mask >> k) & 1;
        total += (bits % 2 == 1 ? 1.0 : -1.0) * vol;
    }
    return total;
}

std::vector<ObjectiveVector> random_set(Rng& rng, std::size_t n, std::size_t m) {
    std::vector<ObjectiveVector> out(n, ObjectiveVector(m));
    for (auto& p : out) {
        for (auto& v : p) v = rng.uniform(0.0, 1.2);
    }
    return out;
}

} // namespace

TEST_SUITE("metrics") {

TEST_CASE("IGD examples") {
    const std::vector<ObjectiveVector> r{{0, 1}, {1, 0}};
    CHECK(std::abs(igd(r, r)) <= kTol);
    CHECK(std::abs(igd(std::vector<ObjectiveVector>{{0, 1}}, r) - std::sqrt(2.0) / 2.0) <= kTol);
    CHECK(std::abs(igd(std::vector<ObjectiveVector>{{0, 1}, {1, 0}}, r)) <= kTol);
    CHECK_THROWS_AS(igd({}, r), std::invalid_argument);
    CHECK_THROWS_AS(igd(r, {}), std::invalid_argument);
    CHECK_THROWS_AS(igd(std::vector<ObjectiveVector>{{0, 1, 2}}, r), std::invalid_argument);
}

TEST_CASE("IGD+ examples") {
    CHECK(std::abs(igd_plus(std::vector<ObjectiveVector>{{0, 0}}, std::vector<ObjectiveVector>{{1, 1}})) <= kTol);
    CHECK(std::abs(igd_plus(std::vector<ObjectiveVector>{{1, 1}}, std::vector<ObjectiveVector>{{0, 0}}) -
                   std::sqrt(2.0)) <= kTol);
    CHECK_THROWS_AS(igd_plus({}, std::vector<ObjectiveVector>{{0, 0}}), std::invalid_argument);
}

TEST_CASE("IGD+ never exceeds IGD and both ignore duplicates") {
    Rng rng(50);
    for (int t = 0; t < 200; ++t) {
        const auto a = random_set(rng, 1 + rng.index(10), 3);
        const auto r = random_set(rng, 1 + rng.index(10), 3);
        CHECK(igd_plus(a, r) <= igd(a, r) + 1e-15);
        auto dup = a;
        dup.push_back(a[rng.index(a.size())]);
        CHECK(igd(dup, r) == igd(a, r));
        CHECK(igd_plus(dup, r) == igd_plus(a, r));
    }
}

TEST_CASE("HV examples") {
    const std::vector<double> ref{1.1, 1.1};
    CHECK(std::abs(hypervolume(std::vector<ObjectiveVector>{{0.5, 0.5}}, ref) - 0.36) <= kTol);
    CHECK(std::abs(hypervolume(std::vector<ObjectiveVector>{{0, 1}, {1, 0}}, ref) - 0.21) <= kTol);
    CHECK(std::abs(hypervolume(std::vector<ObjectiveVector>{{0, 1}, {1, 0}, {1, 1}, {0, 1}}, ref) - 0.21) <= kTol);
    CHECK(hypervolume(std::vector<ObjectiveVector>{{1.2, 0.0}, {1.1, 1.1}}, ref) == 0.0);
    CHECK(hypervolume({}, ref) == 0.0);
}

TEST_CASE("exact HV matches inclusion-exclusion") {
    Rng rng(51);
    for (std::size_t m : {2, 3, 4}) {
        const std::vector<double> ref(m, 1.1);
        for (int t = 0; t < 100; ++t) {
            const auto pts = random_set(rng, 1 + rng.index(9), m);
            CHECK(std::abs(hypervolume_exact(pts, ref) - hv_inclusion_exclusion(pts, ref)) <= kTol);
        }
    }
}

TEST_CASE("HV is monotone under domination") {
    Rng rng(52);
    const std::vector<double> ref(3, 1.1);
    for (int t = 0; t < 200; ++t) {
        auto pts = random_set(rng, 1 + rng.index(15), 3);
        const double before = hypervolume_exact(pts, ref);
        auto better = pts[rng.index(pts.size())];
        for (auto& v : better) v -= rng.uniform(0.0, 0.2);
        pts.push_back(better);
        CHECK(hypervolume_exact(pts, ref) >= before - 1e-15);
    }
}

TEST_CASE("exact and Monte Carlo HV agree within 4 sigma") {
    Rng rng(53);
    const std::vector<double> ref(3, 1.1);
    for (int t = 0; t < 20; ++t) {
        const auto pts = random_set(rng, 5 + rng.index(30), 3);
        const double exact = hypervolume_exact(pts, ref);
        const auto mc = hypervolume_monte_carlo(pts, ref, kHvSamples, kHvSeed + t);
        CHECK(std::abs(exact - mc.value) <= 4.0 * mc.std_error);
    }
}

TEST_CASE("Monte Carlo HV is used above four objectives and is seeded") {
    Rng rng(54);
    const auto pts = random_set(rng, 20, 5);
    const std::vector<double> ref(5, 1.1);
    CHECK(hypervolume(pts, ref) == hypervolume(pts, ref));
    CHECK(hypervolume(pts, ref) == hypervolume_monte_carlo(pts, ref).value);
    const auto mc = hypervolume_monte_carlo(pts, ref);
    CHECK(std::abs(mc.value - hypervolume_exact(pts, ref)) <= 4.0 * mc.std_error);
}

TEST_CASE("population scoring uses feasible members only") {
    const std::vector<ObjectiveVector> reference{{0, 1}, {1, 0}};
    const auto norm = Normalization::from_front(reference);
    const std::vector<ObjectiveVector> objs{{0, 1}, {1, 0}, {-5, -5}};
    const bool none[] = {false, false, false};
    const auto empty = score_population(objs, none, reference, norm);
    CHECK(std::isinf(empty.igd));
    CHECK(empty.igd > 0);
    CHECK(std::isinf(empty.igd_plus));
    CHECK(empty.hv == 0.0);

    const bool two[] = {true, true, false};
    const auto s = score_population(objs, two, reference, norm);
    CHECK(std::abs(s.igd) <= kTol);
    CHECK(std::abs(s.igd_plus) <= kTol);
    CHECK(std::abs(s.hv - 0.21) <= kTol);

    const bool all[] = {true, true, true};
    CHECK(score_population(objs, all, reference, norm).hv > 1.0);
}

TEST_CASE("normalization") {
    const std::vector<ObjectiveVector> front{{0, 2}, {1, 0}, {0.5, 1}};
    const auto n = Normalization::from_front(front);
    CHECK(n.ideal == ObjectiveVector{0, 0});
    CHECK(n.nadir == ObjectiveVector{1, 2});
    CHECK(n.apply(std::vector<double>{0.5, 1.0}) == ObjectiveVector{0.5, 0.5});
    CHECK_THROWS_AS(Normalization::from_front({}), std::invalid_argument);
}

} // TEST_SUITE
