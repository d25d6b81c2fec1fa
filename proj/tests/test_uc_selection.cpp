#include "doctest.h"

#include <algorithm>

#include "eadmm/backbones.hpp"
#include "eadmm/uc_selection.hpp"
#include "support.hpp"

using namespace eadmm;
using testing::sol;

TEST_SUITE("uc-selection") {

TEST_CASE("constraint dominance: the four conditions") {
    // 1) feasible beats infeasible whatever the objectives
    CHECK(constraint_dominates_uc(sol({9, 9}, {0, 0}), sol({0, 0}, {1, 0})));
    CHECK_FALSE(constraint_dominates_uc(sol({0, 0}, {1, 0}), sol({9, 9}, {0, 0})));
    // 2) fewer violations wins among infeasible
    CHECK(constraint_dominates_uc(sol({9, 9}, {1, 0}), sol({0, 0}, {1, 1})));
    CHECK_FALSE(constraint_dominates_uc(sol({0, 0}, {1, 1}), sol({9, 9}, {1, 0})));
    // 3) equal violations fall back to Pareto dominance
    CHECK(constraint_dominates_uc(sol({0, 0}, {1, 0}), sol({1, 1}, {0, 1})));
    CHECK_FALSE(constraint_dominates_uc(sol({1, 1}, {0, 1}), sol({0, 0}, {1, 0})));
    CHECK_FALSE(constraint_dominates_uc(sol({0, 1}, {1, 0}), sol({1, 0}, {1, 0})));
    // 4) both feasible: Pareto dominance
    CHECK(constraint_dominates_uc(sol({0, 0}, {0, 0}), sol({1, 1}, {0, 0})));
    CHECK_FALSE(constraint_dominates_uc(sol({1, 1}, {0, 0}), sol({0, 0}, {0, 0})));
    CHECK_FALSE(constraint_dominates_uc(sol({0, 0}, {0, 0}), sol({0, 0}, {0, 0})));
}

TEST_CASE("constraint dominance equals Pareto dominance on feasible inputs") {
    Rng rng(21);
    for (int t = 0; t < 10000; ++t) {
        auto pop = testing::random_population(2, 2 + rng.index(3), rng, 5);
        CHECK(constraint_dominates_uc(pop[0], pop[1]) == pareto_dominates(pop[0].f, pop[1].f));
    }
}

TEST_CASE("constraint dominance is irreflexive, asymmetric and acyclic") {
    Rng rng(22);
    for (int t = 0; t < 5000; ++t) {
        const auto pop = testing::random_population(3, 2, rng, 3, 2);
        for (const auto& a : pop) CHECK_FALSE(constraint_dominates_uc(a, a));
        if (constraint_dominates_uc(pop[0], pop[1])) CHECK_FALSE(constraint_dominates_uc(pop[1], pop[0]));
        const bool cycle = constraint_dominates_uc(pop[0], pop[1]) && constraint_dominates_uc(pop[1], pop[2]) &&
                           constraint_dominates_uc(pop[2], pop[0]);
        CHECK_FALSE(cycle);
    }
}

TEST_CASE("NSGA-II UC selection") {
    Population pool;
    for (int i = 0; i < 4; ++i) pool.push_back(sol({double(i), double(4 - i)}, {0}, i));
    for (int i = 0; i < 4; ++i) pool.push_back(sol({-1.0 - i, -1.0}, {1}, 10 + i));
    const auto kept = nsga2_uc_select(pool, 4);
    CHECK(std::all_of(kept.begin(), kept.end(), [](const Solution& s) { return is_feasible(s); }));

    const Population ranked{sol({0, 0}, {1, 1, 1}, 0), sol({5, 5}, {1, 0, 0}, 1), sol({3, 3}, {1, 1, 0}, 2)};
    const auto fronts = fast_nondominated_sort(ranked, constraint_dominates_uc);
    REQUIRE(fronts.size() == 3);
    CHECK(fronts[0] == std::vector<std::size_t>{1});
    CHECK(fronts[1] == std::vector<std::size_t>{2});
    CHECK(fronts[2] == std::vector<std::size_t>{0});

    Rng rng(23);
    for (int t = 0; t < 50; ++t) {
        const auto feasible = testing::random_population(20, 3, rng);
        const auto a = nsga2_uc_select(feasible, 10);
        const auto b = nsga2_select(feasible, 10);
        REQUIRE(a.size() == b.size());
        for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i].eval_id == b[i].eval_id);
    }
}

TEST_CASE("IBEA UC selection: infeasible offspring leave the parents") {
    const Population parents{sol({0, 1}, {1}, 0), sol({1, 0}, {0}, 1), sol({2, 2}, {1}, 2)};
    const Population kids{sol({-1, -1}, {1}, 3), sol({-2, -2}, {1}, 4)};
    const auto out = ibea_uc_select(parents, kids, 3);
    REQUIRE(out.size() == 3);
    for (std::size_t i = 0; i < 3; ++i) CHECK(out[i].eval_id == parents[i].eval_id);
    CHECK_THROWS_AS(ibea_uc_select(parents, kids, 2), std::invalid_argument);
}

TEST_CASE("IBEA UC selection: enough feasible members") {
    const Population parents{sol({0, 1}, {0}, 0), sol({1, 0}, {1}, 1)};
    const Population kids{sol({0.5, 0.5}, {0}, 2), sol({-1, -1}, {1}, 3)};
    const auto out = ibea_uc_select(parents, kids, 2);
    REQUIRE(out.size() == 2);
    CHECK(std::all_of(out.begin(), out.end(), [](const Solution& s) { return is_feasible(s); }));
}

TEST_CASE("IBEA UC selection: fill rule with one feasible member") {
    // union of 6: one feasible, infeasible with counts 1, 1, 2, 3, 2
    const Population parents{sol({0.9, 0.9}, {1, 1, 1}, 0), sol({0.2, 0.8}, {1, 0, 0}, 1),
                             sol({0.5, 0.5}, {1, 1, 0}, 2), sol({0.1, 0.1}, {1, 1, 1}, 3)};
    const Population kids{sol({0.7, 0.3}, {0, 0, 0}, 4), sol({0.8, 0.2}, {0, 1, 0}, 5)};
    const auto out = ibea_uc_select(parents, kids, 4);
    REQUIRE(out.size() == 4);
    std::vector<std::uint64_t> ids;
    for (const auto& s : out) ids.push_back(s.eval_id);
    // the feasible kid, both single-violation members, then the count-2 member
    CHECK(ids[0] == 4);
    CHECK(std::min(ids[1], ids[2]) == 1);
    CHECK(std::max(ids[1], ids[2]) == 5);
    CHECK(ids[3] == 2);
}

TEST_CASE("IBEA UC selection: tie among equal counts goes by IBEA fitness") {
    const Population parents{sol({0.0, 0.0}, {1}, 0), sol({1.0, 1.0}, {1}, 1), sol({0.5, 0.5}, {1}, 2)};
    const Population kids{sol({3, 3}, {0}, 3)};
    const auto out = ibea_uc_select(parents, kids, 3);
    REQUIRE(out.size() == 3);
    CHECK(out[0].eval_id == 3);
    CHECK(out[1].eval_id == 0);
    CHECK(out[2].eval_id == 2);
}

TEST_CASE("IBEA UC selection: size and subset invariants") {
    Rng rng(24);
    for (int t = 0; t < 300; ++t) {
        const std::size_t n = 1 + rng.index(12);
        auto parents = testing::random_population(n, 2, rng, 6, 2);
        auto kids = testing::random_population(1 + rng.index(12), 2, rng, 6, 2);
        for (auto& k : kids) k.eval_id += 100;
        const auto out = ibea_uc_select(parents, kids, n);
        CHECK(out.size() == n);
        for (const auto& s : out) {
            const bool from_parents = std::any_of(parents.begin(), parents.end(),
                                                  [&](const Solution& p) { return p.eval_id == s.eval_id; });
            const bool from_kids =
                std::any_of(kids.begin(), kids.end(), [&](const Solution& k) { return k.eval_id == s.eval_id; });
            CHECK((from_parents || from_kids));
        }
    }
}

TEST_CASE("MOEA/D UC update: the four conditions") {
    const std::vector<double> w{0.5, 0.5};
    const std::vector<double> z{0.0, 0.0};
    // g_tch = 2 max(f)
    CHECK(moead_uc_update(sol({0.9, 0.9}, {0}), sol({0.1, 0.1}, {1}), w, z));
    CHECK_FALSE(moead_uc_update(sol({0.1, 0.1}, {1}), sol({0.9, 0.9}, {0}), w, z));
    CHECK(moead_uc_update(sol({0.9, 0.9}, {1, 0}), sol({0.1, 0.1}, {1, 1}), w, z));
    CHECK_FALSE(moead_uc_update(sol({0.1, 0.1}, {1, 1}), sol({0.9, 0.9}, {1, 0}), w, z));
    CHECK(moead_uc_update(sol({0.2, 0.1}, {0}), sol({0.25, 0.1}, {0}), w, z));       
    CHECK_FALSE(moead_uc_update(sol({0.35, 0.1}, {1}), sol({0.25, 0.1}, {1}), w, z));
    CHECK(moead_uc_update(sol({0.25, 0.1}, {1}), sol({0.1, 0.25}, {1}), w, z));
}

TEST_CASE("MOEA/D UC update equals the vanilla rule on feasible pairs") {
    Rng rng(25);
    for (int t = 0; t < 1000; ++t) {
        const auto pop = testing::random_population(2, 3, rng, 50);
        const std::vector<double> w{rng.uniform(0.01, 1), rng.uniform(0.01, 1), rng.uniform(0.01, 1)};
        const std::vector<double> z{rng.uniform(-0.2, 0), rng.uniform(-0.2, 0), rng.uniform(-0.2, 0)};
        CHECK(moead_uc_update(pop[0], pop[1], w, z) == tchebycheff_update(pop[0], pop[1], w, z));
    }
}

} // TEST_SUITE
