#include "doctest.h"

#include <algorithm>
#include <cmath>

#include "eadmm/engine.hpp"
#include "eadmm/uc_problems.hpp"
#include "support.hpp"

using namespace eadmm;
using testing::sol;

namespace {

Solution evaluated(const Problem& problem, DecisionVector x) {
    BudgetCounter b(1);
    Rng r(0);
    return evaluate(problem, x, b, r);
}

// Grid minimum of h on the toy problem.
double toy_oracle(double x_hat, double rho, double lo, double hi) {
    double best_x = 0.0;
    double best_h = 1e300;
    for (int i = 0; i <= 1'000'000; ++i) {
        const double x = i / 1e6;
        const double h = ((x >= lo && x <= hi) ? 0.0 : 1.0) + rho * (x - x_hat) * (x - x_hat);
        if (h < best_h) {
            best_h = h;
            best_x = x;
        }
    }
    return best_x;
}

EadmmConfig small_config(Backbone b, std::uint64_t max_fe) {
    EadmmConfig c;
    c.backbone = b;
    c.population_size = 20;
    c.max_fe = max_fe;
    return c;
}

} // namespace

TEST_SUITE("engine") {

TEST_CASE("proximity weight") {
    CHECK(proximity_weight(0, 10, 2) == 0.0);
    CHECK(proximity_weight(5, 10, 2) == 1.0);
    CHECK(proximity_weight(10, 10, 2) == 2.0);
    CHECK(proximity_weight(50, 100, 1) == 0.5);
    CHECK(proximity_weight(105, 105, 3) == 3.0);
    CHECK_THROWS_AS(proximity_weight(11, 10, 2), std::invalid_argument);
    CHECK_THROWS_AS(proximity_weight(0, 0, 2), std::invalid_argument);
}

TEST_CASE("discrepancy archive examples") {
    const Population p{sol({0.5, 0.5}, {0}, 0)};
    const Population p_bar{sol({0.3, 0.3}, {1}, 1)};
    const Population q{
        sol({0.2, 0.2}, {1}, 2),  // dominates both
        sol({0.4, 0.4}, {0}, 3),  // dominates p only
        sol({0.1, 0.9}, {0}, 4),  // dominates neither
        sol({0.2, 0.2}, {1}, 5),  // duplicate decision vector of 2
        sol({0.1, 0.1}, {0}, 6),  // dominates both
    };
    const auto a = build_discrepancy_archive(q, p, p_bar, 10);
    REQUIRE(a.size() == 2);
    CHECK(a[0].eval_id == 2);
    CHECK(a[1].eval_id == 6);

    const auto capped = build_discrepancy_archive(q, p, p_bar, 1);
    REQUIRE(capped.size() == 1);
    CHECK(capped[0].eval_id == 6);  // fewer violations
    CHECK(build_discrepancy_archive(q, p, {}, 10).empty());
}

TEST_CASE("discrepancy archive is sound and complete") {
    Rng rng(31);
    for (int t = 0; t < 200; ++t) {
        auto q = testing::random_population(15, 2, rng, 5, 1);
        const auto p = testing::random_population(10, 2, rng, 5, 1);
        const auto p_bar = testing::random_population(10, 2, rng, 5, 1);
        for (std::size_t i = 0; i < q.size(); ++i) q[i].x.back() = static_cast<double>(i % 12);
        const auto a = build_discrepancy_archive(q, p, p_bar, q.size());
        auto dominates_some = [](const Solution& s, const Population& pop) {
            return std::any_of(pop.begin(), pop.end(), [&](const Solution& o) { return pareto_dominates(s.f, o.f); });
        };
        for (const auto& s : a) {
            CHECK(dominates_some(s, p));
            CHECK(dominates_some(s, p_bar));
        }
        for (std::size_t i = 0; i < a.size(); ++i) {
            for (std::size_t j = i + 1; j < a.size(); ++j) CHECK(a[i].x != a[j].x);
        }
        for (const auto& s : q) {
            if (dominates_some(s, p) && dominates_some(s, p_bar)) {
                CHECK(std::any_of(a.begin(), a.end(), [&](const Solution& o) { return o.x == s.x; }));
            }
        }
        const auto capped = build_discrepancy_archive(q, p, p_bar, 3);
        CHECK(capped.size() == std::min<std::size_t>(3, a.size()));
    }
}

TEST_CASE("local search returns a feasible x_hat untouched") {
    const auto problem = testing::interval_problem();
    const auto x_hat = evaluated(problem, {0.5});
    BudgetCounter budget(1000);
    Rng rng(1);
    const auto r = local_search(x_hat, problem, 5, 10, {}, {}, {}, budget, rng);
    CHECK(r.evaluations == 0);
    CHECK(budget.used() == 0);
    CHECK(r.best.x == x_hat.x);
    CHECK(r.objective == 0.0);
}

TEST_CASE("local search on the interval problem") {
    const auto problem = testing::interval_problem();
    const auto x_hat = evaluated(problem, {0.9});
    const LocalSearchParams params;
    const std::size_t n = 10;
    for (std::size_t gamma : {std::size_t{5}, std::size_t{10}}) {
        const double rho = proximity_weight(gamma, n, 1);
        const double oracle = toy_oracle(0.9, rho, 0.4, 0.6);
        CHECK(oracle == doctest::Approx(0.6).epsilon(1e-6));
        int hits = 0;
        for (std::uint64_t seed = 1; seed <= 31; ++seed) {
            BudgetCounter budget(100'000);
            Rng rng(seed);
            const auto r = local_search(x_hat, problem, gamma, n, params, {}, {}, budget, rng);
            CHECK(r.evaluations == budget.used());
            CHECK(r.evaluations == (params.ga_pop - 1) + params.ga_pop * params.ga_generations);
            CHECK(r.objective == doctest::Approx(rho * (r.best.x[0] - 0.9) * (r.best.x[0] - 0.9) +
                                                 static_cast<double>(violated_count(r.best))));
            if (is_feasible(r.best) && std::abs(r.best.x[0] - oracle) <= 1e-2) ++hits;
        }
        CHECK(hits >= 29);
    }
}

TEST_CASE("local search with gamma = 0 only counts violations") {
    const auto problem = testing::interval_problem();
    const auto x_hat = evaluated(problem, {0.05});
    BudgetCounter budget(100'000);
    Rng rng(3);
    const auto r = local_search(x_hat, problem, 0, 10, {}, {}, {}, budget, rng);
    CHECK(is_feasible(r.best));
    CHECK(r.objective == 0.0);
}

TEST_CASE("local search stops at the budget") {
    const auto problem = testing::interval_problem();
    const auto x_hat = evaluated(problem, {0.9});
    BudgetCounter budget(7);
    Rng rng(4);
    const auto r = local_search(x_hat, problem, 5, 10, {}, {}, {}, budget, rng);
    CHECK(r.evaluations == 7);
    CHECK(budget.exhausted());
}

TEST_CASE("initialize validates the budget and parameters") {
    const auto problem = make_problem(parse_problem_name("UC1-DTLZ2-m2"));
    Rng rng(5);
    auto c = small_config(Backbone::Nsga2, 39);
    CHECK_THROWS_AS(initialize(problem, c, rng), std::invalid_argument);
    c.max_fe = 40;
    const auto s = initialize(problem, c, rng);
    CHECK(s.p.size() == 20);
    CHECK(s.p_bar.size() == 20);
    CHECK(s.budget.used() == 40);
    c.ablation = true;
    c.max_fe = 20;
    const auto a = initialize(problem, c, rng);
    CHECK(a.p.size() == 20);
    CHECK(a.p_bar.empty());
    c.local_search.credit_ratio = -1.0;
    CHECK_THROWS_AS(initialize(problem, c, rng), std::invalid_argument);
    c = small_config(Backbone::Nsga2, 100);
    c.population_size = 1;
    CHECK_THROWS_AS(initialize(problem, c, rng), std::invalid_argument);
}

TEST_CASE("a budget of exactly 2N runs no generation") {
    const auto problem = make_problem(parse_problem_name("UC1-DTLZ2-m2"));
    const auto rec = run(problem, small_config(Backbone::Ibea, 40), 1);
    CHECK(rec.used_fe == 40);
    REQUIRE(rec.trace.size() == 1);
    CHECK(rec.trace[0].generation == 0);
}

TEST_CASE("cross update keeps population sizes") {
    const auto problem = make_problem(parse_problem_name("UC4-DTLZ2-m2"));
    for (auto b : {Backbone::Nsga2, Backbone::Ibea, Backbone::Moead}) {
        Rng rng(6);
        auto c = small_config(b, 10'000);
        auto state = initialize(problem, c, rng);
        const auto n = state.n;
        Population q;
        Population q_bar;
        for (std::size_t i = 0; i < n; ++i) {
            q.push_back(evaluate(problem, problem.random_point(rng), state.budget, rng));
            q_bar.push_back(evaluate(problem, problem.random_point(rng), state.budget, rng));
        }
        cross_update(state, q, q_bar, c, rng);
        CHECK(state.p.size() == n);
        CHECK(state.p_bar.size() == n);
    }
}

TEST_CASE("every evaluation is accounted for") {
    for (auto b : {Backbone::Nsga2, Backbone::Ibea, Backbone::Moead}) {
        for (double credit : {0.0, 1.0, 50.0}) {
            const auto problem = make_problem(parse_problem_name("UC1-DTLZ1-m2"));
            auto c = small_config(b, 6'000);
            c.local_search.credit_ratio = credit;
            Rng rng(7);
            auto state = initialize(problem, c, rng);
            std::uint64_t counted = 2 * state.n;
            std::uint64_t ls_total = 0;
            std::uint64_t offspring_total = 0;
            const std::size_t max_single =
                (c.local_search.ga_pop - 1) + c.local_search.ga_pop * c.local_search.ga_generations;
            while (!state.budget.exhausted()) {
                const auto r = eadmm_generation(state, problem, c, rng);
                counted += r.q + r.q_bar + r.local_search_fe;
                offspring_total += r.q + r.q_bar;
                ls_total += r.local_search_fe;
                CHECK(state.p.size() == state.n);
                CHECK(state.p_bar.size() == state.n);
                CHECK(r.searched <= r.archive);
                CHECK(state.budget.used() == counted);
                CHECK(state.budget.used() <= c.max_fe);
            }
            CHECK(state.budget.used() == c.max_fe);
            if (credit > 0.0) CHECK(static_cast<double>(ls_total) <= credit * offspring_total + max_single);
        }
    }
}

TEST_CASE("ablation runs the constrained population alone") {
    const auto problem = make_problem(parse_problem_name("UC4-DTLZ2-m3"));
    for (auto b : {Backbone::Nsga2, Backbone::Ibea, Backbone::Moead}) {
        auto c = small_config(b, 3'000);
        c.ablation = true;
        Rng rng(8);
        auto state = initialize(problem, c, rng);
        std::uint64_t counted = state.n;
        while (!state.budget.exhausted()) {
            const auto r = eadmm_generation(state, problem, c, rng);
            CHECK(r.q_bar == 0);
            CHECK(r.archive == 0);
            CHECK(r.local_search_fe == 0);
            counted += r.q;
            CHECK(state.p_bar.empty());
        }
        CHECK(counted == c.max_fe);
    }
}

TEST_CASE("runs are reproducible") {
    const auto problem = make_problem(parse_problem_name("UC2-DTLZ2-m3"));
    for (auto b : {Backbone::Nsga2, Backbone::Ibea, Backbone::Moead}) {
        const auto c = small_config(b, 2'500);
        const auto r1 = run(problem, c, 11);
        const auto r2 = run(problem, c, 11);
        REQUIRE(r1.final_p.size() == r2.final_p.size());
        for (std::size_t i = 0; i < r1.final_p.size(); ++i) {
            CHECK(r1.final_p[i].x == r2.final_p[i].x);
            CHECK(r1.final_p[i].g == r2.final_p[i].g);
        }
        REQUIRE(r1.trace.size() == r2.trace.size());
        for (std::size_t i = 0; i < r1.trace.size(); ++i) {
            CHECK(r1.trace[i].used_fe == r2.trace[i].used_fe);
            CHECK(r1.trace[i].feasible_true == r2.trace[i].feasible_true);
        }
        CHECK(r1.used_fe == c.max_fe);
        const auto r3 = run(problem, c, 12);
        CHECK(r3.final_p[0].x != r1.final_p[0].x);
    }
}

TEST_CASE("run calls the probe after every generation and flags the last") {
    const auto problem = make_problem(parse_problem_name("UC1-DTLZ2-m2"));
    std::size_t calls = 0;
    std::size_t finals = 0;
    const auto rec = run(problem, small_config(Backbone::Nsga2, 1'000), 2,
                         [&](const EadmmState&, bool final) -> std::optional<QualityScores> {
                             ++calls;
                             finals += final;
                             return std::nullopt;
                         });
    CHECK(calls == rec.trace.size());
    CHECK(finals == 1);
    CHECK(rec.trace.back().used_fe == 1'000);
}

} // TEST_SUITE
