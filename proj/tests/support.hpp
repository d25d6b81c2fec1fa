#pragma once

// Shared fixtures and brute-force oracles for the test binaries.

#include <algorithm>
#include <cstdint>
#include <vector>

#include "eadmm/backbones.hpp"
#include "eadmm/core.hpp"
#include "eadmm/random.hpp"

namespace testing {

inline eadmm::Solution sol(eadmm::ObjectiveVector f, eadmm::ConstraintSignal g = {0}, std::uint64_t id = 0) {
    eadmm::Solution s;
    s.x = f;
    s.f = std::move(f);
    s.g = std::move(g);
    s.eval_id = id;
    return s;
}

// Objectives drawn from a small grid so that ties and duplicates occur.
inline eadmm::Population random_population(std::size_t n, std::size_t m, eadmm::Rng& rng, std::size_t levels = 6,
                                           std::size_t constraints = 0) {
    eadmm::Population pop(n);
    for (std::size_t i = 0; i < n; ++i) {
        pop[i].f.resize(m);
        for (auto& v : pop[i].f) v = static_cast<double>(rng.index(levels)) / static_cast<double>(levels);
        pop[i].x = pop[i].f;
        pop[i].x.push_back(static_cast<double>(i));
        pop[i].g.assign(std::max<std::size_t>(constraints, 1), 0);
        if (constraints > 0) {
            for (auto& g : pop[i].g) g = rng.bernoulli(0.4) ? 1 : 0;
        }
        pop[i].eval_id = i;
    }
    return pop;
}

// Repeated filtering: peel off the members not dominated by anything left.
template <class Dominates>
eadmm::FrontPartition brute_force_fronts(std::size_t n, Dominates&& dominates) {
    std::vector<std::size_t> left(n);
    for (std::size_t i = 0; i < n; ++i) left[i] = i;
    eadmm::FrontPartition fronts;
    while (!left.empty()) {
        std::vector<std::size_t> front;
        std::vector<std::size_t> rest;
        for (auto i : left) {
            const bool dominated =
                std::any_of(left.begin(), left.end(), [&](std::size_t j) { return j != i && dominates(j, i); });
            (dominated ? rest : front).push_back(i);
        }
        fronts.push_back(front);
        left = rest;
    }
    return fronts;
}

inline eadmm::FrontPartition canonical(eadmm::FrontPartition fronts) {
    for (auto& f : fronts) std::sort(f.begin(), f.end());
    return fronts;
}

// One decision variable on [0, 1], objectives (x, 1 - x), a single flag
// raised outside [lo, hi].
inline eadmm::Problem interval_problem(double lo = 0.4, double hi = 0.6, double p_noise = 0.0) {
    return eadmm::Problem(
        "interval", 2, 1, {{0.0, 1.0}},
        [](std::span<const double> x, std::span<double> f) {
            f[0] = x[0];
            f[1] = 1.0 - x[0];
        },
        [lo, hi](std::span<const double> x, std::span<const double>, std::span<std::uint8_t> g) {
            g[0] = (x[0] >= lo && x[0] <= hi) ? 0 : 1;
        },
        p_noise);
}

} // namespace testing
