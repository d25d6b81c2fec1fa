#pragma once

// Environmental selection machinery of the three backbone algorithms:
// NSGA-II (Pareto ranking + crowding), IBEA (additive epsilon indicator) and
// MOEA/D (Tchebycheff decomposition, DE variant).

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "eadmm/core.hpp"
#include "eadmm/random.hpp"
#include "eadmm/variation.hpp"

namespace eadmm {

// Ordered list of fronts; each front holds indices into the sorted population.
using FrontPartition = std::vector<std::vector<std::size_t>>;

// Binary relation on solutions used for ranking: dominates(a, b).
using Dominance = std::function<bool(const Solution&, const Solution&)>;

// Pareto dominance on objectives only; constraints are ignored.
bool objective_dominance(const Solution& a, const Solution& b);

// Deb's fast non-dominated sort over the relation dominates(i, j).
// O(n^2) relation queries.
template <class Dominates>
FrontPartition fast_nondominated_sort(std::size_t n, Dominates&& dominates) {
    std::vector<std::vector<std::size_t>> dominated_by(n);
    std::vector<std::size_t> domination_count(n, 0);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            if (dominates(i, j)) {
                dominated_by[i].push_back(j);
                ++domination_count[j];
            } else if (dominates(j, i)) {
                dominated_by[j].push_back(i);
                ++domination_count[i];
            }
        }
    }
    FrontPartition fronts;
    std::vector<std::size_t> current;
    for (std::size_t i = 0; i < n; ++i) {
        if (domination_count[i] == 0) current.push_back(i);
    }
    while (!current.empty()) {
        std::vector<std::size_t> next;
        for (auto i : current) {
            for (auto j : dominated_by[i]) {
                if (--domination_count[j] == 0) next.push_back(j);
            }
        }
        fronts.push_back(std::move(current));
        current = std::move(next);
    }
    return fronts;
}

FrontPartition fast_nondominated_sort(std::span<const Solution> pop, const Dominance& dominance = objective_dominance);

// Crowding distance of every listed objective vector, aligned with the input.
// Boundary points of each objective get +infinity.
std::vector<double> crowding_distance(std::span<const ObjectiveVector> front);

// Same, for the members `front` of `pop`.
std::vector<double> crowding_distance(std::span<const Solution> pop, std::span<const std::size_t> front);

struct RankAndCrowding {
    std::vector<std::size_t> rank;
    std::vector<double> crowding;
};

RankAndCrowding rank_and_crowding(std::span<const Solution> pop, const Dominance& dominance);

// Indices of the N survivors of `pool`, filled front by front; the last
// partial front is truncated by descending crowding distance.
std::vector<std::size_t> nsga2_select_indices(std::span<const Solution> pool, std::size_t n,
                                              const Dominance& dominance = objective_dominance);

Population nsga2_select(std::span<const Solution> pool, std::size_t n,
                        const Dominance& dominance = objective_dominance);

// Additive epsilon indicator I(a, b) = max_i (a_i - b_i): the smallest shift
// for which a weakly dominates b.
double epsilon_indicator(std::span<const double> a, std::span<const double> b);

inline constexpr double kIbeaKappa = 0.05;

// Pairwise indicator table over a population whose objectives are rescaled to
// [0, 1] by the population's own ranges, with the scaling constant c.
struct IbeaIndicators {
    std::vector<double> values;  // row-major, values[i * n + j] = I(x_i, x_j)
    std::size_t n = 0;
    double c = 1.0;

    double operator()(std::size_t i, std::size_t j) const { return values[i * n + j]; }
};

IbeaIndicators ibea_indicators(std::span<const Solution> pop);

// fitness(x) = sum_{y != x} -exp(-I(y, x) / (c * kappa))
std::vector<double> ibea_fitness(std::span<const Solution> pop, double kappa = kIbeaKappa);

// Removes the worst-fitness member one at a time, re-scoring the survivors
// against each other, until n remain. Returns survivor indices in ascending
// order.
std::vector<std::size_t> ibea_select_indices(std::span<const Solution> pool, std::size_t n,
                                             double kappa = kIbeaKappa);

Population ibea_select(std::span<const Solution> pool, std::size_t n, double kappa = kIbeaKappa);

// ---- decomposition -------------------------------------------------------

using WeightVector = std::vector<double>;

inline constexpr double kWeightFloor = 1e-6;

// All points of the simplex lattice with denominator h, zeros kept.
std::vector<WeightVector> simplex_lattice(std::size_t m, std::size_t h);

// Replaces zero components by kWeightFloor and renormalizes to sum 1.
void floor_weights(std::vector<WeightVector>& weights);

// Floored simplex lattice; C(h + m - 1, m - 1) vectors.
std::vector<WeightVector> das_dennis_weights(std::size_t m, std::size_t h);

// Outer lattice h_outer plus an inner lattice h_inner shrunk halfway toward
// the simplex centroid.
std::vector<WeightVector> two_layer_weights(std::size_t m, std::size_t h_outer, std::size_t h_inner);

// Default weight set per objective count: 100 (m=2), 105 (m=3), 126 (m=5),
// 275 (m=10). Other m fall back to the smallest lattice with >= 100 vectors.
std::vector<WeightVector> default_weights(std::size_t m);

std::size_t default_population_size(std::size_t m);

double tchebycheff(std::span<const double> f, std::span<const double> w, std::span<const double> z_star);

struct MoeadParams {
    std::size_t neighborhood_size = 20;  // T, capped at N
    double neighborhood_mating = 0.9;    // delta
    std::size_t max_replacements = 2;    // n_r
    DeParams de;
    PmParams pm;
};

struct MoeadState {
    std::vector<WeightVector> weights;
    std::vector<std::vector<std::size_t>> neighbors;  // T nearest weights, self included
    ObjectiveVector ideal;                            // estimated ideal point z*
};

MoeadState make_moead_state(std::vector<WeightVector> weights, std::size_t neighborhood_size,
                            std::span<const Solution> pop);

void update_ideal(MoeadState& state, const Solution& s);

// Decides whether `child` replaces `parent` on the subproblem (w, z*).
using UpdateRule = std::function<bool(const Solution& child, const Solution& parent, std::span<const double> w,
                                      std::span<const double> z_star)>;

// g_tch(child) <= g_tch(parent).
bool tchebycheff_update(const Solution& child, const Solution& parent, std::span<const double> w,
                        std::span<const double> z_star);

// Offers `child` to the subproblems listed in `pool`, visited in random
// order; at most max_replacements of them are overwritten. z* must already
// include the child. Returns the number of replacements.
std::size_t moead_offer(const MoeadState& state, Population& pop, const Solution& child,
                        std::span<const std::size_t> pool, std::size_t max_replacements, const UpdateRule& rule,
                        Rng& rng);

// Routes one externally produced solution through a randomly drawn
// subproblem neighborhood: z* refresh, then moead_offer.
std::size_t moead_stream(MoeadState& state, Population& pop, const Solution& incoming,
                         std::size_t max_replacements, const UpdateRule& rule, Rng& rng);

// One MOEA/D-DE generation over all subproblems in random order. Stops early
// when the budget runs out. Returns the evaluated offspring.
Population moead_generation(MoeadState& state, Population& pop, const Problem& problem, BudgetCounter& budget,
                            Rng& rng, const MoeadParams& params, const UpdateRule& rule = tchebycheff_update);

} // namespace eadmm
