#include "eadmm/backbones.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace eadmm {

bool objective_dominance(const Solution& a, const Solution& b) { return pareto_dominates(a.f, b.f); }

FrontPartition fast_nondominated_sort(std::span<const Solution> pop, const Dominance& dominance) {
    return fast_nondominated_sort(pop.size(), [&](std::size_t i, std::size_t j) { return dominance(pop[i], pop[j]); });
}

std::vector<double> crowding_distance(std::span<const ObjectiveVector> front) {
    const std::size_t n = front.size();
    std::vector<double> dist(n, 0.0);
    if (n == 0) return dist;
    constexpr double inf = std::numeric_limits<double>::infinity();
    if (n <= 2) {
        std::fill(dist.begin(), dist.end(), inf);
        return dist;
    }
    const std::size_t m = front.front().size();
    std::vector<std::size_t> order(n);
    for (std::size_t k = 0; k < m; ++k) {
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(),
                         [&](std::size_t a, std::size_t b) { return front[a][k] < front[b][k]; });
        dist[order.front()] = inf;
        dist[order.back()] = inf;
        const double range = front[order.back()][k] - front[order.front()][k];
        if (range <= 0.0) continue;
        for (std::size_t r = 1; r + 1 < n; ++r) {
            dist[order[r]] += (front[order[r + 1]][k] - front[order[r - 1]][k]) / range;
        }
    }
    return dist;
}

std::vector<double> crowding_distance(std::span<const Solution> pop, std::span<const std::size_t> front) {
    std::vector<ObjectiveVector> objs;
    objs.reserve(front.size());
    for (auto i : front) objs.push_back(pop[i].f);
    return crowding_distance(objs);
}

RankAndCrowding rank_and_crowding(std::span<const Solution> pop, const Dominance& dominance) {
    RankAndCrowding rc{std::vector<std::size_t>(pop.size()), std::vector<double>(pop.size())};
    const auto fronts = fast_nondominated_sort(pop, dominance);
    for (std::size_t r = 0; r < fronts.size(); ++r) {
        const auto cd = crowding_distance(pop, fronts[r]);
        for (std::size_t k = 0; k < fronts[r].size(); ++k) {
            rc.rank[fronts[r][k]] = r;
            rc.crowding[fronts[r][k]] = cd[k];
        }
    }
    return rc;
}

std::vector<std::size_t> nsga2_select_indices(std::span<const Solution> pool, std::size_t n,
                                              const Dominance& dominance) {
    if (n > pool.size()) throw std::invalid_argument("cannot select more members than the pool holds");
    std::vector<std::size_t> chosen;
    chosen.reserve(n);
    for (const auto& front : fast_nondominated_sort(pool, dominance)) {
        if (chosen.size() == n) break;
        if (chosen.size() + front.size() <= n) {
            chosen.insert(chosen.end(), front.begin(), front.end());
            continue;
        }
        const auto cd = crowding_distance(pool, front);
        std::vector<std::size_t> order(front.size());
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return cd[a] > cd[b]; });
        for (std::size_t k = 0; chosen.size() < n; ++k) chosen.push_back(front[order[k]]);
    }
    return chosen;
}

Population nsga2_select(std::span<const Solution> pool, std::size_t n, const Dominance& dominance) {
    Population out;
    out.reserve(n);
    for (auto i : nsga2_select_indices(pool, n, dominance)) out.push_back(pool[i]);
    return out;
}

double epsilon_indicator(std::span<const double> a, std::span<const double> b) {
    double eps = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < a.size(); ++i) eps = std::max(eps, a[i] - b[i]);
    return eps;
}

IbeaIndicators ibea_indicators(std::span<const Solution> pop) {
    IbeaIndicators table;
    const std::size_t n = pop.size();
    table.n = n;
    table.values.assign(n * n, 0.0);
    if (n == 0) return table;
    const std::size_t m = pop.front().f.size();
    ObjectiveVector lo(m, std::numeric_limits<double>::infinity());
    ObjectiveVector hi(m, -std::numeric_limits<double>::infinity());
    for (const auto& s : pop) {
        for (std::size_t k = 0; k < m; ++k) {
            lo[k] = std::min(lo[k], s.f[k]);
            hi[k] = std::max(hi[k], s.f[k]);
        }
    }
    std::vector<ObjectiveVector> scaled(n, ObjectiveVector(m));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t k = 0; k < m; ++k) {
            const double range = hi[k] - lo[k];
            scaled[i][k] = range > 0.0 ? (pop[i].f[k] - lo[k]) / range : 0.0;
        }
    }
    double c = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            if (i == j) continue;
            const double v = epsilon_indicator(scaled[i], scaled[j]);
            table.values[i * n + j] = v;
            c = std::max(c, std::fabs(v));
        }
    }
    table.c = c > 0.0 ? c : 1.0;
    return table;
}

namespace {

std::vector<double> fitness_from(const IbeaIndicators& table, double kappa) {
    const std::size_t n = table.n;
    std::vector<double> fit(n, 0.0);
    for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t i = 0; i < n; ++i) {
            if (i != j) fit[j] -= std::exp(-table(i, j) / (table.c * kappa));
        }
    }
    return fit;
}

} // namespace

std::vector<double> ibea_fitness(std::span<const Solution> pop, double kappa) {
    if (!(kappa > 0.0)) throw std::invalid_argument("IBEA kappa must be positive");
    return fitness_from(ibea_indicators(pop), kappa);
}

std::vector<std::size_t> ibea_select_indices(std::span<const Solution> pool, std::size_t n, double kappa) {
    if (n > pool.size()) throw std::invalid_argument("cannot select more members than the pool holds");
    if (!(kappa > 0.0)) throw std::invalid_argument("IBEA kappa must be positive");
    const auto table = ibea_indicators(pool);
    const std::size_t k = pool.size();
    // Fitness is re-summed over the survivors rather than patched by adding
    // the removed term back, which cancels badly when that term is large.
    std::vector<double> term(k * k);
    for (std::size_t i = 0; i < k; ++i) {
        for (std::size_t j = 0; j < k; ++j) term[i * k + j] = std::exp(-table(i, j) / (table.c * kappa));
    }
    std::vector<bool> alive(k, true);
    std::vector<double> fit(k);
    for (std::size_t remaining = k; remaining > n; --remaining) {
        std::size_t worst = k;
        for (std::size_t j = 0; j < k; ++j) {
            if (!alive[j]) continue;
            fit[j] = 0.0;
            for (std::size_t i = 0; i < k; ++i) {
                if (alive[i] && i != j) fit[j] -= term[i * k + j];
            }
            if (worst == k || fit[j] < fit[worst]) worst = j;
        }
        alive[worst] = false;
    }
    std::vector<std::size_t> out;
    out.reserve(n);
    for (std::size_t i = 0; i < pool.size(); ++i) {
        if (alive[i]) out.push_back(i);
    }
    return out;
}

Population ibea_select(std::span<const Solution> pool, std::size_t n, double kappa) {
    Population out;
    out.reserve(n);
    for (auto i : ibea_select_indices(pool, n, kappa)) out.push_back(pool[i]);
    return out;
}

// ---- decomposition -------------------------------------------------------

namespace {

void lattice_rec(std::size_t m, std::size_t h, std::size_t left, std::vector<std::size_t>& parts,
                 std::vector<WeightVector>& out) {
    if (parts.size() + 1 == m) {
        parts.push_back(left);
        WeightVector w(m);
        for (std::size_t i = 0; i < m; ++i) w[i] = static_cast<double>(parts[i]) / static_cast<double>(h);
        out.push_back(std::move(w));
        parts.pop_back();
        return;
    }
    for (std::size_t k = 0; k <= left; ++k) {
        parts.push_back(k);
        lattice_rec(m, h, left - k, parts, out);
        parts.pop_back();
    }
}

std::size_t binomial(std::size_t n, std::size_t k) {
    if (k > n) return 0;
    std::size_t r = 1;
    for (std::size_t i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

} // namespace

std::vector<WeightVector> simplex_lattice(std::size_t m, std::size_t h) {
    if (m < 2 || h < 1) throw std::invalid_argument("simplex lattice needs m >= 2 and h >= 1");
    std::vector<WeightVector> out;
    out.reserve(binomial(h + m - 1, m - 1));
    std::vector<std::size_t> parts;
    lattice_rec(m, h, h, parts, out);
    return out;
}

void floor_weights(std::vector<WeightVector>& weights) {
    for (auto& w : weights) {
        double sum = 0.0;
        for (auto& v : w) {
            v = std::max(v, kWeightFloor);
            sum += v;
        }
        for (auto& v : w) v /= sum;
    }
}

std::vector<WeightVector> das_dennis_weights(std::size_t m, std::size_t h) {
    auto w = simplex_lattice(m, h);
    floor_weights(w);
    return w;
}

std::vector<WeightVector> two_layer_weights(std::size_t m, std::size_t h_outer, std::size_t h_inner) {
    auto out = simplex_lattice(m, h_outer);
    const double centroid = 1.0 / static_cast<double>(m);
    for (auto w : simplex_lattice(m, h_inner)) {
        for (auto& v : w) v = 0.5 * (v + centroid);
        out.push_back(std::move(w));
    }
    floor_weights(out);
    return out;
}

std::vector<WeightVector> default_weights(std::size_t m) {
    switch (m) {
    case 2: return das_dennis_weights(2, 99);
    case 3: return das_dennis_weights(3, 13);
    case 5: return das_dennis_weights(5, 5);
    case 10: return two_layer_weights(10, 3, 2);
    default: break;
    }
    if (m < 2) throw std::invalid_argument("need at least two objectives");
    std::size_t h = 1;
    while (binomial(h + m - 1, m - 1) < 100) ++h;
    return das_dennis_weights(m, h);
}

std::size_t default_population_size(std::size_t m) { return default_weights(m).size(); }

double tchebycheff(std::span<const double> f, std::span<const double> w, std::span<const double> z_star) {
    double g = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) g = std::max(g, std::fabs(f[i] - z_star[i]) / w[i]);
    return g;
}

MoeadState make_moead_state(std::vector<WeightVector> weights, std::size_t neighborhood_size,
                            std::span<const Solution> pop) {
    if (weights.empty()) throw std::invalid_argument("MOEA/D needs at least one weight vector");
    MoeadState state;
    const std::size_t n = weights.size();
    const std::size_t t = std::clamp<std::size_t>(neighborhood_size, 1, n);
    state.neighbors.resize(n);
    std::vector<double> dist(n);
    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            double d = 0.0;
            for (std::size_t k = 0; k < weights[i].size(); ++k) {
                const double diff = weights[i][k] - weights[j][k];
                d += diff * diff;
            }
            dist[j] = d;
        }
        std::iota(order.begin(), order.end(), 0);
        // self first, then by distance, ties by index
        std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            if ((a == i) != (b == i)) return a == i;
            return dist[a] < dist[b];
        });
        state.neighbors[i].assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(t));
    }
    state.weights = std::move(weights);
    if (!pop.empty()) {
        state.ideal = pop.front().f;
        for (const auto& s : pop) update_ideal(state, s);
    }
    return state;
}

void update_ideal(MoeadState& state, const Solution& s) {
    if (state.ideal.empty()) {
        state.ideal = s.f;
        return;
    }
    for (std::size_t k = 0; k < s.f.size(); ++k) state.ideal[k] = std::min(state.ideal[k], s.f[k]);
}

bool tchebycheff_update(const Solution& child, const Solution& parent, std::span<const double> w,
                        std::span<const double> z_star) {
    return tchebycheff(child.f, w, z_star) <= tchebycheff(parent.f, w, z_star);
}

std::size_t moead_offer(const MoeadState& state, Population& pop, const Solution& child,
                        std::span<const std::size_t> pool, std::size_t max_replacements, const UpdateRule& rule,
                        Rng& rng) {
    std::vector<std::size_t> order(pool.begin(), pool.end());
    rng.shuffle(std::span<std::size_t>(order));
    std::size_t replaced = 0;
    for (auto j : order) {
        if (replaced >= max_replacements) break;
        if (rule(child, pop[j], state.weights[j], state.ideal)) {
            pop[j] = child;
            ++replaced;
        }
    }
    return replaced;
}

std::size_t moead_stream(MoeadState& state, Population& pop, const Solution& incoming,
                         std::size_t max_replacements, const UpdateRule& rule, Rng& rng) {
    update_ideal(state, incoming);
    const std::size_t i = rng.index(pop.size());
    return moead_offer(state, pop, incoming, state.neighbors[i], max_replacements, rule, rng);
}

Population moead_generation(MoeadState& state, Population& pop, const Problem& problem, BudgetCounter& budget,
                            Rng& rng, const MoeadParams& params, const UpdateRule& rule) {
    if (pop.size() != state.weights.size()) {
        throw std::invalid_argument("population size must match the number of weight vectors");
    }
    const std::size_t n = pop.size();
    std::vector<std::size_t> whole(n);
    std::iota(whole.begin(), whole.end(), 0);
    std::vector<std::size_t> order = whole;
    rng.shuffle(std::span<std::size_t>(order));

    Population offspring;
    offspring.reserve(n);
    for (auto i : order) {
        if (budget.exhausted()) break;
        const bool local = rng.bernoulli(params.neighborhood_mating);
        std::span<const std::size_t> pool = local ? std::span<const std::size_t>(state.neighbors[i])
                                                  : std::span<const std::size_t>(whole);
        std::size_t r1 = pool[rng.index(pool.size())];
        std::size_t r2 = pool[rng.index(pool.size())];
        if (pool.size() > 2) {
            while (r1 == i) r1 = pool[rng.index(pool.size())];
            while (r2 == i || r2 == r1) r2 = pool[rng.index(pool.size())];
        }
        auto trial = de_variation(pop[i].x, pop[r1].x, pop[r2].x, problem.bounds(), params.de, rng);
        trial = polynomial_mutation(trial, problem.bounds(), params.pm, rng);
        Solution child = evaluate(problem, trial, budget, rng);
        update_ideal(state, child);
        moead_offer(state, pop, child, pool, params.max_replacements, rule, rng);
        offspring.push_back(std::move(child));
    }
    return offspring;
}

} // namespace eadmm
