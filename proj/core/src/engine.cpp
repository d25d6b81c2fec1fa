#include "eadmm/engine.hpp"

#include <algorithm>
#include <chrono>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <unordered_set>

#include <fmt/format.h>

#include "eadmm/uc_selection.hpp"

namespace eadmm {

std::string_view to_string(Backbone b) {
    switch (b) {
    case Backbone::Nsga2: return "nsga2";
    case Backbone::Ibea: return "ibea";
    case Backbone::Moead: return "moead";
    }
    return "?";
}

Backbone parse_backbone(std::string_view name) {
    if (name == "nsga2") return Backbone::Nsga2;
    if (name == "ibea") return Backbone::Ibea;
    if (name == "moead") return Backbone::Moead;
    throw std::invalid_argument(fmt::format("unknown backbone '{}'", name));
}

std::string algorithm_name(const EadmmConfig& config) {
    return fmt::format("eadmm-{}{}", to_string(config.backbone), config.ablation ? "-ablated" : "");
}

void EadmmConfig::validate() const {
    eadmm::validate(sbx);
    eadmm::validate(pm);
    eadmm::validate(moead.de);
    eadmm::validate(moead.pm);
    if (!(ibea_kappa > 0.0)) throw std::invalid_argument("IBEA kappa must be positive");
    if (!(moead.neighborhood_mating >= 0.0 && moead.neighborhood_mating <= 1.0)) {
        throw std::invalid_argument("MOEA/D neighborhood mating probability must lie in [0, 1]");
    }
    if (moead.max_replacements == 0) throw std::invalid_argument("MOEA/D replacement cap must be positive");
    if (moead.neighborhood_size == 0) throw std::invalid_argument("MOEA/D neighborhood must be non-empty");
    if (local_search.ga_pop < 2 || local_search.ga_generations == 0) {
        throw std::invalid_argument("local search needs ga_pop >= 2 and ga_generations >= 1");
    }
    if (!(local_search.credit_ratio >= 0.0)) throw std::invalid_argument("local search credit ratio must be >= 0");
}

double proximity_weight(std::size_t gamma, std::size_t n, std::size_t num_constraints) {
    if (n == 0 || gamma > n) throw std::invalid_argument("feasible count must lie in [0, N]");
    return static_cast<double>(gamma) / static_cast<double>(n) * static_cast<double>(num_constraints);
}

Population build_discrepancy_archive(std::span<const Solution> q, std::span<const Solution> p,
                                     std::span<const Solution> p_bar, std::size_t cap) {
    auto dominates_some = [](const Solution& s, std::span<const Solution> pop) {
        return std::any_of(pop.begin(), pop.end(), [&](const Solution& o) { return pareto_dominates(s.f, o.f); });
    };
    Population archive;
    for (const auto& s : q) {
        if (!dominates_some(s, p) || !dominates_some(s, p_bar)) continue;
        const bool duplicate =
            std::any_of(archive.begin(), archive.end(), [&](const Solution& a) { return a.x == s.x; });
        if (!duplicate) archive.push_back(s);
    }
    if (archive.size() > cap) {
        std::stable_sort(archive.begin(), archive.end(),
                         [](const Solution& a, const Solution& b) { return violated_count(a) < violated_count(b); });
        archive.resize(cap);
    }
    return archive;
}

namespace {

double squared_distance(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
    return s;
}

struct Scored {
    Solution s;
    double h;
};

} // namespace

LocalSearchResult local_search(const Solution& x_hat, const Problem& problem, std::size_t gamma, std::size_t n,
                               const LocalSearchParams& params, const SbxParams& sbx, const PmParams& pm,
                               BudgetCounter& budget, Rng& rng) {
    const double rho = proximity_weight(gamma, n, problem.num_constraints());
    auto h = [&](const Solution& s) {
        return static_cast<double>(violated_count(s)) + rho * squared_distance(s.x, x_hat.x);
    };
    LocalSearchResult result{x_hat, h(x_hat), 0};
    // h >= 0 everywhere and h(x_hat) = 0 when it is feasible
    if (result.objective == 0.0) return result;

    std::vector<Scored> pop;
    pop.reserve(2 * params.ga_pop);
    pop.push_back({x_hat, result.objective});
    auto consider = [&](Solution s) {
        const double v = h(s);
        ++result.evaluations;
        if (v < result.objective) {
            result.objective = v;
            result.best = s;
        }
        pop.push_back({std::move(s), v});
    };

    for (std::size_t i = 1; i < params.ga_pop; ++i) {
        if (budget.exhausted()) return result;
        const auto x = problem.random_point(rng);
        consider(evaluate(problem, x, budget, rng));
    }
    const auto& bounds = problem.bounds();
    for (std::size_t gen = 0; gen < params.ga_generations; ++gen) {
        const std::size_t parents = pop.size();
        auto pick = [&]() -> const Solution& {
            const auto k = binary_tournament_index(
                parents, [&](std::size_t a, std::size_t b) { return pop[a].h < pop[b].h; }, rng);
            return pop[k].s;
        };
        std::vector<DecisionVector> children;
        while (children.size() < params.ga_pop) {
            const auto& a = pick();
            const auto& b = pick();
            auto [c1, c2] = sbx_crossover(a.x, b.x, bounds, sbx, rng);
            children.push_back(polynomial_mutation(c1, bounds, pm, rng));
            if (children.size() < params.ga_pop) children.push_back(polynomial_mutation(c2, bounds, pm, rng));
        }
        for (const auto& c : children) {
            if (budget.exhausted()) return result;
            consider(evaluate(problem, c, budget, rng));
        }
        std::stable_sort(pop.begin(), pop.end(), [](const Scored& a, const Scored& b) { return a.h < b.h; });
        pop.resize(std::min(pop.size(), params.ga_pop));
    }
    return result;
}

namespace {

Population evaluate_all(const Problem& problem, std::vector<DecisionVector> xs, BudgetCounter& budget, Rng& rng) {
    Population out;
    out.reserve(xs.size());
    for (auto& x : xs) {
        if (budget.exhausted()) break;
        problem.clamp(x);
        out.push_back(evaluate(problem, x, budget, rng));
    }
    return out;
}

Population random_population(const Problem& problem, std::size_t n, BudgetCounter& budget, Rng& rng) {
    std::vector<DecisionVector> xs;
    xs.reserve(n);
    for (std::size_t i = 0; i < n; ++i) xs.push_back(problem.random_point(rng));
    return evaluate_all(problem, std::move(xs), budget, rng);
}

// SBX + PM offspring from binary-tournament parents.
template <class Better>
std::vector<DecisionVector> ga_offspring(std::span<const Solution> pop, std::size_t count, Better&& better,
                                         const Problem& problem, const EadmmConfig& config, Rng& rng) {
    std::vector<DecisionVector> out;
    out.reserve(count);
    const auto& bounds = problem.bounds();
    while (out.size() < count) {
        const auto& a = pop[binary_tournament_index(pop.size(), better, rng)];
        const auto& b = pop[binary_tournament_index(pop.size(), better, rng)];
        auto [c1, c2] = sbx_crossover(a.x, b.x, bounds, config.sbx, rng);
        out.push_back(polynomial_mutation(c1, bounds, config.pm, rng));
        if (out.size() < count) out.push_back(polynomial_mutation(c2, bounds, config.pm, rng));
    }
    return out;
}

std::vector<DecisionVector> nsga2_offspring(std::span<const Solution> pop, const Dominance& dominance,
                                            std::size_t count, const Problem& problem, const EadmmConfig& config,
                                            Rng& rng) {
    const auto rc = rank_and_crowding(pop, dominance);
    auto better = [&](std::size_t i, std::size_t j) {
        if (rc.rank[i] != rc.rank[j]) return rc.rank[i] < rc.rank[j];
        return rc.crowding[i] > rc.crowding[j];
    };
    return ga_offspring(pop, count, better, problem, config, rng);
}

std::vector<DecisionVector> ibea_offspring(std::span<const Solution> pop, bool constrained, std::size_t count,
                                           const Problem& problem, const EadmmConfig& config, Rng& rng) {
    const auto fit = ibea_fitness(pop, config.ibea_kappa);
    auto better = [&](std::size_t i, std::size_t j) {
        if (constrained && is_feasible(pop[i]) != is_feasible(pop[j])) return is_feasible(pop[i]);
        return fit[i] > fit[j];
    };
    return ga_offspring(pop, count, better, problem, config, rng);
}

// pool = pop plus the incoming members not already present (by eval_id)
Population merged(std::span<const Solution> pop, std::span<const Solution> incoming) {
    Population pool(pop.begin(), pop.end());
    std::unordered_set<std::uint64_t> ids;
    for (const auto& s : pop) ids.insert(s.eval_id);
    for (const auto& s : incoming) {
        if (ids.insert(s.eval_id).second) pool.push_back(s);
    }
    return pool;
}

Population fresh_only(std::span<const Solution> pop, std::span<const Solution> incoming) {
    std::unordered_set<std::uint64_t> ids;
    for (const auto& s : pop) ids.insert(s.eval_id);
    Population out;
    for (const auto& s : incoming) {
        if (ids.insert(s.eval_id).second) out.push_back(s);
    }
    return out;
}

// Environmental selection of the constrained population P.
void absorb_constrained(EadmmState& state, std::span<const Solution> incoming, const EadmmConfig& config, Rng& rng) {
    if (incoming.empty()) return;
    switch (state.backbone) {
    case Backbone::Nsga2:
        state.p = nsga2_uc_select(merged(state.p, incoming), state.n);
        break;
    case Backbone::Ibea:
        state.p = ibea_uc_select(state.p, fresh_only(state.p, incoming), state.n, config.ibea_kappa);
        break;
    case Backbone::Moead:
        for (const auto& s : fresh_only(state.p, incoming)) {
            moead_stream(*state.moead_p, state.p, s, config.moead.max_replacements, moead_uc_update, rng);
        }
        break;
    }
}

// Environmental selection of the unconstrained population P_bar.
void absorb_unconstrained(EadmmState& state, std::span<const Solution> incoming, const EadmmConfig& config,
                          Rng& rng) {
    if (incoming.empty()) return;
    switch (state.backbone) {
    case Backbone::Nsga2:
        state.p_bar = nsga2_select(merged(state.p_bar, incoming), state.n);
        break;
    case Backbone::Ibea:
        state.p_bar = ibea_select(merged(state.p_bar, incoming), state.n, config.ibea_kappa);
        break;
    case Backbone::Moead:
        for (const auto& s : fresh_only(state.p_bar, incoming)) {
            moead_stream(*state.moead_p_bar, state.p_bar, s, config.moead.max_replacements, tchebycheff_update,
                         rng);
        }
        break;
    }
}

// One backbone generation on P (constrained) or P_bar; returns the offspring.
Population evolve(EadmmState& state, bool constrained, const Problem& problem, const EadmmConfig& config, Rng& rng) {
    auto& pop = constrained ? state.p : state.p_bar;
    if (state.backbone == Backbone::Moead) {
        auto& ms = constrained ? *state.moead_p : *state.moead_p_bar;
        return moead_generation(ms, pop, problem, state.budget, rng, config.moead,
                                constrained ? UpdateRule(moead_uc_update) : UpdateRule(tchebycheff_update));
    }
    const std::size_t count = static_cast<std::size_t>(std::min<std::uint64_t>(state.n, state.budget.remaining()));
    if (count == 0) return {};
    std::vector<DecisionVector> xs;
    if (state.backbone == Backbone::Nsga2) {
        xs = nsga2_offspring(pop, constrained ? Dominance(constraint_dominates_uc) : Dominance(objective_dominance),
                             count, problem, config, rng);
    } else {
        xs = ibea_offspring(pop, constrained, count, problem, config, rng);
    }
    auto offspring = evaluate_all(problem, std::move(xs), state.budget, rng);
    if (constrained) absorb_constrained(state, offspring, config, rng);
    else absorb_unconstrained(state, offspring, config, rng);
    return offspring;
}

std::size_t resolved_population(const Problem& problem, const EadmmConfig& config) {
    if (config.backbone == Backbone::Moead) return default_population_size(problem.num_objectives());
    return config.population_size != 0 ? config.population_size
                                       : default_population_size(problem.num_objectives());
}

} // namespace

EadmmState initialize(const Problem& problem, const EadmmConfig& config, Rng& rng) {
    config.validate();
    EadmmState state;
    state.backbone = config.backbone;
    state.ablation = config.ablation;
    state.n = resolved_population(problem, config);
    if (state.n < 2) throw std::invalid_argument("population size must be at least 2");
    const std::uint64_t initial = config.ablation ? state.n : 2 * state.n;
    if (config.max_fe < initial) {
        throw std::invalid_argument(fmt::format("max_fe {} is below the {} evaluations needed to initialize",
                                                config.max_fe, initial));
    }
    state.budget = BudgetCounter(config.max_fe);
    state.p = random_population(problem, state.n, state.budget, rng);
    if (!config.ablation) state.p_bar = random_population(problem, state.n, state.budget, rng);
    if (config.backbone == Backbone::Moead) {
        auto weights = default_weights(problem.num_objectives());
        state.moead_p = make_moead_state(weights, config.moead.neighborhood_size, state.p);
        if (!config.ablation) {
            state.moead_p_bar = make_moead_state(std::move(weights), config.moead.neighborhood_size, state.p_bar);
        }
    }
    return state;
}

void cross_update(EadmmState& state, std::span<const Solution> q, std::span<const Solution> q_bar,
                  const EadmmConfig& config, Rng& rng) {
    absorb_constrained(state, q_bar, config, rng);
    absorb_unconstrained(state, q, config, rng);
}

GenerationReport eadmm_generation(EadmmState& state, const Problem& problem, const EadmmConfig& config, Rng& rng) {
    GenerationReport report;
    if (state.budget.exhausted()) return report;
    ++state.generation;

    const auto q = evolve(state, true, problem, config, rng);
    report.q = q.size();
    if (state.ablation) return report;

    const auto q_bar = evolve(state, false, problem, config, rng);
    report.q_bar = q_bar.size();

    cross_update(state, q, q_bar, config, rng);

    const std::size_t cap = config.local_search.archive_cap != 0 ? config.local_search.archive_cap : state.n;
    const auto archive = build_discrepancy_archive(q, state.p, state.p_bar, cap);
    report.archive = archive.size();
    if (archive.empty()) return report;

    const bool limited = config.local_search.credit_ratio > 0.0;
    if (limited) {
        state.local_search_credit += config.local_search.credit_ratio * static_cast<double>(q.size() + q_bar.size());
    }

    const std::size_t gamma = count_feasible(state.p);
    Population refined;
    for (const auto& x_hat : archive) {
        if (state.budget.exhausted() || (limited && state.local_search_credit <= 0.0)) break;
        auto ls = local_search(x_hat, problem, gamma, state.n, config.local_search, config.sbx, config.pm,
                               state.budget, rng);
        report.local_search_fe += ls.evaluations;
        ++report.searched;
        if (limited) state.local_search_credit -= static_cast<double>(ls.evaluations);
        refined.push_back(std::move(ls.best));
    }
    absorb_constrained(state, refined, config, rng);
    absorb_unconstrained(state, refined, config, rng);
    return report;
}

RunRecord run(const Problem& problem, const EadmmConfig& config, std::uint64_t seed, const GenerationProbe& probe) {
    const auto start = std::chrono::steady_clock::now();
    Rng rng(seed);
    RunRecord record;
    record.problem = problem.name();
    record.algorithm = algorithm_name(config);
    record.seed = seed;
    record.max_fe = config.max_fe;

    auto state = initialize(problem, config, rng);
    auto snapshot = [&]() {
        TracePoint tp;
        tp.generation = state.generation;
        tp.used_fe = state.budget.used();
        tp.feasible_flagged = count_feasible(state.p);
        tp.feasible_true = static_cast<std::size_t>(std::count_if(
            state.p.begin(), state.p.end(), [&](const Solution& s) { return problem.noiseless_feasible(s.x); }));
        if (probe) tp.scores = probe(state, state.budget.exhausted());
        record.trace.push_back(std::move(tp));
    };
    snapshot();
    while (!state.budget.exhausted()) {
        const auto before = state.budget.used();
        eadmm_generation(state, problem, config, rng);
        if (state.budget.used() == before) break;
        snapshot();
    }
    record.used_fe = state.budget.used();
    record.final_p = std::move(state.p);
    record.final_p_bar = std::move(state.p_bar);
    record.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return record;
}

} // namespace eadmm
