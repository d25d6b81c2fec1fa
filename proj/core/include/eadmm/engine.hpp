#pragma once

// The EADMM loop. Two populations co-evolve on the same problem:
//   P      constrained, selected with the binary-constraint rules;
//   P_bar  unconstrained, selected with the vanilla backbone rules.
// Every generation each population produces offspring (Q and Q_bar), then the
// populations trade offspring, and offspring of P that dominate members of
// both populations seed a penalized local search for nearby feasible points.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "eadmm/backbones.hpp"
#include "eadmm/core.hpp"
#include "eadmm/metrics.hpp"
#include "eadmm/random.hpp"
#include "eadmm/variation.hpp"

namespace eadmm {

enum class Backbone { Nsga2, Ibea, Moead };

std::string_view to_string(Backbone b);
Backbone parse_backbone(std::string_view name);

struct LocalSearchParams {
    std::size_t ga_pop = 30;
    std::size_t ga_generations = 20;
    std::size_t archive_cap = 0;  // 0 means N
    // Each generation credits credit_ratio * (|Q| + |Q_bar|) evaluations to
    // Step 4. A search starts only while the credit is positive and its whole
    // cost is debited afterwards. 0 removes the limit.
    double credit_ratio = 50.0;
};

struct EadmmConfig {
    Backbone backbone = Backbone::Nsga2;
    std::size_t population_size = 0;  // 0 means the default for m; MOEA/D always uses its weight count
    std::uint64_t max_fe = 10'000;
    bool ablation = false;            // run the constrained population alone

    SbxParams sbx;
    PmParams pm;
    MoeadParams moead;
    double ibea_kappa = kIbeaKappa;
    LocalSearchParams local_search;

    void validate() const;
};

struct EadmmState {
    Backbone backbone = Backbone::Nsga2;
    bool ablation = false;
    std::size_t n = 0;
    Population p;
    Population p_bar;
    std::optional<MoeadState> moead_p;
    std::optional<MoeadState> moead_p_bar;
    BudgetCounter budget{0};
    std::size_t generation = 0;
    double local_search_credit = 0.0;
};

// rho = (gamma / N) * l
double proximity_weight(std::size_t gamma, std::size_t n, std::size_t num_constraints);

// Members of Q that Pareto-dominate (objectives only) at least one member of P
// and at least one member of P_bar, deduplicated by decision vector. Above
// `cap` the members with the fewest violations are kept, ties by order in Q.
Population build_discrepancy_archive(std::span<const Solution> q, std::span<const Solution> p,
                                     std::span<const Solution> p_bar, std::size_t cap);

struct LocalSearchResult {
    Solution best;
    double objective = 0.0;
    std::uint64_t evaluations = 0;
};

// Minimizes h(x) = #violated(x) + rho |x - x_hat|^2 with a small real-coded
// GA seeded from x_hat and uniform samples. Every h evaluation is one charged
// function evaluation; x_hat is reused without re-evaluation. Stops early with
// the incumbent when the budget runs out or when x_hat is already feasible.
LocalSearchResult local_search(const Solution& x_hat, const Problem& problem, std::size_t gamma, std::size_t n,
                               const LocalSearchParams& params, const SbxParams& sbx, const PmParams& pm,
                               BudgetCounter& budget, Rng& rng);

EadmmState initialize(const Problem& problem, const EadmmConfig& config, Rng& rng);

// Steps 1-2: P absorbs Q_bar with the constrained rule, P_bar absorbs Q with
// the vanilla rule.
void cross_update(EadmmState& state, std::span<const Solution> q, std::span<const Solution> q_bar,
                  const EadmmConfig& config, Rng& rng);

struct GenerationReport {
    std::size_t q = 0;
    std::size_t q_bar = 0;
    std::size_t archive = 0;
    std::size_t searched = 0;
    std::uint64_t local_search_fe = 0;
};

GenerationReport eadmm_generation(EadmmState& state, const Problem& problem, const EadmmConfig& config, Rng& rng);

struct TracePoint {
    std::size_t generation = 0;
    std::uint64_t used_fe = 0;
    std::size_t feasible_flagged = 0;  // by the observed (possibly noisy) flags
    std::size_t feasible_true = 0;     // by the noiseless oracle
    std::optional<QualityScores> scores;
};

struct RunRecord {
    std::string problem;
    std::string algorithm;
    std::uint64_t seed = 0;
    std::uint64_t max_fe = 0;
    std::uint64_t used_fe = 0;
    std::vector<TracePoint> trace;
    Population final_p;
    Population final_p_bar;
    double wall_seconds = 0.0;
};

// Called after initialization and after every generation; `final` is set on
// the last call. Returns metric scores to attach to the trace row.
using GenerationProbe = std::function<std::optional<QualityScores>(const EadmmState& state, bool final)>;

std::string algorithm_name(const EadmmConfig& config);

RunRecord run(const Problem& problem, const EadmmConfig& config, std::uint64_t seed,
              const GenerationProbe& probe = {});

} // namespace eadmm
