#pragma once

// Selection rules for unknown (binary-signal) constraints. None of them looks
// at violation magnitudes; only the number of violated flags is used.

#include <cstddef>
#include <span>

#include "eadmm/backbones.hpp"
#include "eadmm/core.hpp"

namespace eadmm {

// a constraint-dominates b when
//   1) a is feasible and b is not;
//   2) both are infeasible and a violates fewer constraints;
//   3) both are infeasible, violate equally many, and a Pareto-dominates b;
//   4) both are feasible and a Pareto-dominates b.
bool constraint_dominates_uc(const Solution& a, const Solution& b);

Population nsga2_uc_select(std::span<const Solution> pool, std::size_t n);

// Environmental selection of IBEA restricted to feasible solutions. When no
// offspring is feasible the parents survive unchanged. When fewer than n
// feasible solutions exist, the remaining slots go to infeasible members
// ordered by violated_count, ties by IBEA fitness within the infeasible set.
Population ibea_uc_select(std::span<const Solution> parents, std::span<const Solution> offspring, std::size_t n,
                          double kappa = kIbeaKappa);

// MOEA/D replacement rule with the same four-case structure, comparing
// Tchebycheff values instead of Pareto dominance.
bool moead_uc_update(const Solution& child, const Solution& parent, std::span<const double> w,
                     std::span<const double> z_star);

} // namespace eadmm
