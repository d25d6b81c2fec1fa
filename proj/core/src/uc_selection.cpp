#include "eadmm/uc_selection.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace eadmm {

bool constraint_dominates_uc(const Solution& a, const Solution& b) {
    const auto va = violated_count(a);
    const auto vb = violated_count(b);
    if (va == 0 && vb != 0) return true;
    if (va != 0 && vb == 0) return false;
    if (va != vb) return va < vb;
    return pareto_dominates(a.f, b.f);
}

Population nsga2_uc_select(std::span<const Solution> pool, std::size_t n) {
    return nsga2_select(pool, n, constraint_dominates_uc);
}

Population ibea_uc_select(std::span<const Solution> parents, std::span<const Solution> offspring, std::size_t n,
                          double kappa) {
    if (parents.size() != n) throw std::invalid_argument("IBEA selection expects exactly n parents");
    const bool any_feasible_child =
        std::any_of(offspring.begin(), offspring.end(), [](const Solution& s) { return is_feasible(s); });
    if (!any_feasible_child) return Population(parents.begin(), parents.end());

    Population feasible;
    Population infeasible;
    for (auto part : {parents, offspring}) {
        for (const auto& s : part) (is_feasible(s) ? feasible : infeasible).push_back(s);
    }
    if (feasible.size() >= n) return ibea_select(feasible, n, kappa);

    const auto fit = ibea_fitness(infeasible, kappa);
    std::vector<std::size_t> order(infeasible.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        const auto va = violated_count(infeasible[a]);
        const auto vb = violated_count(infeasible[b]);
        if (va != vb) return va < vb;
        return fit[a] > fit[b];
    });
    Population out = std::move(feasible);
    for (std::size_t k = 0; out.size() < n; ++k) out.push_back(infeasible[order[k]]);
    return out;
}

bool moead_uc_update(const Solution& child, const Solution& parent, std::span<const double> w,
                     std::span<const double> z_star) {
    const auto vc = violated_count(child);
    const auto vp = violated_count(parent);
    if (vc == 0 && vp != 0) return true;
    if (vc != 0 && vp == 0) return false;
    if (vc != vp) return vc < vp;
    return tchebycheff(child.f, w, z_star) <= tchebycheff(parent.f, w, z_star);
}

} // namespace eadmm
