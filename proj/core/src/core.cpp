#include "eadmm/core.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

namespace eadmm {

Problem::Problem(std::string name, std::size_t num_objectives, std::size_t num_constraints,
                 std::vector<Bounds> bounds, ObjectiveMap objectives, ConstraintOracle constraints,
                 double p_noise)
    : name_(std::move(name)),
      m_(num_objectives),
      l_(num_constraints),
      bounds_(std::move(bounds)),
      objectives_(std::move(objectives)),
      constraints_(std::move(constraints)),
      p_noise_(p_noise) {
    if (bounds_.empty()) throw std::invalid_argument("problem needs at least one variable");
    if (m_ < 2) throw std::invalid_argument("problem needs at least two objectives");
    if (l_ < 1) throw std::invalid_argument("problem needs at least one constraint");
    for (const auto& b : bounds_) {
        if (!(b.lower < b.upper)) throw std::invalid_argument("lower bound must be below upper bound");
    }
    if (!(p_noise_ >= 0.0 && p_noise_ < 1.0)) throw std::invalid_argument("p_noise must lie in [0, 1)");
    if (!objectives_ || !constraints_) throw std::invalid_argument("problem oracles must be callable");
}

bool Problem::in_bounds(std::span<const double> x) const {
    if (x.size() != bounds_.size()) return false;
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (!(x[i] >= bounds_[i].lower && x[i] <= bounds_[i].upper)) return false;
    }
    return true;
}

void Problem::clamp(std::span<double> x) const {
    for (std::size_t i = 0; i < x.size(); ++i) x[i] = std::clamp(x[i], bounds_[i].lower, bounds_[i].upper);
}

DecisionVector Problem::random_point(Rng& rng) const {
    DecisionVector x(bounds_.size());
    for (std::size_t i = 0; i < x.size(); ++i) x[i] = rng.uniform(bounds_[i].lower, bounds_[i].upper);
    return x;
}

ObjectiveVector Problem::objectives(std::span<const double> x) const {
    ObjectiveVector f(m_);
    objectives_(x, f);
    return f;
}

ConstraintSignal Problem::noiseless_signal(std::span<const double> x, std::span<const double> f) const {
    ConstraintSignal g(l_, 0);
    constraints_(x, f, g);
    return g;
}

ConstraintSignal Problem::noiseless_signal(std::span<const double> x) const {
    const auto f = objectives(x);
    return noiseless_signal(x, f);
}

bool Problem::noiseless_feasible(std::span<const double> x) const {
    const auto g = noiseless_signal(x);
    return std::all_of(g.begin(), g.end(), [](auto v) { return v == 0; });
}

Solution evaluate(const Problem& problem, std::span<const double> x, BudgetCounter& budget, Rng& rng) {
    if (!problem.in_bounds(x)) {
        throw std::domain_error(fmt::format("decision vector outside the box of {}", problem.name()));
    }
    Solution s;
    s.eval_id = budget.charge();
    s.x.assign(x.begin(), x.end());
    s.f = problem.objectives(x);
    for (double v : s.f) {
        if (!std::isfinite(v)) throw std::domain_error("objective map returned a non-finite value");
    }
    s.g = problem.noiseless_signal(x, s.f);
    if (problem.p_noise() > 0.0) {
        for (auto& flag : s.g) {
            if (rng.bernoulli(problem.p_noise())) flag ^= 1;
        }
    }
    return s;
}

bool pareto_dominates(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size()) throw std::invalid_argument("objective vectors differ in length");
    bool strictly_better = false;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] > b[i]) return false;
        if (a[i] < b[i]) strictly_better = true;
    }
    return strictly_better;
}

std::size_t count_feasible(std::span<const Solution> pop) {
    return static_cast<std::size_t>(
        std::count_if(pop.begin(), pop.end(), [](const Solution& s) { return is_feasible(s); }));
}

} // namespace eadmm
