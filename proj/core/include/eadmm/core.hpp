#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "eadmm/random.hpp"

namespace eadmm {

using DecisionVector = std::vector<double>;
using ObjectiveVector = std::vector<double>;
// One flag per constraint: 0 satisfied, 1 violated.
using ConstraintSignal = std::vector<std::uint8_t>;

struct Bounds {
    double lower;
    double upper;
};

struct Solution {
    DecisionVector x;
    ObjectiveVector f;
    ConstraintSignal g;
    std::uint64_t eval_id = 0;
};

using Population = std::vector<Solution>;

class BudgetExhausted : public std::runtime_error {
public:
    BudgetExhausted() : std::runtime_error("function evaluation budget exhausted") {}
};

class BudgetCounter {
public:
    explicit BudgetCounter(std::uint64_t max_fe) : max_fe_(max_fe) {}

    std::uint64_t used() const noexcept { return used_; }
    std::uint64_t max_fe() const noexcept { return max_fe_; }
    std::uint64_t remaining() const noexcept { return max_fe_ - used_; }
    bool exhausted() const noexcept { return used_ >= max_fe_; }

    // Returns the index of the consumed evaluation.
    std::uint64_t charge() {
        if (exhausted()) throw BudgetExhausted{};
        return used_++;
    }

private:
    std::uint64_t used_ = 0;
    std::uint64_t max_fe_;
};

using ObjectiveMap = std::function<void(std::span<const double> x, std::span<double> f)>;
// Noiseless binary oracle; receives the objective vector of x as well.
using ConstraintOracle =
    std::function<void(std::span<const double> x, std::span<const double> f, std::span<std::uint8_t> g)>;

// A CMOP with unknown constraints: objectives are black-box reals, constraints
// are only observable as violated / satisfied.
class Problem {
public:
    Problem(std::string name, std::size_t num_objectives, std::size_t num_constraints,
            std::vector<Bounds> bounds, ObjectiveMap objectives, ConstraintOracle constraints,
            double p_noise = 0.0);

    const std::string& name() const noexcept { return name_; }
    std::size_t num_variables() const noexcept { return bounds_.size(); }
    std::size_t num_objectives() const noexcept { return m_; }
    std::size_t num_constraints() const noexcept { return l_; }
    const std::vector<Bounds>& bounds() const noexcept { return bounds_; }
    double p_noise() const noexcept { return p_noise_; }

    bool in_bounds(std::span<const double> x) const;
    void clamp(std::span<double> x) const;
    DecisionVector random_point(Rng& rng) const;

    // Assessment-only access to the oracles: neither charged to a budget nor
    // perturbed by noise. Algorithms must go through evaluate().
    ObjectiveVector objectives(std::span<const double> x) const;
    ConstraintSignal noiseless_signal(std::span<const double> x) const;
    ConstraintSignal noiseless_signal(std::span<const double> x, std::span<const double> f) const;
    bool noiseless_feasible(std::span<const double> x) const;

private:
    std::string name_;
    std::size_t m_;
    std::size_t l_;
    std::vector<Bounds> bounds_;
    ObjectiveMap objectives_;
    ConstraintOracle constraints_;
    double p_noise_;
};

// One function evaluation: objectives plus (possibly noisy) constraint flags.
// Each flag is flipped independently with probability problem.p_noise().
Solution evaluate(const Problem& problem, std::span<const double> x, BudgetCounter& budget, Rng& rng);

bool pareto_dominates(std::span<const double> a, std::span<const double> b);

inline std::size_t violated_count(const Solution& s) {
    std::size_t n = 0;
    for (auto flag : s.g) n += flag;
    return n;
}

inline bool is_feasible(const Solution& s) { return violated_count(s) == 0; }

std::size_t count_feasible(std::span<const Solution> pop);

} // namespace eadmm
