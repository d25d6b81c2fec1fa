#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <stdexcept>
#include <utility>

#include "eadmm/core.hpp"
#include "eadmm/random.hpp"

namespace eadmm {

struct SbxParams {
    double p_c = 1.0;
    double eta_c = 20.0;
};

struct PmParams {
    double p_m = -1.0;  // negative means 1/n
    double eta_m = 20.0;
};

struct DeParams {
    double cr = 0.5;
    double f = 0.5;
};

void validate(const SbxParams& p);
void validate(const PmParams& p);
void validate(const DeParams& p);

// Spread factor of simulated binary crossover for the uniform draw u.
double sbx_beta(double u, double eta_c);

// Children of one coordinate pair for a given spread factor.
std::pair<double, double> sbx_blend(double p1, double p2, double beta);

std::pair<DecisionVector, DecisionVector> sbx_crossover(std::span<const double> p1, std::span<const double> p2,
                                                        std::span<const Bounds> bounds, const SbxParams& params,
                                                        Rng& rng);

DecisionVector polynomial_mutation(std::span<const double> x, std::span<const Bounds> bounds,
                                   const PmParams& params, Rng& rng);

// DE/rand/1/bin trial vector around `base`.
DecisionVector de_variation(std::span<const double> base, std::span<const double> a, std::span<const double> b,
                            std::span<const Bounds> bounds, const DeParams& params, Rng& rng);

// Draws two indices in [0, size) with replacement and returns the one
// preferred by `better`; a uniform coin decides when neither is preferred.
template <class Better>
std::size_t binary_tournament_index(std::size_t size, Better&& better, Rng& rng) {
    if (size == 0) throw std::invalid_argument("tournament on an empty population");
    const std::size_t i = rng.index(size);
    const std::size_t j = rng.index(size);
    if (better(i, j)) return i;
    if (better(j, i)) return j;
    return rng.bernoulli(0.5) ? i : j;
}

using SolutionComparator = std::function<bool(const Solution&, const Solution&)>;

const Solution& binary_tournament(std::span<const Solution> pop, const SolutionComparator& better, Rng& rng);

} // namespace eadmm
