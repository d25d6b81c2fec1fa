#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "eadmm/core.hpp"

namespace eadmm {

// (1/|R|) sum_r min_a |r - a|_2
double igd(std::span<const ObjectiveVector> approx, std::span<const ObjectiveVector> reference);

// (1/|R|) sum_r min_a |max(a - r, 0)|_2
double igd_plus(std::span<const ObjectiveVector> approx, std::span<const ObjectiveVector> reference);

// Exact hypervolume by dimension sweep; usable for any m but intended for
// m <= 4 (cost grows as n^(m-1) log n).
double hypervolume_exact(std::span<const ObjectiveVector> points, std::span<const double> ref);

struct MonteCarloEstimate {
    double value = 0.0;
    double std_error = 0.0;
};

inline constexpr std::size_t kHvSamples = 1'000'000;
inline constexpr std::uint64_t kHvSeed = 0x5eed'4a11'0c0f'fee1ULL;

// Uniform sampling of the box spanned by the contributing points' minimum and
// ref; std_error is box volume * sqrt(p (1 - p) / samples).
MonteCarloEstimate hypervolume_monte_carlo(std::span<const ObjectiveVector> points, std::span<const double> ref,
                                           std::size_t samples = kHvSamples, std::uint64_t seed = kHvSeed);

// Exact for m <= 4, fixed-seed Monte Carlo otherwise.
double hypervolume(std::span<const ObjectiveVector> points, std::span<const double> ref);

struct Normalization {
    ObjectiveVector ideal;
    ObjectiveVector nadir;

    static Normalization from_front(std::span<const ObjectiveVector> front);
    ObjectiveVector apply(std::span<const double> f) const;
};

inline constexpr double kHvReference = 1.1;

struct QualityScores {
    double igd;
    double igd_plus;
    double hv;
};

// Scores of the feasible members of a final population. Feasibility is the
// noiseless truth supplied by the caller. With no feasible member, IGD and
// IGD+ are +infinity and HV is 0. HV is taken on objectives normalized by the
// reference front's ideal and nadir with reference point (1.1, ..., 1.1).
QualityScores score_population(std::span<const ObjectiveVector> objectives, std::span<const bool> feasible,
                               std::span<const ObjectiveVector> reference, const Normalization& norm);

} // namespace eadmm
