#pragma once

#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace eadmm::stats {

struct WilcoxonResult {
    bool decidable = false;  // false when fewer than 5 nonzero differences remain
    double p = 1.0;
    bool significant = false;
    double w_plus = 0.0;     // sum of midranks of positive differences
    std::size_t n_effective = 0;
    bool exact = false;
};

inline constexpr std::size_t kWilcoxonExactLimit = 25;

// Two-sided signed-rank test on paired samples. Zero differences are dropped,
// ties get midranks; exact null distribution up to 25 nonzero differences,
// normal approximation with tie and continuity correction beyond.
WilcoxonResult wilcoxon_signed_rank(std::span<const double> x, std::span<const double> y, double alpha = 0.05);

// Both branches on the nonzero differences directly; exposed for
// cross-checking at the switchover.
double wilcoxon_exact_p(std::span<const double> diffs);
double wilcoxon_normal_p(std::span<const double> diffs);

// Vargha-Delaney A12 = P(X > Y) + 0.5 P(X = Y).
double a12(std::span<const double> x, std::span<const double> y);

enum class Effect { Negligible, Small, Medium, Large };

// Bands on the distance from 0.5 (mirrored): >= 0.44 negligible,
// [0.36, 0.44) small, [0.29, 0.36) medium, < 0.29 large.
Effect classify_a12(double a12_value);

std::string_view to_string(Effect e);

enum class Orientation { Minimize, Maximize };

struct NamedSample {
    std::string name;
    std::vector<double> values;
};

struct ScottKnottOptions {
    double alpha = 0.05;
    Orientation orientation = Orientation::Minimize;
    // A split is also required to separate boundary groups by at least this
    // effect size; Negligible disables the gate.
    Effect min_effect = Effect::Medium;
};

// Ranks 1..K; 1 is the best cluster under the requested orientation.
std::map<std::string, int> scott_knott(std::span<const NamedSample> groups, const ScottKnottOptions& options = {});

double median(std::vector<double> values);
// Interquartile range with linear interpolation between order statistics;
// 0 when both quartiles coincide, including both infinite.
double iqr(std::vector<double> values);
double mean(std::span<const double> values);
double stddev(std::span<const double> values);

} // namespace eadmm::stats
