#include "eadmm/stats.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <numeric>
#include <stdexcept>

#include <boost/math/distributions/chi_squared.hpp>

namespace eadmm::stats {

namespace {

struct RankedDiffs {
    std::vector<double> midranks;  // aligned with the input differences
    std::vector<std::size_t> tie_sizes;
};

RankedDiffs rank_abs(std::span<const double> diffs) {
    const std::size_t n = diffs.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return std::fabs(diffs[a]) < std::fabs(diffs[b]); });
    RankedDiffs r{std::vector<double>(n), {}};
    for (std::size_t i = 0; i < n;) {
        std::size_t j = i;
        while (j + 1 < n && std::fabs(diffs[order[j + 1]]) == std::fabs(diffs[order[i]])) ++j;
        const double rank = 0.5 * static_cast<double>(i + j) + 1.0;
        for (std::size_t k = i; k <= j; ++k) r.midranks[order[k]] = rank;
        r.tie_sizes.push_back(j - i + 1);
        i = j + 1;
    }
    return r;
}

double positive_rank_sum(std::span<const double> diffs, const RankedDiffs& r) {
    double w = 0.0;
    for (std::size_t i = 0; i < diffs.size(); ++i) {
        if (diffs[i] > 0) w += r.midranks[i];
    }
    return w;
}

std::vector<double> nonzero_differences(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) throw std::invalid_argument("paired samples differ in length");
    std::vector<double> d;
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (x[i] != y[i]) d.push_back(x[i] - y[i]);
    }
    return d;
}

} // namespace

double wilcoxon_exact_p(std::span<const double> diffs) {
    const auto r = rank_abs(diffs);
    // Midranks are multiples of 1/2, so doubled ranks are integers.
    std::vector<std::size_t> doubled(diffs.size());
    std::size_t total = 0;
    for (std::size_t i = 0; i < diffs.size(); ++i) {
        doubled[i] = static_cast<std::size_t>(std::lround(2.0 * r.midranks[i]));
        total += doubled[i];
    }
    std::vector<double> ways(total + 1, 0.0);
    ways[0] = 1.0;
    for (auto v : doubled) {
        for (std::size_t s = total; s + 1 > v; --s) ways[s] += ways[s - v];
    }
    const auto observed = static_cast<std::size_t>(std::lround(2.0 * positive_rank_sum(diffs, r)));
    const double all = std::ldexp(1.0, static_cast<int>(diffs.size()));
    double lower = 0.0;
    double upper = 0.0;
    for (std::size_t s = 0; s <= total; ++s) {
        if (s <= observed) lower += ways[s];
        if (s >= observed) upper += ways[s];
    }
    return std::min(1.0, 2.0 * std::min(lower, upper) / all);
}

double wilcoxon_normal_p(std::span<const double> diffs) {
    const auto r = rank_abs(diffs);
    const double n = static_cast<double>(diffs.size());
    const double w = positive_rank_sum(diffs, r);
    const double mean = n * (n + 1.0) / 4.0;
    double var = n * (n + 1.0) * (2.0 * n + 1.0) / 24.0;
    for (auto t : r.tie_sizes) {
        const double tt = static_cast<double>(t);
        var -= (tt * tt * tt - tt) / 48.0;
    }
    if (var <= 0.0) return 1.0;
    const double z = std::max(0.0, std::fabs(w - mean) - 0.5) / std::sqrt(var);
    return std::min(1.0, std::erfc(z / std::numbers::sqrt2));
}

WilcoxonResult wilcoxon_signed_rank(std::span<const double> x, std::span<const double> y, double alpha) {
    const auto d = nonzero_differences(x, y);
    WilcoxonResult res;
    res.n_effective = d.size();
    if (d.size() < 5) return res;
    res.decidable = true;
    res.w_plus = positive_rank_sum(d, rank_abs(d));
    res.exact = d.size() <= kWilcoxonExactLimit;
    res.p = res.exact ? wilcoxon_exact_p(d) : wilcoxon_normal_p(d);
    res.significant = res.p < alpha;
    return res;
}

double a12(std::span<const double> x, std::span<const double> y) {
    if (x.empty() || y.empty()) throw std::invalid_argument("A12 needs non-empty samples");
    double score = 0.0;
    for (double a : x) {
        for (double b : y) score += a > b ? 1.0 : (a == b ? 0.5 : 0.0);
    }
    return score / (static_cast<double>(x.size()) * static_cast<double>(y.size()));
}

Effect classify_a12(double value) {
    // the slack keeps 0.56 and 0.44 in the same band despite 1 - 0.56 rounding
    constexpr double slack = 1e-12;
    const double d = value >= 0.5 ? 1.0 - value : value;
    if (d >= 0.44 - slack) return Effect::Negligible;
    if (d >= 0.36 - slack) return Effect::Small;
    if (d >= 0.29 - slack) return Effect::Medium;
    return Effect::Large;
}

std::string_view to_string(Effect e) {
    switch (e) {
    case Effect::Negligible: return "negligible";
    case Effect::Small: return "small";
    case Effect::Medium: return "medium";
    case Effect::Large: return "large";
    }
    return "?";
}

double mean(std::span<const double> values) {
    if (values.empty()) throw std::invalid_argument("mean of an empty sample");
    return std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
}

double stddev(std::span<const double> values) {
    if (values.size() < 2) return 0.0;
    const double mu = mean(values);
    double s = 0.0;
    for (double v : values) s += (v - mu) * (v - mu);
    return std::sqrt(s / static_cast<double>(values.size() - 1));
}

namespace {

double quantile(std::vector<double>& sorted, double q) {
    const double pos = q * static_cast<double>(sorted.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const auto hi = std::min(lo + 1, sorted.size() - 1);
    const double frac = pos - static_cast<double>(lo);
    if (frac == 0.0 || sorted[hi] == sorted[lo]) return sorted[lo];
    return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

} // namespace

double median(std::vector<double> values) {
    if (values.empty()) throw std::invalid_argument("median of an empty sample");
    std::sort(values.begin(), values.end());
    return quantile(values, 0.5);
}

double iqr(std::vector<double> values) {
    if (values.empty()) throw std::invalid_argument("IQR of an empty sample");
    std::sort(values.begin(), values.end());
    const double q1 = quantile(values, 0.25);
    const double q3 = quantile(values, 0.75);
    return q3 == q1 ? 0.0 : q3 - q1;
}

std::map<std::string, int> scott_knott(std::span<const NamedSample> groups, const ScottKnottOptions& options) {
    for (const auto& g : groups) {
        if (g.values.empty()) throw std::invalid_argument("Scott-Knott group '" + g.name + "' is empty");
    }
    const std::size_t k_all = groups.size();
    std::vector<double> means(k_all);
    for (std::size_t i = 0; i < k_all; ++i) means[i] = mean(groups[i].values);

    std::vector<std::size_t> order(k_all);
    std::iota(order.begin(), order.end(), 0);
    const bool minimize = options.orientation == Orientation::Minimize;
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return minimize ? means[a] < means[b] : means[a] > means[b];
    });

    // Pooled within-group variance of the observations, as in a one-way ANOVA.
    double sse = 0.0;
    double dof = 0.0;
    double obs = 0.0;
    for (std::size_t i = 0; i < k_all; ++i) {
        for (double v : groups[i].values) sse += (v - means[i]) * (v - means[i]);
        dof += static_cast<double>(groups[i].values.size()) - 1.0;
        obs += static_cast<double>(groups[i].values.size());
    }
    const double mse = dof > 0.0 ? sse / dof : 0.0;
    const double mean_var = k_all > 0 ? mse / (obs / static_cast<double>(k_all)) : 0.0;

    std::vector<std::pair<std::size_t, std::size_t>> clusters;  // [lo, hi) over `order`
    const double lambda_scale = std::numbers::pi / (2.0 * (std::numbers::pi - 2.0));

    std::function<void(std::size_t, std::size_t)> split = [&](std::size_t lo, std::size_t hi) {
        const std::size_t k = hi - lo;
        if (k < 2) {
            clusters.emplace_back(lo, hi);
            return;
        }
        double grand = 0.0;
        for (std::size_t i = lo; i < hi; ++i) grand += means[order[i]];
        grand /= static_cast<double>(k);

        double best_b = -1.0;
        std::size_t best_cut = lo + 1;
        for (std::size_t cut = lo + 1; cut < hi; ++cut) {
            double m1 = 0.0;
            double m2 = 0.0;
            for (std::size_t i = lo; i < cut; ++i) m1 += means[order[i]];
            for (std::size_t i = cut; i < hi; ++i) m2 += means[order[i]];
            const double k1 = static_cast<double>(cut - lo);
            const double k2 = static_cast<double>(hi - cut);
            m1 /= k1;
            m2 /= k2;
            const double b = k1 * (m1 - grand) * (m1 - grand) + k2 * (m2 - grand) * (m2 - grand);
            if (b > best_b) {
                best_b = b;
                best_cut = cut;
            }
        }

        double spread = 0.0;
        for (std::size_t i = lo; i < hi; ++i) spread += (means[order[i]] - grand) * (means[order[i]] - grand);
        const double sigma2 = (spread + dof * mean_var) / (static_cast<double>(k) + dof);

        bool accept = false;
        if (best_b > 0.0) {
            if (sigma2 <= 0.0) {
                accept = true;
            } else {
                const double lambda = lambda_scale * best_b / sigma2;
                const boost::math::chi_squared chi2(static_cast<double>(k) / (std::numbers::pi - 2.0));
                accept = lambda > boost::math::quantile(chi2, 1.0 - options.alpha);
            }
        }
        if (accept && options.min_effect != Effect::Negligible) {
            const auto& left = groups[order[best_cut - 1]].values;
            const auto& right = groups[order[best_cut]].values;
            accept = classify_a12(a12(left, right)) >= options.min_effect;
        }
        if (!accept) {
            clusters.emplace_back(lo, hi);
            return;
        }
        split(lo, best_cut);
        split(best_cut, hi);
    };
    if (k_all > 0) split(0, k_all);

    std::map<std::string, int> ranks;
    int rank = 0;
    for (const auto& [lo, hi] : clusters) {
        ++rank;
        for (std::size_t i = lo; i < hi; ++i) ranks[groups[order[i]].name] = rank;
    }
    return ranks;
}

} // namespace eadmm::stats
