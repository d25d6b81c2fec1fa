#include "eadmm/variation.hpp"

#include <algorithm>
#include <cmath>

namespace eadmm {

namespace {
constexpr double kEps = 1e-14;
}

void validate(const SbxParams& p) {
    if (!(p.p_c >= 0.0 && p.p_c <= 1.0)) throw std::invalid_argument("SBX p_c must lie in [0, 1]");
    if (!(p.eta_c > 0.0)) throw std::invalid_argument("SBX eta_c must be positive");
}

void validate(const PmParams& p) {
    if (p.p_m > 1.0) throw std::invalid_argument("PM p_m must lie in [0, 1]");
    if (!(p.eta_m > 0.0)) throw std::invalid_argument("PM eta_m must be positive");
}

void validate(const DeParams& p) {
    if (!(p.cr >= 0.0 && p.cr <= 1.0)) throw std::invalid_argument("DE CR must lie in [0, 1]");
    if (!(p.f > 0.0 && p.f <= 2.0)) throw std::invalid_argument("DE F must lie in (0, 2]");
}

double sbx_beta(double u, double eta_c) {
    const double e = 1.0 / (eta_c + 1.0);
    if (u <= 0.5) return std::pow(2.0 * u, e);
    return std::pow(1.0 / (2.0 * (1.0 - u)), e);
}

std::pair<double, double> sbx_blend(double p1, double p2, double beta) {
    return {0.5 * ((1.0 + beta) * p1 + (1.0 - beta) * p2), 0.5 * ((1.0 - beta) * p1 + (1.0 + beta) * p2)};
}

std::pair<DecisionVector, DecisionVector> sbx_crossover(std::span<const double> p1, std::span<const double> p2,
                                                        std::span<const Bounds> bounds, const SbxParams& params,
                                                        Rng& rng) {
    DecisionVector c1(p1.begin(), p1.end());
    DecisionVector c2(p2.begin(), p2.end());
    if (!rng.bernoulli(params.p_c)) return {std::move(c1), std::move(c2)};

    for (std::size_t i = 0; i < c1.size(); ++i) {
        if (!rng.bernoulli(0.5) || std::fabs(p1[i] - p2[i]) <= kEps) continue;
        auto [a, b] = sbx_blend(p1[i], p2[i], sbx_beta(rng.uniform(), params.eta_c));
        if (rng.bernoulli(0.5)) std::swap(a, b);
        c1[i] = std::clamp(a, bounds[i].lower, bounds[i].upper);
        c2[i] = std::clamp(b, bounds[i].lower, bounds[i].upper);
    }
    return {std::move(c1), std::move(c2)};
}

DecisionVector polynomial_mutation(std::span<const double> x, std::span<const Bounds> bounds,
                                   const PmParams& params, Rng& rng) {
    DecisionVector y(x.begin(), x.end());
    const double p_m = params.p_m < 0.0 ? 1.0 / static_cast<double>(y.size()) : params.p_m;
    const double pow_e = 1.0 / (params.eta_m + 1.0);
    for (std::size_t i = 0; i < y.size(); ++i) {
        if (!rng.bernoulli(p_m)) continue;
        const double lo = bounds[i].lower;
        const double hi = bounds[i].upper;
        const double width = hi - lo;
        const double d1 = (y[i] - lo) / width;
        const double d2 = (hi - y[i]) / width;
        const double u = rng.uniform();
        double dq;
        if (u < 0.5) {
            const double v = 2.0 * u + (1.0 - 2.0 * u) * std::pow(1.0 - d1, params.eta_m + 1.0);
            dq = std::pow(v, pow_e) - 1.0;
        } else {
            const double v = 2.0 * (1.0 - u) + 2.0 * (u - 0.5) * std::pow(1.0 - d2, params.eta_m + 1.0);
            dq = 1.0 - std::pow(v, pow_e);
        }
        y[i] = std::clamp(y[i] + dq * width, lo, hi);
    }
    return y;
}

DecisionVector de_variation(std::span<const double> base, std::span<const double> a, std::span<const double> b,
                            std::span<const Bounds> bounds, const DeParams& params, Rng& rng) {
    if (a.size() != base.size() || b.size() != base.size()) {
        throw std::invalid_argument("DE vectors differ in length");
    }
    DecisionVector trial(base.begin(), base.end());
    const std::size_t forced = rng.index(trial.size());
    for (std::size_t j = 0; j < trial.size(); ++j) {
        if (j == forced || rng.bernoulli(params.cr)) {
            trial[j] = std::clamp(base[j] + params.f * (a[j] - b[j]), bounds[j].lower, bounds[j].upper);
        }
    }
    return trial;
}

const Solution& binary_tournament(std::span<const Solution> pop, const SolutionComparator& better, Rng& rng) {
    const auto k = binary_tournament_index(
        pop.size(), [&](std::size_t i, std::size_t j) { return better(pop[i], pop[j]); }, rng);
    return pop[k];
}

} // namespace eadmm
