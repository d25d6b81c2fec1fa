#include "eadmm/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "eadmm/random.hpp"

namespace eadmm {

namespace {

void require_nonempty(std::span<const ObjectiveVector> approx, std::span<const ObjectiveVector> reference) {
    if (approx.empty() || reference.empty()) throw std::invalid_argument("IGD needs non-empty sets");
    if (approx.front().size() != reference.front().size()) {
        throw std::invalid_argument("IGD sets differ in objective count");
    }
}

template <class Dist>
double mean_min_distance(std::span<const ObjectiveVector> approx, std::span<const ObjectiveVector> reference,
                         Dist&& dist) {
    double total = 0.0;
    for (const auto& r : reference) {
        double best = std::numeric_limits<double>::infinity();
        for (const auto& a : approx) best = std::min(best, dist(a, r));
        total += best;
    }
    return total / static_cast<double>(reference.size());
}

using Points = std::vector<ObjectiveVector>;

double hv_sweep(Points pts, std::span<const double> ref, std::size_t dims) {
    if (pts.empty()) return 0.0;
    if (dims == 1) {
        double lo = ref[0];
        for (const auto& p : pts) lo = std::min(lo, p[0]);
        return ref[0] - lo;
    }
    if (dims == 2) {
        std::sort(pts.begin(), pts.end(), [](const auto& a, const auto& b) {
            return a[0] < b[0] || (a[0] == b[0] && a[1] < b[1]);
        });
        double area = 0.0;
        double ceiling = ref[1];
        for (const auto& p : pts) {
            if (p[1] < ceiling) {
                area += (ref[0] - p[0]) * (ceiling - p[1]);
                ceiling = p[1];
            }
        }
        return area;
    }
    const std::size_t last = dims - 1;
    std::sort(pts.begin(), pts.end(), [last](const auto& a, const auto& b) { return a[last] < b[last]; });
    double volume = 0.0;
    Points slice;
    slice.reserve(pts.size());
    for (std::size_t i = 0; i < pts.size(); ++i) {
        slice.emplace_back(pts[i].begin(), pts[i].begin() + static_cast<std::ptrdiff_t>(last));
        const double top = i + 1 < pts.size() ? pts[i + 1][last] : ref[last];
        const double height = top - pts[i][last];
        if (height > 0.0) volume += height * hv_sweep(slice, ref, last);
    }
    return volume;
}

Points contributing(std::span<const ObjectiveVector> points, std::span<const double> ref) {
    Points out;
    for (const auto& p : points) {
        if (p.size() != ref.size()) throw std::invalid_argument("point and reference differ in objective count");
        bool inside = true;
        for (std::size_t i = 0; i < p.size() && inside; ++i) inside = p[i] < ref[i];
        if (inside) out.push_back(p);
    }
    return out;
}

} // namespace

double igd(std::span<const ObjectiveVector> approx, std::span<const ObjectiveVector> reference) {
    require_nonempty(approx, reference);
    return mean_min_distance(approx, reference, [](const ObjectiveVector& a, const ObjectiveVector& r) {
        double s = 0.0;
        for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - r[i]) * (a[i] - r[i]);
        return std::sqrt(s);
    });
}

double igd_plus(std::span<const ObjectiveVector> approx, std::span<const ObjectiveVector> reference) {
    require_nonempty(approx, reference);
    return mean_min_distance(approx, reference, [](const ObjectiveVector& a, const ObjectiveVector& r) {
        double s = 0.0;
        for (std::size_t i = 0; i < a.size(); ++i) {
            const double d = std::max(a[i] - r[i], 0.0);
            s += d * d;
        }
        return std::sqrt(s);
    });
}

double hypervolume_exact(std::span<const ObjectiveVector> points, std::span<const double> ref) {
    return hv_sweep(contributing(points, ref), ref, ref.size());
}

MonteCarloEstimate hypervolume_monte_carlo(std::span<const ObjectiveVector> points, std::span<const double> ref,
                                           std::size_t samples, std::uint64_t seed) {
    const auto pts = contributing(points, ref);
    if (pts.empty() || samples == 0) return {};
    const std::size_t m = ref.size();
    ObjectiveVector lo(ref.begin(), ref.end());
    for (const auto& p : pts) {
        for (std::size_t i = 0; i < m; ++i) lo[i] = std::min(lo[i], p[i]);
    }
    double box = 1.0;
    for (std::size_t i = 0; i < m; ++i) box *= ref[i] - lo[i];

    Rng rng(seed);
    ObjectiveVector s(m);
    std::size_t hits = 0;
    for (std::size_t k = 0; k < samples; ++k) {
        for (std::size_t i = 0; i < m; ++i) s[i] = rng.uniform(lo[i], ref[i]);
        const bool covered = std::any_of(pts.begin(), pts.end(), [&](const ObjectiveVector& p) {
            for (std::size_t i = 0; i < m; ++i) {
                if (p[i] > s[i]) return false;
            }
            return true;
        });
        hits += covered;
    }
    const double p = static_cast<double>(hits) / static_cast<double>(samples);
    return {box * p, box * std::sqrt(p * (1.0 - p) / static_cast<double>(samples))};
}

double hypervolume(std::span<const ObjectiveVector> points, std::span<const double> ref) {
    if (ref.size() <= 4) return hypervolume_exact(points, ref);
    return hypervolume_monte_carlo(points, ref).value;
}

Normalization Normalization::from_front(std::span<const ObjectiveVector> front) {
    if (front.empty()) throw std::invalid_argument("normalization needs a non-empty front");
    Normalization n{front.front(), front.front()};
    for (const auto& f : front) {
        for (std::size_t i = 0; i < f.size(); ++i) {
            n.ideal[i] = std::min(n.ideal[i], f[i]);
            n.nadir[i] = std::max(n.nadir[i], f[i]);
        }
    }
    return n;
}

ObjectiveVector Normalization::apply(std::span<const double> f) const {
    ObjectiveVector out(f.size());
    for (std::size_t i = 0; i < f.size(); ++i) {
        const double range = nadir[i] - ideal[i];
        out[i] = range > 0.0 ? (f[i] - ideal[i]) / range : f[i] - ideal[i];
    }
    return out;
}

QualityScores score_population(std::span<const ObjectiveVector> objectives, std::span<const bool> feasible,
                               std::span<const ObjectiveVector> reference, const Normalization& norm) {
    std::vector<ObjectiveVector> kept;
    for (std::size_t i = 0; i < objectives.size(); ++i) {
        if (feasible[i]) kept.push_back(objectives[i]);
    }
    if (kept.empty()) return {std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity(), 0.0};
    std::vector<ObjectiveVector> scaled;
    scaled.reserve(kept.size());
    for (const auto& f : kept) scaled.push_back(norm.apply(f));
    const ObjectiveVector ref(kept.front().size(), kHvReference);
    return {igd(kept, reference), igd_plus(kept, reference), hypervolume(scaled, ref)};
}

} // namespace eadmm
