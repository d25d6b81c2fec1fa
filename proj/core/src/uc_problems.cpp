#include "eadmm/uc_problems.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numbers>
#include <ostream>
#include <stdexcept>

#include <fmt/format.h>

#include "eadmm/backbones.hpp"

namespace eadmm {

namespace {

constexpr double kBandTolerance = 1e-9;

bool in_band(double d, double lo, double hi) { return d >= lo - kBandTolerance && d <= hi + kBandTolerance; }

std::size_t distance_vars(DtlzBase base) { return base == DtlzBase::Dtlz1 ? 5 : 10; }

double rastrigin_g(std::span<const double> xm) {
    double s = static_cast<double>(xm.size());
    for (double v : xm) {
        const double y = v - 0.5;
        s += y * y - std::cos(20.0 * std::numbers::pi * y);
    }
    return 100.0 * s;
}

double sphere_g(std::span<const double> xm) {
    double s = 0.0;
    for (double v : xm) s += (v - 0.5) * (v - 0.5);
    return s;
}

std::string_view type_token(UcType t) {
    switch (t) {
    case UcType::I: return "UC1";
    case UcType::II: return "UC2";
    case UcType::III: return "UC3";
    case UcType::IV: return "UC4";
    case UcType::V: return "UC5";
    }
    return "UC?";
}

std::size_t lattice_size(std::size_t m, std::size_t h) {
    std::size_t r = 1;
    for (std::size_t i = 1; i < m; ++i) r = r * (h + i) / i;
    return r;
}

} // namespace

UcGeometry UcGeometry::with_delta(double delta) { return {delta, 4.0 * delta, 0.1, 2.0 * delta}; }

std::string to_string(DtlzBase base) {
    switch (base) {
    case DtlzBase::Dtlz1: return "DTLZ1";
    case DtlzBase::Dtlz2: return "DTLZ2";
    case DtlzBase::Dtlz3: return "DTLZ3";
    }
    return "DTLZ?";
}

std::size_t UcProblemSpec::num_variables() const { return n != 0 ? n : m + distance_vars(base) - 1; }

std::size_t UcProblemSpec::num_constraints() const {
    return (type == UcType::I || type == UcType::IV) ? 1 : 2;
}

std::string UcProblemSpec::name() const {
    return fmt::format("{}-{}-m{}{}", type_token(type), to_string(base), m, p_noise > 0.0 ? "" : "-clean");
}

void UcProblemSpec::validate() const {
    if (m < 2) throw std::invalid_argument("UC problems need m >= 2");
    if (num_variables() < m) throw std::invalid_argument("UC problems need n >= m");
    const auto& g = geometry;
    if (!(g.delta > 0.0)) throw std::invalid_argument("band width must be positive");
    if (!(g.second_band > g.delta)) throw std::invalid_argument("second band must start above the first");
    if (!(g.tau > 0.0) || !(g.tau_prime > g.delta)) throw std::invalid_argument("band offsets must be positive");
    if (!(p_noise >= 0.0 && p_noise < 1.0)) throw std::invalid_argument("p_noise must lie in [0, 1)");
}

UcProblemSpec parse_problem_name(std::string_view name) {
    auto fail = [&]() -> UcProblemSpec {
        throw std::invalid_argument(fmt::format("unknown problem '{}'", name));
    };
    UcProblemSpec spec;
    std::string_view rest = name;
    if (rest.size() < 4 || rest.substr(0, 2) != "UC" || rest[3] != '-') return fail();
    const char t = rest[2];
    if (t < '1' || t > '5') return fail();
    spec.type = static_cast<UcType>(t - '0');
    rest.remove_prefix(4);
    if (rest.substr(0, 6) == "DTLZ1-") spec.base = DtlzBase::Dtlz1;
    else if (rest.substr(0, 6) == "DTLZ2-") spec.base = DtlzBase::Dtlz2;
    else if (rest.substr(0, 6) == "DTLZ3-") spec.base = DtlzBase::Dtlz3;
    else return fail();
    rest.remove_prefix(6);
    if (rest.empty() || rest.front() != 'm') return fail();
    rest.remove_prefix(1);
    std::size_t m = 0;
    auto [ptr, ec] = std::from_chars(rest.data(), rest.data() + rest.size(), m);
    if (ec != std::errc{} || ptr == rest.data()) return fail();
    rest.remove_prefix(static_cast<std::size_t>(ptr - rest.data()));
    if (rest == "-clean") spec.p_noise = 0.0;
    else if (!rest.empty()) return fail();
    spec.m = m;
    try {
        spec.validate();
    } catch (const std::invalid_argument&) {
        return fail();
    }
    return spec;
}

std::vector<UcProblemSpec> problem_registry() {
    std::vector<UcProblemSpec> out;
    for (double noise : {kDefaultNoise, 0.0}) {
        for (auto base : {DtlzBase::Dtlz1, DtlzBase::Dtlz2, DtlzBase::Dtlz3}) {
            for (int t = 1; t <= 5; ++t) {
                for (std::size_t m : {2, 3, 5, 10}) {
                    UcProblemSpec s;
                    s.base = base;
                    s.type = static_cast<UcType>(t);
                    s.m = m;
                    s.p_noise = noise;
                    out.push_back(s);
                }
            }
        }
    }
    return out;
}

ObjectiveVector dtlz_objectives(DtlzBase base, std::span<const double> x, std::size_t m) {
    const std::size_t n = x.size();
    if (n < m) throw std::invalid_argument("DTLZ needs at least m variables");
    const auto xm = x.subspan(m - 1);
    ObjectiveVector f(m);
    if (base == DtlzBase::Dtlz1) {
        const double g = rastrigin_g(xm);
        for (std::size_t i = 0; i < m; ++i) {
            double v = 0.5 * (1.0 + g);
            for (std::size_t j = 0; j + 1 < m - i; ++j) v *= x[j];
            if (i > 0) v *= 1.0 - x[m - 1 - i];
            f[i] = v;
        }
        return f;
    }
    const double g = base == DtlzBase::Dtlz2 ? sphere_g(xm) : rastrigin_g(xm);
    const double half_pi = 0.5 * std::numbers::pi;
    for (std::size_t i = 0; i < m; ++i) {
        double v = 1.0 + g;
        for (std::size_t j = 0; j + 1 < m - i; ++j) v *= std::cos(x[j] * half_pi);
        if (i > 0) v *= std::sin(x[m - 1 - i] * half_pi);
        f[i] = v;
    }
    return f;
}

double front_distance(DtlzBase base, std::span<const double> f) {
    if (base == DtlzBase::Dtlz1) {
        double s = 0.0;
        for (double v : f) s += v;
        return s / 0.5 - 1.0;
    }
    double s = 0.0;
    for (double v : f) s += v * v;
    return std::sqrt(s) - 1.0;
}

ConstraintSignal uc_constraints(const UcProblemSpec& spec, std::span<const double> f) {
    const double d = front_distance(spec.base, f);
    const auto& geo = spec.geometry;
    const double w = geo.delta;
    ConstraintSignal g(spec.num_constraints(), 0);
    switch (spec.type) {
    case UcType::I:
        g[0] = !in_band(d, 0.0, w);
        break;
    case UcType::II:
        g[0] = !(in_band(d, 0.0, w) || in_band(d, geo.second_band, geo.second_band + w));
        g[1] = !in_band(d, 0.0, geo.second_band + w);
        break;
    case UcType::III:
        g[0] = !(in_band(d, 0.0, w) || in_band(d, 2.0 * w, 3.0 * w));
        g[1] = !in_band(d, 0.0, 3.0 * w);
        break;
    case UcType::IV:
        g[0] = !in_band(d, geo.tau, geo.tau + w);
        break;
    case UcType::V:
        g[0] = !in_band(d, 0.0, w);
        g[1] = in_band(d, geo.tau_prime, geo.tau_prime + w);
        break;
    }
    return g;
}

ConstraintSignal uc_constraints(const UcProblemSpec& spec, std::span<const double> f, Rng& rng) {
    auto g = uc_constraints(spec, f);
    if (spec.p_noise > 0.0) {
        for (auto& flag : g) {
            if (rng.bernoulli(spec.p_noise)) flag ^= 1;
        }
    }
    return g;
}

Problem make_problem(const UcProblemSpec& spec) {
    spec.validate();
    const std::size_t n = spec.num_variables();
    const std::size_t m = spec.m;
    const DtlzBase base = spec.base;
    auto objectives = [base, m](std::span<const double> x, std::span<double> f) {
        const auto v = dtlz_objectives(base, x, m);
        std::copy(v.begin(), v.end(), f.begin());
    };
    auto constraints = [spec](std::span<const double>, std::span<const double> f, std::span<std::uint8_t> g) {
        const auto v = uc_constraints(spec, f);
        std::copy(v.begin(), v.end(), g.begin());
    };
    return Problem(spec.name(), m, spec.num_constraints(), std::vector<Bounds>(n, Bounds{0.0, 1.0}),
                   std::move(objectives), std::move(constraints), spec.p_noise);
}

double feasible_front_level(const UcProblemSpec& spec) { return spec.type == UcType::IV ? spec.geometry.tau : 0.0; }

std::vector<ObjectiveVector> reference_front(const UcProblemSpec& spec, std::size_t count) {
    const std::size_t m = spec.m;
    if (count < m) throw std::invalid_argument("reference front needs at least m points");
    std::size_t h = 1;
    while (lattice_size(m, h + 1) <= count) ++h;
    const double level = feasible_front_level(spec);
    std::vector<ObjectiveVector> front;
    for (auto& w : simplex_lattice(m, h)) {
        ObjectiveVector f(m);
        if (spec.base == DtlzBase::Dtlz1) {
            for (std::size_t i = 0; i < m; ++i) f[i] = 0.5 * (1.0 + level) * w[i];
        } else {
            double norm = 0.0;
            for (double v : w) norm += v * v;
            norm = std::sqrt(norm);
            for (std::size_t i = 0; i < m; ++i) f[i] = (1.0 + level) * w[i] / norm;
        }
        front.push_back(std::move(f));
    }
    return front;
}

std::size_t default_reference_size(std::size_t m) {
    switch (m) {
    case 2: return 500;
    case 3: return 990;   // h = 43
    case 5: return 1820;  // h = 12
    default: return 3000;
    }
}

DecisionVector point_at_level(const UcProblemSpec& spec, std::span<const double> position, double level) {
    const std::size_t n = spec.num_variables();
    if (position.size() != spec.m - 1) throw std::invalid_argument("need m - 1 position variables");
    if (level < 0.0) throw std::invalid_argument("level must be non-negative");
    DecisionVector x(n, 0.5);
    std::copy(position.begin(), position.end(), x.begin());
    const std::size_t k = n - (spec.m - 1);
    if (spec.base == DtlzBase::Dtlz2) {
        const double y = std::sqrt(level / static_cast<double>(k));
        if (y > 0.5) throw std::invalid_argument("level beyond the DTLZ2 distance range");
        for (std::size_t j = spec.m - 1; j < n; ++j) x[j] = 0.5 + y;
        return x;
    }
    // Rastrigin-type g: one variable at a time, each term 100 (y^2 + 1 - cos(20 pi y))
    // increases monotonically on y in [0, 0.05] up to 200.25.
    auto term = [](double y) { return 100.0 * (y * y + 1.0 - std::cos(20.0 * std::numbers::pi * y)); };
    double remaining = level;
    for (std::size_t j = spec.m - 1; j < n && remaining > 0.0; ++j) {
        const double target = std::min(remaining, term(0.05));
        double lo = 0.0;
        double hi = 0.05;
        for (int it = 0; it < 200; ++it) {
            const double mid = 0.5 * (lo + hi);
            (term(mid) < target ? lo : hi) = mid;
        }
        x[j] = 0.5 + 0.5 * (lo + hi);
        remaining -= term(x[j] - 0.5);
    }
    if (remaining > 1e-9) throw std::invalid_argument("level beyond the DTLZ distance range");
    return x;
}

void write_front_csv(std::ostream& os, std::span<const ObjectiveVector> front) {
    for (const auto& f : front) {
        for (std::size_t i = 0; i < f.size(); ++i) os << (i ? "," : "") << fmt::format("{}", f[i]);
        os << '\n';
    }
}

} // namespace eadmm
