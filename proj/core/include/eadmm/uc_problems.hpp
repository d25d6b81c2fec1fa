#pragma once

// Synthetic CMOP/UC suite: DTLZ1/2/3 objective maps wrapped with five
// binary-constraint geometries laid out along the distance to the
// unconstrained front.
//
// For every base the distance value d(x) equals the DTLZ distance function
// g(x_M): d = sum(f)/0.5 - 1 for DTLZ1 and d = |f|_2 - 1 for DTLZ2/3, so the
// unconstrained PF sits at d = 0. The feasible sets are bands in d:
//
//   Type I    [0, delta]                                  l = 1
//   Type II   [0, delta] u [c2, c2 + delta]               l = 2
//   Type III  [0, delta] u [2 delta, 3 delta]             l = 2
//   Type IV   [tau, tau + delta]                          l = 1
//   Type V    [0, delta], with [tau', tau' + delta] marked
//             by a second flag                            l = 2
//
// In the two-band types flag 0 reports "outside every band" and flag 1
// reports "outside the hull of the bands", so a point in the gap violates
// one constraint and a point beyond the hull violates two. In Type V flag 1
// is raised inside the decoy band, so the region just above it counts as
// less violated than the band itself.

#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "eadmm/core.hpp"

namespace eadmm {

enum class DtlzBase { Dtlz1, Dtlz2, Dtlz3 };
enum class UcType { I = 1, II = 2, III = 3, IV = 4, V = 5 };

inline constexpr double kDefaultNoise = 0.05;

struct UcGeometry {
    double delta = 0.05;        // band width
    double second_band = 0.2;   // c2 = 4 delta
    double tau = 0.1;           // Type IV offset of the feasible band
    double tau_prime = 0.1;     // Type V decoy band start = 2 delta

    static UcGeometry with_delta(double delta);
};

struct UcProblemSpec {
    DtlzBase base = DtlzBase::Dtlz1;
    UcType type = UcType::I;
    std::size_t m = 3;
    std::size_t n = 0;  // 0 selects the default: m + 4 (DTLZ1), m + 9 (DTLZ2/3)
    double p_noise = kDefaultNoise;
    UcGeometry geometry;

    std::size_t num_variables() const;
    std::size_t num_constraints() const;
    // Canonical registry key, e.g. "UC4-DTLZ2-m3" (noisy) or
    // "UC4-DTLZ2-m3-clean" (noise-free).
    std::string name() const;
    void validate() const;
};

std::string to_string(DtlzBase base);

// Parses a registry key; throws std::invalid_argument for unknown names.
UcProblemSpec parse_problem_name(std::string_view name);

// Every registered instance: 3 bases x 5 types x m in {2,3,5,10} x {noisy, clean}.
std::vector<UcProblemSpec> problem_registry();

ObjectiveVector dtlz_objectives(DtlzBase base, std::span<const double> x, std::size_t m);

// Distance of an objective vector from the unconstrained front.
double front_distance(DtlzBase base, std::span<const double> f);

ConstraintSignal uc_constraints(const UcProblemSpec& spec, std::span<const double> f);

// Noisy variant: each flag flips with probability spec.p_noise.
ConstraintSignal uc_constraints(const UcProblemSpec& spec, std::span<const double> f, Rng& rng);

Problem make_problem(const UcProblemSpec& spec);

// Value of d on the feasible Pareto front: tau for Type IV, 0 otherwise.
double feasible_front_level(const UcProblemSpec& spec);

// Simplex-lattice sample of the feasible PF with at most `count` points (the
// largest lattice that fits); exactly `count` for m = 2.
std::vector<ObjectiveVector> reference_front(const UcProblemSpec& spec, std::size_t count);

// Default reference-set size per objective count.
std::size_t default_reference_size(std::size_t m);

// Decision vector whose position variables are `position` and whose distance
// variables put d(x) at `level` (level >= 0). Used by tests and tooling.
DecisionVector point_at_level(const UcProblemSpec& spec, std::span<const double> position, double level);

void write_front_csv(std::ostream& os, std::span<const ObjectiveVector> front);

} // namespace eadmm
