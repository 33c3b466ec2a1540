#pragma once

#include <cstdint>
#include <string>

#include "tspd/genetic.hpp"
#include "tspd/io.hpp"
#include "tspd/model.hpp"
#include "tspd/random.hpp"

namespace tspd {

/// Outcome of one oracle cross-check.
struct CheckResult {
    std::string name;
    bool passed = false;
    std::string detail;
    double seconds = 0.0;
};

/// Structurally valid random solution (endurance ignored): a random customer
/// order cut into truck arcs and sorties of up to four arcs.
TspDSolution random_structural_solution(const Instance& inst, Rng& rng, double sortie_chance = 0.35);

/// split against enumerate_splits on random (instance, giant tour) pairs with
/// n <= 7, for both objectives, omega in {0.1, 1, 10} and every relax mode.
/// Values must agree exactly.
CheckResult check_split(int pairs, std::uint64_t seed);

/// Walk and event simulators on every solution of `exhaustive_instances`
/// instances with n <= 6, plus `random_solutions` random solutions at n = 20.
CheckResult check_timeline(int exhaustive_instances, int random_solutions, std::uint64_t seed);

/// Incremental move deltas against full re-evaluation: `moves` applicable
/// random moves on n in {8, 20}, both objectives, all sixteen kinds.
CheckResult check_move_deltas(long moves, std::uint64_t seed, double tolerance = 1e-9);

/// Random crossover, split, restore and move operations; every produced
/// solution and chromosome must be structurally valid.
CheckResult check_structure(long operations, std::uint64_t seed);

struct ExactComparison {
    int instances = 0;
    int matched = 0;       ///< best-of-seeds equal to the optimum (1e-9 relative)
    int within = 0;        ///< within the tolerance but not equal
    double worst_gap = 0.0;  ///< percent
    double slowest_run = 0.0;  ///< seconds
};

/// HGA best-of-`seeds` against exact_solve on generated instances with n
/// cycling through [n_min, n_max] and instance seeds first_seed, first_seed+1, ...
ExactComparison compare_with_exact(int instances, int n_min, int n_max, std::uint64_t first_seed, int seeds,
                                   Objective obj, const HgaParams& params, const GeneratorParams& gen = {});

}  // namespace tspd
