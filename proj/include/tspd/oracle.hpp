#pragma once

#include <cstddef>
#include <stdexcept>
#include <vector>

#include "tspd/evaluation.hpp"
#include "tspd/model.hpp"

namespace tspd {

inline constexpr int kExactSolveMaxCustomers = 8;
inline constexpr int kEnumerateSplitsMaxCustomers = 7;

class SizeGuardError : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

struct ExactResult {
    TspDSolution solution;
    double value = 0.0;
    std::size_t leaves = 0;  ///< complete solutions evaluated
};

/// Optimal feasible solution by exhaustive search over every truck tour and
/// every drone assignment, with branch-and-bound pruning on partial cost.
/// Only the wait-fee convention of `cfg` is used; infeasible solutions are
/// rejected. Ties go to the lexicographically smaller truck tour, then
/// delivery list. Throws SizeGuardError for n > 8.
ExactResult exact_solve(const Instance& inst, Objective obj, const PenaltyConfig& cfg = {});

struct Labeling {
    TspDSolution solution;
    double phi = 0.0;
};

/// Every order-preserving decoding of a giant tour that the relax mode
/// admits, with its penalized cost. Throws SizeGuardError for n > 7.
std::vector<Labeling> enumerate_splits(const GiantTour& tour, const Instance& inst,
                                       const PenaltyConfig& cfg, Objective obj);

/// Discrete-event simulation of both vehicles; an independent
/// implementation of simulate_timeline with identical arithmetic.
Timeline simulate_events(const TspDSolution& sol, const Instance& inst);

}  // namespace tspd
