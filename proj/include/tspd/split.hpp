#pragma once

#include "tspd/evaluation.hpp"
#include "tspd/model.hpp"

namespace tspd {

/// Decode a giant tour into the order-preserving TSP-D solution of minimum
/// penalized cost.
///
/// Each drone delivery launches at giant-tour position a, serves the customer
/// at some position m with a < m < b and rejoins at position b; the truck
/// visits every other customer of a..b in order. Runs in O(n^3).
TspDSolution split(const GiantTour& tour, const Instance& inst, const PenaltyConfig& cfg,
                   Objective obj);

}  // namespace tspd
