#pragma once

#include <string>
#include <vector>

#include "tspd/model.hpp"
#include "tspd/random.hpp"

namespace tspd {

enum class CrossoverKind { DX, OX, PMX, OBX, PBX };

std::string to_string(CrossoverKind kind);
CrossoverKind parse_crossover(const std::string& name);

/// Drone-aware crossover. Copies a random cut of parent 1's truck tour (or of
/// its drone nodes, ordered by launch position) into the child at the nodes'
/// parent-1 positions, then fills the remaining positions left to right in
/// parent-2 order. With fewer than two drone deliveries the drone branch
/// falls back to the truck branch.
GiantTour crossover_dx(const GiantTour& p1, const GiantTour& p2, const TspDSolution& sol1, Rng& rng);

GiantTour crossover_classical(CrossoverKind kind, const GiantTour& p1, const GiantTour& p2, Rng& rng);

GiantTour crossover(CrossoverKind kind, const GiantTour& p1, const GiantTour& p2,
                    const TspDSolution& sol1, Rng& rng);

// Deterministic cores, exposed for testing. Cut bounds are inclusive 0-based
// giant-tour indices.
GiantTour keep_and_fill(const GiantTour& p1, const GiantTour& p2, const std::vector<NodeId>& kept);
GiantTour order_crossover(const GiantTour& p1, const GiantTour& p2, int first, int last);
GiantTour partially_mapped_crossover(const GiantTour& p1, const GiantTour& p2, int first, int last);
GiantTour order_based_crossover(const GiantTour& p1, const GiantTour& p2,
                                const std::vector<bool>& selected);
GiantTour position_based_crossover(const GiantTour& p1, const GiantTour& p2,
                                   const std::vector<bool>& selected);

}  // namespace tspd
