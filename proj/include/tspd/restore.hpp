#pragma once

#include <cstdint>

#include "tspd/model.hpp"

namespace tspd {

/// Re-encode a solution as a giant tour: the truck tour without depots, with
/// each drone node inserted at a uniformly random slot strictly between its
/// launch and rendezvous nodes. Deliveries are processed in launch order.
GiantTour restore(const TspDSolution& sol, std::uint64_t seed);

}  // namespace tspd
