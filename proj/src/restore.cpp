#include "tspd/restore.hpp"

#include <algorithm>
#include <stdexcept>

#include "tspd/random.hpp"

namespace tspd {

GiantTour restore(const TspDSolution& sol, std::uint64_t seed) {
    Rng rng(seed);
    std::vector<NodeId> seq = sol.truck_tour;

    std::vector<std::pair<std::ptrdiff_t, const DroneDelivery*>> order;
    for (const auto& dd : sol.drone_deliveries) {
        auto it = std::find(sol.truck_tour.begin(), sol.truck_tour.end(), dd.launch);
        if (it == sol.truck_tour.end()) throw std::invalid_argument("restore: launch node not on tour");
        order.emplace_back(it - sol.truck_tour.begin(), &dd);
    }
    std::stable_sort(order.begin(), order.end(),
                     [](const auto& a, const auto& b) { return a.first < b.first; });

    for (const auto& [launch_pos, dd] : order) {
        auto launch = std::find(seq.begin(), seq.end(), dd->launch);
        auto rendezvous = std::find(launch, seq.end(), dd->rendezvous);
        if (rendezvous == seq.end()) throw std::invalid_argument("restore: rendezvous not after launch");
        // Slots launch+1 .. rendezvous, inserting before the element at the slot.
        auto slots = static_cast<std::size_t>(rendezvous - launch);
        auto slot = (launch - seq.begin()) + 1 + static_cast<std::ptrdiff_t>(rng.below(slots));
        seq.insert(seq.begin() + slot, dd->drone);
    }

    GiantTour tour;
    tour.order.assign(seq.begin() + 1, seq.end() - 1);
    return tour;
}

}  // namespace tspd
