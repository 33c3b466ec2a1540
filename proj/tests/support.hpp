#pragma once

#include <algorithm>
#include <numeric>
#include <vector>

#include "tspd/model.hpp"
#include "tspd/random.hpp"

namespace tspd::testing {

/// Random Euclidean instance in [0, area]^2 with each customer drone-eligible
/// with probability `eligible`.
inline Instance random_instance(int n, std::uint64_t seed, double area = 20.0, double eligible = 0.8,
                                double endurance = 20.0) {
    Rng rng(seed);
    std::vector<Point> coords;
    std::vector<bool> flags(static_cast<std::size_t>(n) + 1, false);
    for (int i = 0; i <= n; ++i) coords.push_back({rng.uniform() * area, rng.uniform() * area});
    for (int i = 1; i <= n; ++i) flags[static_cast<std::size_t>(i)] = rng.chance(eligible);
    Instance params;
    params.endurance = endurance;
    params.truck_cost = 25.0;
    params.drone_cost = 1.0;
    params.truck_wait_fee = 1.0;
    params.drone_wait_fee = 2.0;
    return make_euclidean_instance(std::move(coords), std::move(flags), params);
}

inline GiantTour random_giant_tour(int n, Rng& rng) {
    GiantTour gt;
    gt.order.resize(static_cast<std::size_t>(n));
    std::iota(gt.order.begin(), gt.order.end(), 1);
    rng.shuffle(gt.order);
    return gt;
}

/// Structurally valid random solution: random customer order, then sorties
/// over random spans (chained launches allowed), ignoring endurance.
inline TspDSolution random_solution(const Instance& inst, Rng& rng, double sortie_chance = 0.35) {
    GiantTour gt = random_giant_tour(inst.n, rng);
    std::vector<NodeId> seq{inst.depot()};
    seq.insert(seq.end(), gt.order.begin(), gt.order.end());
    seq.push_back(inst.depot_end());
    const int last = static_cast<int>(seq.size()) - 1;

    TspDSolution sol;
    std::vector<bool> flown(seq.size(), false);
    int p = 0;
    while (p < last) {
        if (p + 2 <= last && rng.chance(sortie_chance)) {
            int len = rng.between(2, std::min(5, last - p));
            int m = rng.between(p + 1, p + len - 1);
            if (inst.is_drone_eligible(seq[m])) {
                sol.drone_deliveries.push_back({seq[p], seq[m], seq[p + len]});
                flown[static_cast<std::size_t>(m)] = true;
                p += len;
                continue;
            }
        }
        ++p;
    }
    for (std::size_t i = 0; i < seq.size(); ++i) {
        if (!flown[i]) sol.truck_tour.push_back(seq[i]);
    }
    return sol;
}

}  // namespace tspd::testing
