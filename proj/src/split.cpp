#include "tspd/split.hpp"

#include <algorithm>
#include <stdexcept>
#include <vector>

namespace tspd {

namespace {

struct Label {
    double cost = kInadmissible;
    int drones = 0;
    // Back pointer: previous state and the segment that reached this one.
    enum class From { None, Truck, Drone, Relaunch } from = From::None;
    int launch = -1;
    int drone = -1;
};

bool better(double cost, int drones, const Label& incumbent) {
    return cost < incumbent.cost || (cost == incumbent.cost && drones < incumbent.drones);
}

const Label& best_of(const Label& x, const Label& y) { return better(y.cost, y.drones, x) ? y : x; }

}  // namespace

TspDSolution split(const GiantTour& tour, const Instance& inst, const PenaltyConfig& cfg,
                   Objective obj) {
    if (!is_permutation_of_customers(tour, inst.n)) {
        throw std::invalid_argument("split: giant tour is not a permutation of the customers");
    }
    const int n = inst.n;
    const int last = n + 1;
    std::vector<NodeId> seq;
    seq.reserve(static_cast<std::size_t>(n) + 2);
    seq.push_back(inst.depot());
    seq.insert(seq.end(), tour.order.begin(), tour.order.end());
    seq.push_back(inst.depot_end());

    auto node = [&](int pos) { return seq[static_cast<std::size_t>(pos)]; };
    std::vector<double> time_prefix(seq.size(), 0.0);
    std::vector<double> dist_prefix(seq.size(), 0.0);
    for (int p = 1; p <= last; ++p) {
        time_prefix[p] = time_prefix[p - 1] + inst.truck_time(node(p - 1), node(p));
        dist_prefix[p] = dist_prefix[p - 1] + inst.truck_dist(node(p - 1), node(p));
    }

    SegmentCost cost(inst, cfg, obj);
    // Best prefix ending at position b with the last segment being
    //   truck_end: a truck arc (or the start),
    //   drone_end: a drone span retrieved with s_R only,
    //   relaunch_end: a drone span whose rendezvous relaunches the next span.
    std::vector<Label> truck_end(seq.size()), drone_end(seq.size()), relaunch_end(seq.size());
    truck_end[0].cost = 0.0;

    for (int b = 1; b <= last; ++b) {
        {
            const Label& prev = best_of(truck_end[b - 1], drone_end[b - 1]);
            if (prev.cost < kInadmissible) {
                Label& cur = truck_end[b];
                cur.cost = prev.cost + cost.truck_arc(node(b - 1), node(b));
                cur.drones = prev.drones;
                cur.from = &prev == &truck_end[b - 1] ? Label::From::Truck : Label::From::Drone;
            }
        }
        for (int a = 0; a + 2 <= b; ++a) {
            const Label& start = best_of(truck_end[a], relaunch_end[a]);
            if (!(start.cost < kInadmissible)) continue;
            if (a == 0 && b == last && last == 2) continue;  // empty truck tour
            Label::From origin = &start == &truck_end[a] ? Label::From::Truck : Label::From::Relaunch;
            double span_time = time_prefix[b] - time_prefix[a];
            double span_dist = dist_prefix[b] - dist_prefix[a];
            for (int m = a + 1; m < b; ++m) {
                NodeId j = node(m);
                if (!inst.is_drone_eligible(j)) continue;
                NodeId before = node(m - 1);
                NodeId after = node(m + 1);
                double t = span_time - inst.truck_time(before, j) - inst.truck_time(j, after) +
                           inst.truck_time(before, after);
                double d = span_dist - inst.truck_dist(before, j) - inst.truck_dist(j, after) +
                           inst.truck_dist(before, after);
                auto consider = [&](Label& target, bool relaunch) {
                    double c = cost.drone_span(node(a), j, node(b), t, d, relaunch);
                    if (!(c < kInadmissible)) return;
                    double total = start.cost + c;
                    int drones = start.drones + 1;
                    if (better(total, drones, target)) {
                        target.cost = total;
                        target.drones = drones;
                        target.from = origin;
                        target.launch = a;
                        target.drone = m;
                    }
                };
                consider(drone_end[b], false);
                if (b < last) consider(relaunch_end[b], true);
            }
        }
    }

    // Walk the back pointers from the end.
    std::vector<bool> truck_pos(seq.size(), true);
    std::vector<DroneDelivery> deliveries;
    const Label* cur = &best_of(truck_end[last], drone_end[last]);
    int b = last;
    bool in_truck_state = cur == &truck_end[last];
    while (b > 0) {
        if (in_truck_state) {
            Label::From f = cur->from;
            --b;
            if (f == Label::From::Truck) {
                cur = &truck_end[b];
                in_truck_state = true;
            } else {
                cur = &drone_end[b];
                in_truck_state = false;
            }
            continue;
        }
        int a = cur->launch;
        int m = cur->drone;
        truck_pos[static_cast<std::size_t>(m)] = false;
        deliveries.push_back({node(a), node(m), node(b)});
        Label::From f = cur->from;
        b = a;
        if (f == Label::From::Truck) {
            cur = &truck_end[b];
            in_truck_state = true;
        } else {
            cur = &relaunch_end[b];
            in_truck_state = false;
        }
    }
    std::reverse(deliveries.begin(), deliveries.end());

    TspDSolution sol;
    for (std::size_t p = 0; p < seq.size(); ++p) {
        if (truck_pos[p]) sol.truck_tour.push_back(seq[p]);
    }
    sol.drone_deliveries = std::move(deliveries);
    return sol;
}

}  // namespace tspd
