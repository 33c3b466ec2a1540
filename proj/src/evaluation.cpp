#include "tspd/evaluation.hpp"

#include <algorithm>
#include <stdexcept>

namespace tspd {

namespace {

bool admissible(RelaxMode mode, double truck_excess, double drone_excess) {
    switch (mode) {
        case RelaxMode::All:
            return true;
        case RelaxMode::Truck:
            return drone_excess <= 0.0;
        case RelaxMode::Drone:
            return truck_excess <= 0.0;
        case RelaxMode::None:
            return truck_excess <= 0.0 && drone_excess <= 0.0;
    }
    return false;
}

double wait_cost(const Instance& inst, WaitFeeConvention fees, double truck_wait, double drone_wait) {
    if (fees == WaitFeeConvention::AsWritten) {
        return inst.truck_wait_fee * drone_wait + inst.drone_wait_fee * truck_wait;
    }
    return inst.truck_wait_fee * truck_wait + inst.drone_wait_fee * drone_wait;
}

}  // namespace

std::string to_string(RelaxMode mode) {
    switch (mode) {
        case RelaxMode::All: return "all";
        case RelaxMode::Truck: return "truck";
        case RelaxMode::Drone: return "drone";
        case RelaxMode::None: return "none";
    }
    return "?";
}

std::string to_string(WaitFeeConvention fees) {
    return fees == WaitFeeConvention::AsWritten ? "as-written" : "as-named";
}

RelaxMode parse_relax(const std::string& name) {
    for (auto mode : {RelaxMode::All, RelaxMode::Truck, RelaxMode::Drone, RelaxMode::None}) {
        if (to_string(mode) == name) return mode;
    }
    throw std::invalid_argument("unknown relax mode '" + name + "'");
}

WaitFeeConvention parse_wait_fees(const std::string& name) {
    for (auto fees : {WaitFeeConvention::AsWritten, WaitFeeConvention::AsNamed}) {
        if (to_string(fees) == name) return fees;
    }
    throw std::invalid_argument("unknown wait fee convention '" + name + "'");
}

Timeline simulate_timeline(const TspDSolution& sol, const Instance& inst) {
    const auto& td = sol.truck_tour;
    if (td.size() < 2 || td.front() != 0 || td.back() != inst.depot_end()) {
        throw std::invalid_argument("truck tour must run from depot to depot copy");
    }
    TourIndex index(sol, inst.node_count());

    Timeline tl;
    const std::size_t m = td.size();
    tl.truck_arrival.assign(m, 0.0);
    tl.effective.assign(m, 0.0);
    tl.departure.assign(m, 0.0);
    tl.deliveries.assign(sol.drone_deliveries.size(), DeliveryTiming{});

    int open = -1;
    double leg = 0.0;
    for (std::size_t p = 0; p < m; ++p) {
        double arrival = 0.0;
        if (p > 0) {
            double arc = inst.truck_time(td[p - 1], td[p]);
            arrival = tl.departure[p - 1] + arc;
            if (open >= 0) leg += arc;
        }
        tl.truck_arrival[p] = arrival;
        double eff = arrival;

        if (int d = index.rendezvous_at[p]; d >= 0) {
            auto& dt = tl.deliveries[static_cast<std::size_t>(d)];
            dt.truck_at_rendezvous = arrival;
            dt.truck_leg_time = leg;
            dt.truck_wait = std::max(0.0, dt.drone_at_rendezvous - arrival);
            dt.drone_wait = std::max(0.0, arrival - dt.drone_at_rendezvous);
            eff = std::max(arrival, dt.drone_at_rendezvous) + inst.retrieve_time;
            dt.recover_truck = inst.retrieve_time + (index.launch_at[p] >= 0 ? inst.launch_time : 0.0);
            dt.truck_excess = index.launch_pos[static_cast<std::size_t>(d)] == 0
                                  ? 0.0
                                  : std::max(0.0, dt.truck_leg_time + dt.recover_truck - inst.endurance);
            dt.drone_excess =
                std::max(0.0, dt.drone_leg_time + inst.retrieve_time - inst.endurance);
            open = -1;
        }
        tl.effective[p] = eff;
        double dep = eff;

        if (int d = index.launch_at[p]; d >= 0) {
            const auto& dd = sol.drone_deliveries[static_cast<std::size_t>(d)];
            auto& dt = tl.deliveries[static_cast<std::size_t>(d)];
            dep += inst.launch_time;
            dt.launch_departure = dep;
            dt.drone_at_customer = dep + inst.drone_time(dd.launch, dd.drone);
            dt.drone_at_rendezvous = dt.drone_at_customer + inst.drone_time(dd.drone, dd.rendezvous);
            dt.drone_leg_time =
                inst.drone_time(dd.launch, dd.drone) + inst.drone_time(dd.drone, dd.rendezvous);
            open = d;
            leg = 0.0;
        }
        tl.departure[p] = dep;
    }
    tl.truck_end = tl.effective.back();
    // The drone always ends aboard the truck or rejoins it at the depot copy.
    tl.drone_end = tl.effective.back();
    return tl;
}

double operational_cost(const TspDSolution& sol, const Timeline& tl, const Instance& inst,
                        WaitFeeConvention fees) {
    double truck = 0.0;
    for (std::size_t p = 1; p < sol.truck_tour.size(); ++p) {
        truck += inst.truck_dist(sol.truck_tour[p - 1], sol.truck_tour[p]);
    }
    double drone = 0.0;
    double waiting = 0.0;
    for (std::size_t d = 0; d < sol.drone_deliveries.size(); ++d) {
        const auto& dd = sol.drone_deliveries[d];
        drone += inst.drone_dist(dd.launch, dd.drone) + inst.drone_dist(dd.drone, dd.rendezvous);
        waiting += wait_cost(inst, fees, tl.deliveries[d].truck_wait, tl.deliveries[d].drone_wait);
    }
    return inst.truck_cost * truck + inst.drone_cost * drone + waiting;
}

double operational_cost(const TspDSolution& sol, const Instance& inst, WaitFeeConvention fees) {
    return operational_cost(sol, simulate_timeline(sol, inst), inst, fees);
}

double completion_time(const TspDSolution& sol, const Instance& inst) {
    Timeline tl = simulate_timeline(sol, inst);
    return std::max(tl.truck_end, tl.drone_end);
}

Evaluation evaluate(const TspDSolution& sol, const Instance& inst, const PenaltyConfig& cfg,
                    Objective obj) {
    Timeline tl = simulate_timeline(sol, inst);
    Evaluation ev;
    ev.objective = obj == Objective::MinCost ? operational_cost(sol, tl, inst, cfg.wait_fees)
                                             : std::max(tl.truck_end, tl.drone_end);
    for (const auto& dt : tl.deliveries) {
        ev.truck_excess += dt.truck_excess;
        ev.drone_excess += dt.drone_excess;
        if (dt.truck_excess > 0.0 || dt.drone_excess > 0.0) ev.feasible = false;
        if (!admissible(cfg.relax, dt.truck_excess, dt.drone_excess)) ev.admissible = false;
        if (obj == Objective::MinCost) {
            ev.violation += dt.truck_excess * inst.truck_speed * inst.truck_cost +
                            dt.drone_excess * inst.drone_speed * inst.drone_cost;
        } else {
            ev.violation += std::max(dt.truck_excess, dt.drone_excess);
        }
    }
    return ev;
}

std::optional<double> penalized_cost(const TspDSolution& sol, const Instance& inst,
                                     const PenaltyConfig& cfg, Objective obj) {
    Evaluation ev = evaluate(sol, inst, cfg, obj);
    if (!ev.admissible) return std::nullopt;
    return ev.penalized(cfg.omega);
}

bool is_feasible(const TspDSolution& sol, const Instance& inst) {
    Timeline tl = simulate_timeline(sol, inst);
    return std::all_of(tl.deliveries.begin(), tl.deliveries.end(), [](const DeliveryTiming& dt) {
        return dt.truck_excess <= 0.0 && dt.drone_excess <= 0.0;
    });
}

double SegmentCost::drone_span(NodeId launch, NodeId drone, NodeId rendezvous, double truck_time,
                               double truck_dist, bool relaunch) const {
    const Instance& inst = *inst_;
    double flight = inst.drone_time(launch, drone) + inst.drone_time(drone, rendezvous);
    double recover = inst.retrieve_time + (relaunch ? inst.launch_time : 0.0);
    double truck_excess =
        launch == inst.depot() ? 0.0 : std::max(0.0, truck_time + recover - inst.endurance);
    double drone_excess = std::max(0.0, flight + inst.retrieve_time - inst.endurance);
    if (!admissible(cfg_.relax, truck_excess, drone_excess)) return kInadmissible;

    if (obj_ == Objective::MinTime) {
        return inst.launch_time + std::max(truck_time, flight) + inst.retrieve_time +
               cfg_.omega * std::max(truck_excess, drone_excess);
    }
    double truck_wait = std::max(0.0, flight - truck_time);
    double drone_wait = std::max(0.0, truck_time - flight);
    return inst.truck_cost * truck_dist +
           inst.drone_cost * (inst.drone_dist(launch, drone) + inst.drone_dist(drone, rendezvous)) +
           wait_cost(inst, cfg_.wait_fees, truck_wait, drone_wait) +
           cfg_.omega * (truck_excess * inst.truck_speed * inst.truck_cost +
                         drone_excess * inst.drone_speed * inst.drone_cost);
}

double segment_penalized_cost(const TspDSolution& sol, const SegmentCost& cost) {
    const Instance& inst = cost.instance();
    const auto& td = sol.truck_tour;
    TourIndex index(sol, inst.node_count());
    double total = 0.0;
    std::size_t p = 0;
    while (p + 1 < td.size()) {
        int d = index.launch_at[p];
        if (d < 0) {
            total += cost.truck_arc(td[p], td[p + 1]);
            ++p;
            continue;
        }
        auto q = static_cast<std::size_t>(index.rendezvous_pos[static_cast<std::size_t>(d)]);
        double time = 0.0;
        double dist = 0.0;
        for (std::size_t r = p; r < q; ++r) {
            time += inst.truck_time(td[r], td[r + 1]);
            dist += inst.truck_dist(td[r], td[r + 1]);
        }
        const auto& dd = sol.drone_deliveries[static_cast<std::size_t>(d)];
        total += cost.drone_span(dd.launch, dd.drone, dd.rendezvous, time, dist,
                                 index.launch_at[q] >= 0);
        p = q;
    }
    return total;
}

}  // namespace tspd
