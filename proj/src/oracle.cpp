#include "tspd/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <string>
#include <tuple>

namespace tspd {

namespace {

constexpr double kTie = 1e-9;

bool lexicographically_less(const TspDSolution& a, const TspDSolution& b) {
    if (a.truck_tour != b.truck_tour) return a.truck_tour < b.truck_tour;
    auto key = [](const DroneDelivery& d) { return std::tuple(d.launch, d.drone, d.rendezvous); };
    return std::lexicographical_compare(a.drone_deliveries.begin(), a.drone_deliveries.end(),
                                        b.drone_deliveries.begin(), b.drone_deliveries.end(),
                                        [&](const auto& x, const auto& y) { return key(x) < key(y); });
}

class ExactSearch {
  public:
    ExactSearch(const Instance& inst, Objective obj, const PenaltyConfig& cfg)
        : inst_(inst), obj_(obj), cfg_(cfg), strict_(inst, strict_config(cfg), obj) {}

    ExactResult run() {
        seed_with_nearest_neighbor();
        tour_.push_back(inst_.depot());
        extend(0.0);
        return best_;
    }

  private:
    static PenaltyConfig strict_config(PenaltyConfig cfg) {
        cfg.relax = RelaxMode::None;
        return cfg;
    }

    bool all_visited() const { return visited_count_ == inst_.n; }

    void visit(NodeId v) {
        visited_[static_cast<std::size_t>(v)] = true;
        ++visited_count_;
    }
    void unvisit(NodeId v) {
        visited_[static_cast<std::size_t>(v)] = false;
        --visited_count_;
    }
    bool is_visited(NodeId v) const { return visited_[static_cast<std::size_t>(v)]; }

    bool hopeless(double partial) const { return partial > best_.value + kTie * std::max(1.0, best_.value); }

    void consider(const TspDSolution& sol) {
        ++best_.leaves;
        Evaluation ev = evaluate(sol, inst_, strict_config(cfg_), obj_);
        if (!ev.feasible) return;
        double v = ev.objective;
        double tol = kTie * std::max(1.0, std::abs(best_.value));
        if (!found_ || v < best_.value - tol ||
            (v <= best_.value + tol && lexicographically_less(sol, best_.solution))) {
            if (!found_ || v < best_.value) best_.value = v;
            best_.solution = sol;
            found_ = true;
        }
    }

    // A truck-only nearest-neighbor tour gives a finite bound from the start.
    void seed_with_nearest_neighbor() {
        visited_.assign(static_cast<std::size_t>(inst_.node_count()), false);
        TspDSolution sol;
        sol.truck_tour.push_back(inst_.depot());
        std::vector<bool> used(static_cast<std::size_t>(inst_.node_count()), false);
        for (int step = 0; step < inst_.n; ++step) {
            NodeId from = sol.truck_tour.back();
            NodeId next = -1;
            for (NodeId v = 1; v <= inst_.n; ++v) {
                if (used[static_cast<std::size_t>(v)]) continue;
                if (next < 0 || strict_.truck_arc(from, v) < strict_.truck_arc(from, next)) next = v;
            }
            used[static_cast<std::size_t>(next)] = true;
            sol.truck_tour.push_back(next);
        }
        sol.truck_tour.push_back(inst_.depot_end());
        consider(sol);
        best_.leaves = 0;
    }

    void extend(double partial) {
        if (hopeless(partial)) return;
        NodeId u = tour_.back();
        if (all_visited()) {
            tour_.push_back(inst_.depot_end());
            consider(TspDSolution{tour_, deliveries_});
            tour_.pop_back();
            return;
        }
        for (NodeId v = 1; v <= inst_.n; ++v) {
            if (is_visited(v)) continue;
            visit(v);
            tour_.push_back(v);
            extend(partial + strict_.truck_arc(u, v));
            tour_.pop_back();
            unvisit(v);
        }
        for (NodeId j = 1; j <= inst_.n; ++j) {
            if (is_visited(j) || !inst_.is_drone_eligible(j)) continue;
            if (inst_.drone_time(u, j) + inst_.retrieve_time > inst_.endurance) continue;
            visit(j);
            span(partial, u, j, 0.0, 0.0);
            unvisit(j);
        }
    }

    // Grows the truck path of a sortie launched at u serving j.
    void span(double partial, NodeId launch, NodeId j, double time, double dist) {
        NodeId from = tour_.back();
        auto close_at = [&](NodeId k, double t, double d) {
            double c = strict_.drone_span(launch, j, k, t, d, false);
            if (!(c < kInadmissible) || (k == inst_.depot_end() && tour_.size() == 2)) return;
            deliveries_.push_back({launch, j, k});
            if (k == inst_.depot_end()) {
                consider(TspDSolution{tour_, deliveries_});
            } else {
                extend(partial + c);
            }
            deliveries_.pop_back();
        };
        if (all_visited()) {
            NodeId k = inst_.depot_end();
            tour_.push_back(k);
            close_at(k, time + inst_.truck_time(from, k), dist + inst_.truck_dist(from, k));
            tour_.pop_back();
            return;
        }
        for (NodeId v = 1; v <= inst_.n; ++v) {
            if (is_visited(v)) continue;
            double t = time + inst_.truck_time(from, v);
            double d = dist + inst_.truck_dist(from, v);
            bool truck_bounded = launch != inst_.depot();
            if (truck_bounded && t + inst_.retrieve_time > inst_.endurance) continue;
            double floor = obj_ == Objective::MinCost ? inst_.truck_cost * d : t;
            if (hopeless(partial + floor)) continue;
            visit(v);
            tour_.push_back(v);
            close_at(v, t, d);
            span(partial, launch, j, t, d);
            tour_.pop_back();
            unvisit(v);
        }
    }

    const Instance& inst_;
    Objective obj_;
    PenaltyConfig cfg_;
    SegmentCost strict_;
    std::vector<NodeId> tour_;
    std::vector<DroneDelivery> deliveries_;
    std::vector<bool> visited_;
    int visited_count_ = 0;
    bool found_ = false;
    ExactResult best_{{}, std::numeric_limits<double>::infinity(), 0};
};

}  // namespace

ExactResult exact_solve(const Instance& inst, Objective obj, const PenaltyConfig& cfg) {
    if (inst.n > kExactSolveMaxCustomers) {
        throw SizeGuardError("exact_solve is limited to n <= " + std::to_string(kExactSolveMaxCustomers) +
                             " customers (got " + std::to_string(inst.n) + ")");
    }
    return ExactSearch(inst, obj, cfg).run();
}

std::vector<Labeling> enumerate_splits(const GiantTour& tour, const Instance& inst,
                                       const PenaltyConfig& cfg, Objective obj) {
    if (inst.n > kEnumerateSplitsMaxCustomers) {
        throw SizeGuardError("enumerate_splits is limited to n <= " +
                             std::to_string(kEnumerateSplitsMaxCustomers) + " customers (got " +
                             std::to_string(inst.n) + ")");
    }
    if (!is_permutation_of_customers(tour, inst.n)) {
        throw std::invalid_argument("enumerate_splits: giant tour is not a permutation of the customers");
    }
    std::vector<NodeId> seq{inst.depot()};
    seq.insert(seq.end(), tour.order.begin(), tour.order.end());
    seq.push_back(inst.depot_end());
    const int last = static_cast<int>(seq.size()) - 1;

    std::vector<Labeling> out;
    TspDSolution partial;
    auto recurse = [&](auto&& self, int p) -> void {
        if (p == last) {
            partial.truck_tour.push_back(seq[static_cast<std::size_t>(last)]);
            if (auto phi = penalized_cost(partial, inst, cfg, obj)) out.push_back({partial, *phi});
            partial.truck_tour.pop_back();
            return;
        }
        partial.truck_tour.push_back(seq[static_cast<std::size_t>(p)]);
        self(self, p + 1);
        for (int b = p + 2; b <= last; ++b) {
            if (p == 0 && b == last && last == 2) continue;
            for (int m = p + 1; m < b; ++m) {
                NodeId j = seq[static_cast<std::size_t>(m)];
                if (!inst.is_drone_eligible(j)) continue;
                partial.drone_deliveries.push_back({seq[static_cast<std::size_t>(p)], j,
                                                    seq[static_cast<std::size_t>(b)]});
                std::size_t mark = partial.truck_tour.size();
                for (int q = p + 1; q < b; ++q) {
                    if (q != m) partial.truck_tour.push_back(seq[static_cast<std::size_t>(q)]);
                }
                self(self, b);
                partial.truck_tour.resize(mark);
                partial.drone_deliveries.pop_back();
            }
        }
        partial.truck_tour.pop_back();
    };
    recurse(recurse, 0);
    return out;
}

Timeline simulate_events(const TspDSolution& sol, const Instance& inst) {
    const auto& td = sol.truck_tour;
    if (td.size() < 2 || td.front() != inst.depot() || td.back() != inst.depot_end()) {
        throw std::invalid_argument("truck tour must run from depot to depot copy");
    }
    const std::size_t m = td.size();
    std::vector<int> pos(static_cast<std::size_t>(inst.node_count()), -1);
    for (std::size_t p = 0; p < m; ++p) pos[static_cast<std::size_t>(td[p])] = static_cast<int>(p);
    std::vector<int> launches(m, -1);
    std::vector<int> rejoins(m, -1);
    for (std::size_t d = 0; d < sol.drone_deliveries.size(); ++d) {
        const auto& dd = sol.drone_deliveries[d];
        int pi = pos[static_cast<std::size_t>(dd.launch)];
        int pk = pos[static_cast<std::size_t>(dd.rendezvous)];
        if (pi < 0 || pk <= pi) throw std::invalid_argument("delivery endpoints out of order");
        launches[static_cast<std::size_t>(pi)] = static_cast<int>(d);
        rejoins[static_cast<std::size_t>(pk)] = static_cast<int>(d);
    }

    enum class Kind { TruckArrives, DroneAtCustomer, DroneAtRendezvous };
    struct Event {
        double time;
        long order;
        Kind kind;
        int target;  // position for the truck, delivery index for the drone
        bool operator>(const Event& o) const { return std::tie(time, order) > std::tie(o.time, o.order); }
    };
    std::priority_queue<Event, std::vector<Event>, std::greater<>> events;
    long order = 0;

    Timeline tl;
    tl.truck_arrival.assign(m, 0.0);
    tl.effective.assign(m, 0.0);
    tl.departure.assign(m, 0.0);
    tl.deliveries.assign(sol.drone_deliveries.size(), DeliveryTiming{});
    std::vector<bool> truck_waiting(m, false);
    std::vector<bool> drone_back(sol.drone_deliveries.size(), false);
    std::vector<double> leg_start(sol.drone_deliveries.size(), 0.0);
    int airborne = -1;

    auto depart = [&](std::size_t p, double ready) {
        tl.effective[p] = ready;
        double dep = ready;
        if (int d = launches[p]; d >= 0) {
            const auto& dd = sol.drone_deliveries[static_cast<std::size_t>(d)];
            auto& dt = tl.deliveries[static_cast<std::size_t>(d)];
            dep += inst.launch_time;
            dt.launch_departure = dep;
            dt.drone_leg_time = inst.drone_time(dd.launch, dd.drone) + inst.drone_time(dd.drone, dd.rendezvous);
            airborne = d;
            events.push({dep + inst.drone_time(dd.launch, dd.drone), order++, Kind::DroneAtCustomer, d});
        }
        tl.departure[p] = dep;
        if (p + 1 < m) events.push({dep + inst.truck_time(td[p], td[p + 1]), order++, Kind::TruckArrives,
                                    static_cast<int>(p + 1)});
    };

    auto meet = [&](std::size_t p, int d) {
        auto& dt = tl.deliveries[static_cast<std::size_t>(d)];
        double truck = tl.truck_arrival[p];
        double drone = dt.drone_at_rendezvous;
        dt.truck_at_rendezvous = truck;
        dt.truck_wait = std::max(0.0, drone - truck);
        dt.drone_wait = std::max(0.0, truck - drone);
        dt.recover_truck = inst.retrieve_time + (launches[p] >= 0 ? inst.launch_time : 0.0);
        bool from_depot = pos[static_cast<std::size_t>(sol.drone_deliveries[static_cast<std::size_t>(d)].launch)] == 0;
        dt.truck_excess = from_depot ? 0.0 : std::max(0.0, dt.truck_leg_time + dt.recover_truck - inst.endurance);
        dt.drone_excess = std::max(0.0, dt.drone_leg_time + inst.retrieve_time - inst.endurance);
        airborne = -1;
        depart(p, std::max(truck, drone) + inst.retrieve_time);
    };

    depart(0, 0.0);
    while (!events.empty()) {
        Event ev = events.top();
        events.pop();
        switch (ev.kind) {
            case Kind::TruckArrives: {
                auto p = static_cast<std::size_t>(ev.target);
                tl.truck_arrival[p] = ev.time;
                if (airborne >= 0) {
                    auto& dt = tl.deliveries[static_cast<std::size_t>(airborne)];
                    dt.truck_leg_time += inst.truck_time(td[p - 1], td[p]);
                }
                int d = rejoins[p];
                if (d < 0) {
                    depart(p, ev.time);
                } else if (drone_back[static_cast<std::size_t>(d)]) {
                    meet(p, d);
                } else {
                    truck_waiting[p] = true;
                }
                break;
            }
            case Kind::DroneAtCustomer: {
                auto& dt = tl.deliveries[static_cast<std::size_t>(ev.target)];
                const auto& dd = sol.drone_deliveries[static_cast<std::size_t>(ev.target)];
                dt.drone_at_customer = ev.time;
                events.push({ev.time + inst.drone_time(dd.drone, dd.rendezvous), order++, Kind::DroneAtRendezvous,
                             ev.target});
                break;
            }
            case Kind::DroneAtRendezvous: {
                auto d = static_cast<std::size_t>(ev.target);
                tl.deliveries[d].drone_at_rendezvous = ev.time;
                drone_back[d] = true;
                auto p = static_cast<std::size_t>(pos[static_cast<std::size_t>(sol.drone_deliveries[d].rendezvous)]);
                if (truck_waiting[p]) {
                    truck_waiting[p] = false;
                    meet(p, ev.target);
                }
                break;
            }
        }
    }
    tl.truck_end = tl.effective.back();
    tl.drone_end = tl.effective.back();
    return tl;
}

}  // namespace tspd
