#include "tspd/model.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace tspd {

namespace {

void check_matrix(const Matrix& m, const char* name, std::size_t expected) {
    if (m.size() != expected) {
        throw InstanceError(std::string(name) + ": expected " + std::to_string(expected) +
                            " rows, got " + std::to_string(m.size()));
    }
    for (std::size_t i = 0; i < expected; ++i) {
        for (std::size_t j = 0; j < expected; ++j) {
            double v = m(static_cast<NodeId>(i), static_cast<NodeId>(j));
            if (!std::isfinite(v) || v < 0.0) {
                throw InstanceError(std::string(name) + "[" + std::to_string(i) + "][" +
                                    std::to_string(j) + "] must be finite and >= 0");
            }
            if (i == j && v != 0.0) {
                throw InstanceError(std::string(name) + " diagonal entry " + std::to_string(i) +
                                    " must be 0");
            }
        }
    }
}

std::string join(const std::vector<NodeId>& nodes) {
    std::string out;
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        if (i) out += ',';
        out += std::to_string(nodes[i]);
    }
    return out;
}

}  // namespace

void Instance::validate() const {
    if (n < 0) throw InstanceError("customer count must be >= 0");
    auto size = static_cast<std::size_t>(n + 2);
    check_matrix(truck_dist, "truck_dist", size);
    check_matrix(truck_time, "truck_time", size);
    check_matrix(drone_dist, "drone_dist", size);
    check_matrix(drone_time, "drone_time", size);
    if (drone_eligible.size() != size) throw InstanceError("drone_eligible must have n+2 entries");
    if (drone_eligible[0] || drone_eligible[size - 1]) {
        throw InstanceError("depots cannot be drone eligible");
    }
    if (!coords.empty() && coords.size() != size) throw InstanceError("coords must have n+2 entries");
    if (!(endurance > 0.0)) throw InstanceError("endurance must be > 0");
    if (!(launch_time >= 0.0) || !(retrieve_time >= 0.0)) {
        throw InstanceError("launch and retrieve times must be >= 0");
    }
    if (!(truck_cost >= 0.0) || !(drone_cost >= 0.0)) throw InstanceError("cost rates must be >= 0");
    if (!(truck_wait_fee >= 0.0) || !(drone_wait_fee >= 0.0)) {
        throw InstanceError("waiting fees must be >= 0");
    }
    if (!(truck_speed > 0.0) || !(drone_speed > 0.0)) throw InstanceError("speeds must be > 0");
}

Instance make_euclidean_instance(std::vector<Point> coords, std::vector<bool> drone_eligible,
                                 const Instance& parameters) {
    Instance inst = parameters;
    if (coords.size() < 1) throw InstanceError("at least the depot coordinate is required");
    inst.n = static_cast<int>(coords.size()) - 1;
    coords.push_back(coords.front());
    drone_eligible.resize(coords.size(), false);
    drone_eligible.front() = false;
    drone_eligible.back() = false;

    auto size = coords.size();
    inst.truck_dist = Matrix(size);
    inst.truck_time = Matrix(size);
    inst.drone_dist = Matrix(size);
    inst.drone_time = Matrix(size);
    for (std::size_t i = 0; i < size; ++i) {
        for (std::size_t j = 0; j < size; ++j) {
            auto a = static_cast<NodeId>(i);
            auto b = static_cast<NodeId>(j);
            double d = std::hypot(coords[i].x - coords[j].x, coords[i].y - coords[j].y);
            inst.truck_dist(a, b) = d;
            inst.drone_dist(a, b) = d;
            inst.truck_time(a, b) = d / inst.truck_speed;
            inst.drone_time(a, b) = d / inst.drone_speed;
        }
    }
    inst.coords = std::move(coords);
    inst.drone_eligible = std::move(drone_eligible);
    return inst;
}

bool is_permutation_of_customers(const GiantTour& tour, int n) {
    if (tour.size() != static_cast<std::size_t>(n)) return false;
    std::vector<bool> seen(static_cast<std::size_t>(n) + 1, false);
    for (NodeId v : tour.order) {
        if (v < 1 || v > n || seen[static_cast<std::size_t>(v)]) return false;
        seen[static_cast<std::size_t>(v)] = true;
    }
    return true;
}

TspDSolution truck_only_solution(const GiantTour& tour, int n) {
    TspDSolution sol;
    sol.truck_tour.reserve(tour.size() + 2);
    sol.truck_tour.push_back(0);
    sol.truck_tour.insert(sol.truck_tour.end(), tour.order.begin(), tour.order.end());
    sol.truck_tour.push_back(n + 1);
    return sol;
}

std::vector<Violation> validate_solution(const TspDSolution& sol, const Instance& inst) {
    std::vector<Violation> out;
    const int n = inst.n;
    const auto& td = sol.truck_tour;
    auto in_range = [&](NodeId v) { return v >= 0 && v <= n + 1; };

    if (td.size() < 2 || td.front() != 0 || td.back() != n + 1) {
        out.push_back({ViolationRule::MalformedTour, td,
                       "truck tour must start at depot 0 and end at depot " + std::to_string(n + 1)});
    } else if (td.size() == 2 && n > 0) {
        out.push_back({ViolationRule::MalformedTour, td, "truck tour visits no customer"});
    }

    std::vector<int> seen(static_cast<std::size_t>(n) + 2, 0);
    std::vector<int> position(static_cast<std::size_t>(n) + 2, -1);
    for (std::size_t p = 0; p < td.size(); ++p) {
        NodeId v = td[p];
        if (!in_range(v)) {
            out.push_back({ViolationRule::NodeOutOfRange, {v},
                           "node " + std::to_string(v) + " out of range 0.." + std::to_string(n + 1)});
            continue;
        }
        bool endpoint = (p == 0 && v == 0) || (p + 1 == td.size() && v == n + 1);
        if (!endpoint && !inst.is_customer(v)) {
            out.push_back({ViolationRule::MalformedTour, {v},
                           "depot " + std::to_string(v) + " inside the truck tour"});
            continue;
        }
        if (++seen[static_cast<std::size_t>(v)] > 1) {
            out.push_back({ViolationRule::DuplicateCustomer, {v},
                           "node " + std::to_string(v) + " visited more than once"});
        }
        position[static_cast<std::size_t>(v)] = static_cast<int>(p);
    }

    struct Span {
        int launch;
        int rendezvous;
        std::size_t index;
    };
    std::vector<Span> spans;
    for (std::size_t d = 0; d < sol.drone_deliveries.size(); ++d) {
        const auto& dd = sol.drone_deliveries[d];
        std::vector<NodeId> tuple{dd.launch, dd.drone, dd.rendezvous};
        if (!in_range(dd.launch) || !in_range(dd.drone) || !in_range(dd.rendezvous)) {
            out.push_back({ViolationRule::NodeOutOfRange, tuple, "delivery node out of range"});
            continue;
        }
        if (dd.launch == dd.drone || dd.drone == dd.rendezvous || dd.launch == dd.rendezvous) {
            out.push_back({ViolationRule::DeliveryNodesNotDistinct, tuple,
                           "launch, drone and rendezvous nodes must be different"});
        }
        if (!inst.is_customer(dd.drone)) {
            out.push_back({ViolationRule::NodeOutOfRange, tuple, "drone node must be a customer"});
        } else {
            if (!inst.is_drone_eligible(dd.drone)) {
                out.push_back({ViolationRule::DroneNodeNotEligible, {dd.drone},
                               "customer " + std::to_string(dd.drone) + " is not drone eligible"});
            }
            if (position[static_cast<std::size_t>(dd.drone)] >= 0) {
                out.push_back({ViolationRule::DroneNodeInTruckTour, {dd.drone},
                               "drone node " + std::to_string(dd.drone) + " also on truck tour"});
            }
            if (++seen[static_cast<std::size_t>(dd.drone)] > 1) {
                out.push_back({ViolationRule::DuplicateCustomer, {dd.drone},
                               "customer " + std::to_string(dd.drone) + " served more than once"});
            }
        }
        int pi = position[static_cast<std::size_t>(dd.launch)];
        int pk = position[static_cast<std::size_t>(dd.rendezvous)];
        if (pi < 0 || pk < 0) {
            out.push_back({ViolationRule::EndpointNotInTruckTour, tuple,
                           "launch or rendezvous node not on the truck tour"});
            continue;
        }
        if (pi >= pk) {
            out.push_back({ViolationRule::RendezvousBeforeLaunch, tuple,
                           "launch must precede rendezvous on the truck tour"});
            continue;
        }
        spans.push_back({pi, pk, d});
    }

    for (NodeId v = 1; v <= n; ++v) {
        if (seen[static_cast<std::size_t>(v)] == 0) {
            out.push_back({ViolationRule::MissingCustomer, {v},
                           "customer " + std::to_string(v) + " is not served"});
        }
    }

    std::sort(spans.begin(), spans.end(), [](const Span& a, const Span& b) {
        return a.launch != b.launch ? a.launch < b.launch : a.index < b.index;
    });
    for (std::size_t s = 1; s < spans.size(); ++s) {
        const auto& prev = spans[s - 1];
        const auto& cur = spans[s];
        if (cur.launch < prev.rendezvous) {
            const auto& a = sol.drone_deliveries[prev.index];
            const auto& b = sol.drone_deliveries[cur.index];
            out.push_back({ViolationRule::InterleavedDeliveries,
                           {a.launch, a.drone, a.rendezvous, b.launch, b.drone, b.rendezvous},
                           "interleaved deliveries"});
        }
    }
    return out;
}

TourIndex::TourIndex(const TspDSolution& sol, int node_count)
    : position_of(static_cast<std::size_t>(node_count), -1),
      launch_at(sol.truck_tour.size(), -1),
      rendezvous_at(sol.truck_tour.size(), -1),
      inside_span(sol.truck_tour.size(), -1),
      launch_pos(sol.drone_deliveries.size(), -1),
      rendezvous_pos(sol.drone_deliveries.size(), -1) {
    for (std::size_t p = 0; p < sol.truck_tour.size(); ++p) {
        position_of[static_cast<std::size_t>(sol.truck_tour[p])] = static_cast<int>(p);
    }
    for (std::size_t d = 0; d < sol.drone_deliveries.size(); ++d) {
        const auto& dd = sol.drone_deliveries[d];
        int pi = position_of[static_cast<std::size_t>(dd.launch)];
        int pk = position_of[static_cast<std::size_t>(dd.rendezvous)];
        if (pi < 0 || pk < 0 || pi >= pk) {
            throw std::invalid_argument("delivery endpoints not ordered on the truck tour");
        }
        if (launch_at[pi] >= 0 || rendezvous_at[pk] >= 0) {
            throw std::invalid_argument("interleaved deliveries");
        }
        launch_at[pi] = static_cast<int>(d);
        rendezvous_at[pk] = static_cast<int>(d);
        launch_pos[d] = pi;
        rendezvous_pos[d] = pk;
    }
    // Walk spans; a role inside an open span means interleaving.
    int open = -1;
    for (std::size_t p = 0; p < sol.truck_tour.size(); ++p) {
        if (open >= 0) {
            if (rendezvous_at[p] == open) {
                open = -1;
            } else if (launch_at[p] >= 0 || rendezvous_at[p] >= 0) {
                throw std::invalid_argument("interleaved deliveries");
            } else {
                inside_span[p] = open;
                continue;
            }
        }
        if (launch_at[p] >= 0) open = launch_at[p];
    }
}

std::string to_string(const TspDSolution& sol) {
    std::ostringstream os;
    os << "TD=[" << join(sol.truck_tour) << "] DD=[";
    for (std::size_t d = 0; d < sol.drone_deliveries.size(); ++d) {
        const auto& dd = sol.drone_deliveries[d];
        if (d) os << ' ';
        os << '<' << dd.launch << ',' << dd.drone << ',' << dd.rendezvous << '>';
    }
    os << ']';
    return os.str();
}

std::string to_string(Objective obj) { return obj == Objective::MinCost ? "cost" : "time"; }

}  // namespace tspd
