#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace tspd {

using NodeId = int;

/// Dense square matrix indexed by node id.
class Matrix {
  public:
    Matrix() = default;
    explicit Matrix(std::size_t size, double fill = 0.0) : size_(size), data_(size * size, fill) {}

    double operator()(NodeId i, NodeId j) const { return data_[index(i, j)]; }
    double& operator()(NodeId i, NodeId j) { return data_[index(i, j)]; }

    std::size_t size() const { return size_; }
    bool operator==(const Matrix&) const = default;

  private:
    std::size_t index(NodeId i, NodeId j) const {
        return static_cast<std::size_t>(i) * size_ + static_cast<std::size_t>(j);
    }

    std::size_t size_ = 0;
    std::vector<double> data_;
};

struct Point {
    double x = 0.0;
    double y = 0.0;
    bool operator==(const Point&) const = default;
};

class InstanceError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// A TSP-D instance over nodes 0..n+1, where 0 is the depot and n+1 its copy.
///
/// Times are in minutes, distances in distance units (km for generated and
/// Murray-format data). Matrices are always fully materialized so asymmetric
/// truck networks are representable.
struct Instance {
    std::string name;
    int n = 0;

    Matrix truck_dist;
    Matrix truck_time;
    Matrix drone_dist;
    Matrix drone_time;

    /// Indexed by node id (size n+2); depots are never eligible.
    std::vector<bool> drone_eligible;
    /// Optional coordinates (size n+2 when present).
    std::vector<Point> coords;

    double endurance = 20.0;
    double launch_time = 1.0;
    double retrieve_time = 1.0;
    double truck_cost = 1.0;
    double drone_cost = 1.0;
    double truck_wait_fee = 0.0;
    double drone_wait_fee = 0.0;
    double truck_speed = 2.0 / 3.0;
    double drone_speed = 2.0 / 3.0;

    NodeId depot() const { return 0; }
    NodeId depot_end() const { return n + 1; }
    int node_count() const { return n + 2; }
    bool is_customer(NodeId v) const { return v >= 1 && v <= n; }
    bool is_drone_eligible(NodeId v) const {
        return is_customer(v) && drone_eligible[static_cast<std::size_t>(v)];
    }

    /// Throws InstanceError naming the first broken invariant.
    void validate() const;

    bool operator==(const Instance&) const = default;
};

/// Build matrices from coordinates: Euclidean distances and times d / speed.
/// Row and column n+1 duplicate the depot.
Instance make_euclidean_instance(std::vector<Point> coords, std::vector<bool> drone_eligible,
                                 const Instance& parameters);

/// Permutation of customers 1..n with both depots removed.
struct GiantTour {
    std::vector<NodeId> order;

    std::size_t size() const { return order.size(); }
    NodeId operator[](std::size_t i) const { return order[i]; }
    bool operator==(const GiantTour&) const = default;
};

bool is_permutation_of_customers(const GiantTour& tour, int n);

struct DroneDelivery {
    NodeId launch = 0;
    NodeId drone = 0;
    NodeId rendezvous = 0;
    bool operator==(const DroneDelivery&) const = default;
};

struct TspDSolution {
    std::vector<NodeId> truck_tour;
    std::vector<DroneDelivery> drone_deliveries;
    bool operator==(const TspDSolution&) const = default;
};

/// All-truck solution visiting customers in giant-tour order.
TspDSolution truck_only_solution(const GiantTour& tour, int n);

enum class Objective { MinCost, MinTime };

enum class ViolationRule {
    MalformedTour,
    NodeOutOfRange,
    DuplicateCustomer,
    MissingCustomer,
    DroneNodeInTruckTour,
    DroneNodeNotEligible,
    DeliveryNodesNotDistinct,
    EndpointNotInTruckTour,
    RendezvousBeforeLaunch,
    InterleavedDeliveries,
};

struct Violation {
    ViolationRule rule;
    std::vector<NodeId> nodes;
    std::string message;
};

/// Structural check of a solution. Endurance is not checked here since it may
/// be relaxed during search.
std::vector<Violation> validate_solution(const TspDSolution& sol, const Instance& inst);

/// Position bookkeeping for a structurally valid solution.
///
/// Positions refer to indices into the truck tour. A segment starts at a
/// boundary position: either a single truck arc (p, p+1) or a drone span from
/// a launch position to its rendezvous position.
struct TourIndex {
    std::vector<int> position_of;  ///< by node; -1 when not on the truck tour
    std::vector<int> launch_at;    ///< by position; delivery index or -1
    std::vector<int> rendezvous_at;
    std::vector<int> inside_span;  ///< by position; delivery whose span strictly contains it
    std::vector<int> launch_pos;   ///< by delivery
    std::vector<int> rendezvous_pos;

    /// Throws std::invalid_argument on endpoints missing from the tour,
    /// reversed spans, or interleaved deliveries.
    TourIndex(const TspDSolution& sol, int node_count);

    bool truck_only(int pos) const {
        return launch_at[pos] < 0 && rendezvous_at[pos] < 0 && inside_span[pos] < 0;
    }
    bool has_role(int pos) const { return launch_at[pos] >= 0 || rendezvous_at[pos] >= 0; }
};

std::string to_string(const TspDSolution& sol);
std::string to_string(Objective obj);

}  // namespace tspd
