#pragma once

#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "tspd/model.hpp"

namespace tspd {

/// Which endurance violations may survive as penalized (infeasible) solutions.
enum class RelaxMode { All, Truck, Drone, None };

/// Waiting-fee assignment. AsWritten bills alpha on the time the drone waits
/// for the truck and beta on the time the truck waits for the drone (the
/// formulas exactly as printed); AsNamed bills alpha on truck waiting and beta
/// on drone waiting.
enum class WaitFeeConvention { AsWritten, AsNamed };

std::string to_string(RelaxMode mode);
std::string to_string(WaitFeeConvention fees);
/// Throw std::invalid_argument on unknown names.
RelaxMode parse_relax(const std::string& name);
WaitFeeConvention parse_wait_fees(const std::string& name);

struct PenaltyConfig {
    double omega = 1.0;
    RelaxMode relax = RelaxMode::All;
    WaitFeeConvention wait_fees = WaitFeeConvention::AsWritten;
};

inline constexpr double kInadmissible = std::numeric_limits<double>::infinity();

struct DeliveryTiming {
    double launch_departure = 0.0;  ///< truck and drone both leave the launch node
    double drone_at_customer = 0.0;
    double drone_at_rendezvous = 0.0;
    double truck_at_rendezvous = 0.0;
    double truck_leg_time = 0.0;  ///< truck travel time launch -> rendezvous along the tour
    double drone_leg_time = 0.0;
    double recover_truck = 0.0;
    double truck_wait = 0.0;  ///< truck waits for the drone
    double drone_wait = 0.0;  ///< drone waits (hovering) for the truck
    double truck_excess = 0.0;
    double drone_excess = 0.0;
};

struct Timeline {
    std::vector<double> truck_arrival;  ///< raw arrival per truck-tour position
    std::vector<double> effective;      ///< arrival incl. rendezvous wait and retrieval
    std::vector<double> departure;      ///< effective plus launch preparation
    std::vector<DeliveryTiming> deliveries;  ///< aligned with sol.drone_deliveries
    double truck_end = 0.0;
    double drone_end = 0.0;
};

/// Walk-based simulation of both vehicles. Requires a structurally valid
/// solution; throws std::invalid_argument otherwise.
Timeline simulate_timeline(const TspDSolution& sol, const Instance& inst);

double operational_cost(const TspDSolution& sol, const Instance& inst,
                        WaitFeeConvention fees = WaitFeeConvention::AsWritten);
double operational_cost(const TspDSolution& sol, const Timeline& tl, const Instance& inst,
                        WaitFeeConvention fees = WaitFeeConvention::AsWritten);

double completion_time(const TspDSolution& sol, const Instance& inst);

struct Evaluation {
    double objective = 0.0;  ///< raw cost or completion time
    double violation = 0.0;  ///< penalty term before multiplying by omega
    double truck_excess = 0.0;
    double drone_excess = 0.0;
    bool feasible = true;
    bool admissible = true;

    double penalized(double omega) const {
        return admissible ? objective + omega * violation : kInadmissible;
    }
};

Evaluation evaluate(const TspDSolution& sol, const Instance& inst, const PenaltyConfig& cfg,
                    Objective obj);

/// Penalized fitness; nullopt when a violation is hard-rejected by the relax mode.
std::optional<double> penalized_cost(const TspDSolution& sol, const Instance& inst,
                                     const PenaltyConfig& cfg, Objective obj);

bool is_feasible(const TspDSolution& sol, const Instance& inst);

/// Per-segment contributions to the penalized fitness.
///
/// Both objectives decompose additively over segments of the truck tour:
/// single truck arcs and drone spans. Completion time is the sum of segment
/// durations (launch preparation + max of the two legs + retrieval for a
/// span), so split and the local search share this decomposition.
class SegmentCost {
  public:
    SegmentCost(const Instance& inst, const PenaltyConfig& cfg, Objective obj)
        : inst_(&inst), cfg_(cfg), obj_(obj) {}

    double truck_arc(NodeId a, NodeId b) const {
        return obj_ == Objective::MinCost ? inst_->truck_cost * inst_->truck_dist(a, b)
                                          : inst_->truck_time(a, b);
    }

    /// Contribution of delivery <launch, drone, rendezvous> with the truck
    /// covering the span in truck_time / truck_dist. `relaunch` is true when
    /// the next delivery launches at the rendezvous node. Returns
    /// kInadmissible for violations the relax mode rejects.
    double drone_span(NodeId launch, NodeId drone, NodeId rendezvous, double truck_time,
                      double truck_dist, bool relaunch) const;

    const Instance& instance() const { return *inst_; }
    const PenaltyConfig& config() const { return cfg_; }
    Objective objective() const { return obj_; }

  private:
    const Instance* inst_;
    PenaltyConfig cfg_;
    Objective obj_;
};

/// Sum of segment contributions over the whole solution.
double segment_penalized_cost(const TspDSolution& sol, const SegmentCost& cost);

}  // namespace tspd
