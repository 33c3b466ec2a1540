#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "tspd/evaluation.hpp"
#include "tspd/model.hpp"
#include "tspd/random.hpp"

namespace tspd {

/// For every customer, the ceil(h * n) closest other customers by truck
/// distance (capped at n - 1), nearest first.
struct GranularNeighbors {
    double threshold = 0.1;
    std::vector<std::vector<NodeId>> lists;  ///< indexed by node id; depots empty

    const std::vector<NodeId>& of(NodeId v) const { return lists[static_cast<std::size_t>(v)]; }
};

GranularNeighbors build_granular_neighbors(const Instance& inst, double threshold);

/// The sixteen education neighborhoods.
enum class MoveKind : int {
    RelocateOne = 1,        ///< N1: truck-only u after v
    RelocatePair,           ///< N2: truck-only (u1,u2) after v
    RelocatePairReversed,   ///< N3: truck-only (u2,u1) after v
    SwapOne,                ///< N4: swap truck nodes u, v
    SwapPairOne,            ///< N5: swap (u1,u2) with v; u2 has no launch/rendezvous
    SwapPairPair,           ///< N6: swap (u1,u2) with (v1,v2)
    TwoOpt,                 ///< N7: reverse the tour between u and v; sorties follow their nodes
    TwoOptKeepRoles,        ///< N8: reverse the tour between u and v; sortie roles stay in place
    DroneTruckSwap,         ///< N9: drone node j <-> truck node u outside its span
    LaunchSwap,             ///< N10: <i,j,k> -> <j,i,k>
    RendezvousSwap,         ///< N11: <i,j,k> -> <i,k,j>
    LaunchRendezvousSwap,   ///< N12: swap the tour positions of i and k
    DroneInsert,            ///< N13: new sortie <i,j,k> for a truck node j
    DroneRemove,            ///< N14: drop the sortie of j, reinsert j after a truck node
    DroneSwap,              ///< N15: exchange the drone nodes of two sorties
    DroneRelocate,          ///< N16: <i,j,k> -> <i',j,k'>
};

inline constexpr int kMoveKindCount = 16;
inline constexpr double kImprovementTolerance = 1e-9;

std::string_view to_string(MoveKind kind);

/// Move arguments are node ids, resolved against the solution at use time.
/// Sorties are identified by their drone node.
struct Move {
    MoveKind kind = MoveKind::RelocateOne;
    NodeId u = -1;
    NodeId v = -1;
    NodeId w = -1;
};

/// Evaluates moves against one fixed solution using cached segment prefix
/// sums; only the segments touched by a move are recomputed.
class MoveEvaluator {
  public:
    MoveEvaluator(const TspDSolution& current, const SegmentCost& cost);

    /// Penalized cost of the current solution from the segment decomposition.
    double current_cost() const { return cumulative_.back(); }
    const TspDSolution& current() const { return current_; }
    const TourIndex& index() const { return index_; }

    /// Builds the neighbor solution; nullopt when the move is not applicable.
    std::optional<TspDSolution> apply(const Move& move) const;

    /// Change in penalized cost; nullopt when not applicable, +inf when the
    /// neighbor is rejected by the relax mode.
    std::optional<double> delta(const Move& move) const;

    /// Applies and evaluates in one step.
    std::optional<std::pair<TspDSolution, double>> try_move(const Move& move) const;

    /// Number of evaluations that fell back to a full recomputation.
    std::size_t fallbacks() const { return fallbacks_; }

  private:
    struct Cluster {
        int lo;
        int hi;
        int shift;
    };
    struct Built {
        TspDSolution sol;
        std::array<Cluster, 2> clusters;
        int count = 0;
    };

    bool build(const Move& move, Built& out) const;
    double window_delta(const Built& built) const;
    int segment_start_ending_at(int pos) const;
    int window_start(int lo) const;
    int window_end(int hi) const;

    TspDSolution current_;
    const SegmentCost* cost_;
    TourIndex index_;
    std::vector<double> cumulative_;  ///< at segment boundaries; last entry = total
    std::vector<int> sortie_of_drone_;
    mutable std::size_t fallbacks_ = 0;
    // Reused between evaluations to avoid allocation.
    mutable Built scratch_;
    mutable std::vector<int> pos_scratch_;
    mutable std::vector<int> launch_scratch_;
};

std::optional<TspDSolution> apply_move(const Move& move, const TspDSolution& sol, const Instance& inst);

/// Change in penalized cost from applying the move, computed incrementally.
std::optional<double> evaluate_move(const Move& move, const TspDSolution& sol, const Instance& inst,
                                    const PenaltyConfig& cfg, Objective obj);

/// Granular candidate moves for all sixteen neighborhoods.
std::vector<Move> candidate_moves(const TspDSolution& sol, const TourIndex& index,
                                  const Instance& inst, const GranularNeighbors& neighbors);

/// A uniformly chosen kind with random arguments; may be inapplicable.
Move random_move(const TspDSolution& sol, const Instance& inst, Rng& rng);

struct EducationStats {
    std::size_t rounds = 0;
    std::size_t moves_applied = 0;
    std::size_t evaluations = 0;
};

/// First-improvement hill climbing over the sixteen neighborhoods. Returns a
/// solution no worse than the input and locally optimal for the granular
/// candidate set.
TspDSolution educate(TspDSolution sol, const Instance& inst, const PenaltyConfig& cfg, Objective obj,
                     const GranularNeighbors& neighbors, std::uint64_t seed,
                     EducationStats* stats = nullptr);

}  // namespace tspd
