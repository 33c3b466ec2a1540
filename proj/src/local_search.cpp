#include "tspd/local_search.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <numeric>

namespace tspd {

namespace {

constexpr double kUnset = std::numeric_limits<double>::quiet_NaN();

/// Swap the launch/rendezvous roles of two nodes.
void swap_roles(std::vector<DroneDelivery>& deliveries, NodeId x, NodeId y) {
    for (auto& dd : deliveries) {
        if (dd.launch == x) {
            dd.launch = y;
        } else if (dd.launch == y) {
            dd.launch = x;
        }
        if (dd.rendezvous == x) {
            dd.rendezvous = y;
        } else if (dd.rendezvous == y) {
            dd.rendezvous = x;
        }
    }
}

/// Non-throwing structural check of sortie ordering and nesting.
bool sorties_well_formed(const TspDSolution& sol, int node_count) {
    std::vector<int> pos(static_cast<std::size_t>(node_count), -1);
    for (std::size_t p = 0; p < sol.truck_tour.size(); ++p) {
        pos[static_cast<std::size_t>(sol.truck_tour[p])] = static_cast<int>(p);
    }
    std::vector<int> closes_at(sol.truck_tour.size(), -1);
    std::vector<bool> launches(sol.truck_tour.size(), false);
    for (const auto& dd : sol.drone_deliveries) {
        int pi = pos[static_cast<std::size_t>(dd.launch)];
        int pk = pos[static_cast<std::size_t>(dd.rendezvous)];
        if (pi < 0 || pk < 0 || pi >= pk || launches[pi]) return false;
        launches[pi] = true;
        closes_at[pi] = pk;
    }
    int open_until = -1;
    for (std::size_t p = 0; p < sol.truck_tour.size(); ++p) {
        auto pp = static_cast<int>(p);
        if (open_until >= 0 && pp < open_until && launches[p]) return false;
        if (open_until == pp) open_until = -1;
        if (launches[p]) {
            if (open_until >= 0) return false;
            open_until = closes_at[p];
        }
    }
    return true;
}

}  // namespace

std::string_view to_string(MoveKind kind) {
    static constexpr std::array<std::string_view, kMoveKindCount> names{
        "N1-relocate-1", "N2-relocate-2", "N3-relocate-2r", "N4-swap-1-1",
        "N5-swap-2-1",   "N6-swap-2-2",   "N7-2opt",        "N8-2opt-roles",
        "N9-drone-truck-swap", "N10-launch-swap", "N11-rdv-swap", "N12-launch-rdv-swap",
        "N13-drone-insert", "N14-drone-remove", "N15-drone-swap", "N16-drone-relocate"};
    return names[static_cast<std::size_t>(static_cast<int>(kind) - 1)];
}

GranularNeighbors build_granular_neighbors(const Instance& inst, double threshold) {
    GranularNeighbors g;
    g.threshold = threshold;
    g.lists.assign(static_cast<std::size_t>(inst.node_count()), {});
    if (inst.n < 2) return g;
    auto count = static_cast<std::size_t>(std::ceil(threshold * inst.n - 1e-12));
    count = std::clamp<std::size_t>(count, 1, static_cast<std::size_t>(inst.n - 1));
    for (NodeId u = 1; u <= inst.n; ++u) {
        std::vector<NodeId> others;
        for (NodeId v = 1; v <= inst.n; ++v) {
            if (v != u) others.push_back(v);
        }
        std::stable_sort(others.begin(), others.end(), [&](NodeId a, NodeId b) {
            return inst.truck_dist(u, a) < inst.truck_dist(u, b);
        });
        others.resize(count);
        g.lists[static_cast<std::size_t>(u)] = std::move(others);
    }
    return g;
}

MoveEvaluator::MoveEvaluator(const TspDSolution& current, const SegmentCost& cost)
    : current_(current), cost_(&cost), index_(current_, cost.instance().node_count()) {
    const Instance& inst = cost.instance();
    const auto& td = current_.truck_tour;
    sortie_of_drone_.assign(static_cast<std::size_t>(inst.node_count()), -1);
    for (std::size_t d = 0; d < current_.drone_deliveries.size(); ++d) {
        sortie_of_drone_[static_cast<std::size_t>(current_.drone_deliveries[d].drone)] = static_cast<int>(d);
    }
    cumulative_.assign(td.size(), kUnset);
    cumulative_[0] = 0.0;
    std::size_t p = 0;
    while (p + 1 < td.size()) {
        int d = index_.launch_at[p];
        if (d < 0) {
            cumulative_[p + 1] = cumulative_[p] + cost.truck_arc(td[p], td[p + 1]);
            ++p;
            continue;
        }
        auto q = static_cast<std::size_t>(index_.rendezvous_pos[static_cast<std::size_t>(d)]);
        double time = 0.0;
        double dist = 0.0;
        for (std::size_t r = p; r < q; ++r) {
            time += inst.truck_time(td[r], td[r + 1]);
            dist += inst.truck_dist(td[r], td[r + 1]);
        }
        const auto& dd = current_.drone_deliveries[static_cast<std::size_t>(d)];
        cumulative_[q] = cumulative_[p] + cost.drone_span(dd.launch, dd.drone, dd.rendezvous, time,
                                                          dist, index_.launch_at[q] >= 0);
        p = q;
    }
}

bool MoveEvaluator::build(const Move& move, Built& out) const {
    const Instance& inst = cost_->instance();
    const auto& td = current_.truck_tour;
    const auto& dds = current_.drone_deliveries;
    const auto& idx = index_;
    const int last = static_cast<int>(td.size()) - 1;

    auto pos = [&](NodeId v) {
        return v >= 0 && v < inst.node_count() ? idx.position_of[static_cast<std::size_t>(v)] : -1;
    };
    auto customer_at = [&](int p) { return p > 0 && p < last; };
    auto sortie_of = [&](NodeId j) -> int {
        return j >= 0 && j < inst.node_count() ? sortie_of_drone_[static_cast<std::size_t>(j)] : -1;
    };

    out.count = 0;
    out.sol.truck_tour.clear();
    out.sol.drone_deliveries.clear();
    auto& sol = out.sol;
    auto add_cluster = [&](int lo, int hi, int shift) { out.clusters[out.count++] = {lo, hi, shift}; };
    auto order_clusters = [&]() {
        if (out.count == 2 && out.clusters[1].lo < out.clusters[0].lo) {
            std::swap(out.clusters[0], out.clusters[1]);
        }
    };

    switch (move.kind) {
        case MoveKind::RelocateOne: {
            int a = pos(move.u);
            int b = pos(move.v);
            if (!customer_at(a) || !idx.truck_only(a) || b < 0 || b >= last || b == a || b == a - 1) {
                return false;
            }
            sol.drone_deliveries = dds;
            sol.truck_tour.reserve(td.size());
            for (int p = 0; p <= last; ++p) {
                if (p == a) continue;
                sol.truck_tour.push_back(td[p]);
                if (p == b) sol.truck_tour.push_back(move.u);
            }
            add_cluster(a, a, -1);
            add_cluster(b + 1, b, +1);
            break;
        }
        case MoveKind::RelocatePair:
        case MoveKind::RelocatePairReversed: {
            int a = pos(move.u);
            int b = pos(move.v);
            bool reversed = move.kind == MoveKind::RelocatePairReversed;
            if (!customer_at(a) || !customer_at(a + 1) || !idx.truck_only(a) || !idx.truck_only(a + 1) ||
                b < 0 || b >= last || b == a || b == a + 1 || (!reversed && b == a - 1)) {
                return false;
            }
            NodeId u1 = td[a];
            NodeId u2 = td[a + 1];
            sol.drone_deliveries = dds;
            sol.truck_tour.reserve(td.size());
            for (int p = 0; p <= last; ++p) {
                if (p == a || p == a + 1) continue;
                sol.truck_tour.push_back(td[p]);
                if (p == b) {
                    sol.truck_tour.push_back(reversed ? u2 : u1);
                    sol.truck_tour.push_back(reversed ? u1 : u2);
                }
            }
            add_cluster(a, a + 1, -2);
            add_cluster(b + 1, b, +2);
            break;
        }
        case MoveKind::SwapOne: {
            int a = pos(move.u);
            int b = pos(move.v);
            if (!customer_at(a) || !customer_at(b) || a == b) return false;
            sol = current_;
            std::swap(sol.truck_tour[a], sol.truck_tour[b]);
            swap_roles(sol.drone_deliveries, move.u, move.v);
            add_cluster(a, a, 0);
            add_cluster(b, b, 0);
            break;
        }
        case MoveKind::SwapPairOne: {
            int a = pos(move.u);
            int b = pos(move.v);
            if (!customer_at(a) || !customer_at(a + 1) || idx.has_role(a + 1) || !customer_at(b) ||
                b == a || b == a + 1) {
                return false;
            }
            NodeId u1 = td[a];
            NodeId u2 = td[a + 1];
            NodeId v = td[b];
            sol.drone_deliveries = dds;
            sol.truck_tour.reserve(td.size());
            for (int p = 0; p <= last; ++p) {
                if (p == a) {
                    sol.truck_tour.push_back(v);
                } else if (p == a + 1) {
                    continue;
                } else if (p == b) {
                    sol.truck_tour.push_back(u1);
                    sol.truck_tour.push_back(u2);
                } else {
                    sol.truck_tour.push_back(td[p]);
                }
            }
            swap_roles(sol.drone_deliveries, u1, v);
            add_cluster(a, a + 1, -1);
            add_cluster(b, b, +1);
            break;
        }
        case MoveKind::SwapPairPair: {
            int a = pos(move.u);
            int b = pos(move.v);
            if (!customer_at(a) || !customer_at(a + 1) || !customer_at(b) || !customer_at(b + 1) ||
                std::abs(a - b) < 2) {
                return false;
            }
            sol = current_;
            std::swap(sol.truck_tour[a], sol.truck_tour[b]);
            std::swap(sol.truck_tour[a + 1], sol.truck_tour[b + 1]);
            swap_roles(sol.drone_deliveries, td[a], td[b]);
            swap_roles(sol.drone_deliveries, td[a + 1], td[b + 1]);
            add_cluster(a, a + 1, 0);
            add_cluster(b, b + 1, 0);
            break;
        }
        case MoveKind::TwoOpt:
        case MoveKind::TwoOptKeepRoles: {
            int a = pos(move.u);
            int b = pos(move.v);
            if (a < 0 || b < 0 || a + 1 >= b || b >= last) return false;
            sol = current_;
            std::reverse(sol.truck_tour.begin() + a + 1, sol.truck_tour.begin() + b + 1);
            if (move.kind == MoveKind::TwoOpt) {
                for (auto& dd : sol.drone_deliveries) {
                    int pi = pos(dd.launch);
                    int pk = pos(dd.rendezvous);
                    if (pi > a && pk <= b) std::swap(dd.launch, dd.rendezvous);
                }
                if (!sorties_well_formed(sol, inst.node_count())) return false;
            } else {
                // The node now at position p takes over the roles held at p.
                for (auto& dd : sol.drone_deliveries) {
                    int pi = pos(dd.launch);
                    int pk = pos(dd.rendezvous);
                    if (pi > a && pi <= b) dd.launch = sol.truck_tour[pi];
                    if (pk > a && pk <= b) dd.rendezvous = sol.truck_tour[pk];
                }
            }
            add_cluster(a + 1, b, 0);
            break;
        }
        case MoveKind::DroneTruckSwap: {
            int d = sortie_of(move.u);
            int b = pos(move.v);
            if (d < 0 || !customer_at(b) || !inst.is_drone_eligible(move.v)) return false;
            int li = idx.launch_pos[d];
            int ri = idx.rendezvous_pos[d];
            if (b >= li && b <= ri) return false;
            sol = current_;
            sol.truck_tour[b] = move.u;
            swap_roles(sol.drone_deliveries, move.v, move.u);
            sol.drone_deliveries[d].drone = move.v;
            add_cluster(li, ri, 0);
            add_cluster(b, b, 0);
            break;
        }
        case MoveKind::LaunchSwap:
        case MoveKind::RendezvousSwap:
        case MoveKind::LaunchRendezvousSwap: {
            int d = sortie_of(move.u);
            if (d < 0) return false;
            int li = idx.launch_pos[d];
            int ri = idx.rendezvous_pos[d];
            NodeId i = td[li];
            NodeId j = move.u;
            NodeId k = td[ri];
            sol = current_;
            if (move.kind == MoveKind::LaunchSwap) {
                if (!customer_at(li) || !inst.is_drone_eligible(i)) return false;
                sol.truck_tour[li] = j;
                swap_roles(sol.drone_deliveries, i, j);
                sol.drone_deliveries[d].drone = i;
            } else if (move.kind == MoveKind::RendezvousSwap) {
                if (!customer_at(ri) || !inst.is_drone_eligible(k)) return false;
                sol.truck_tour[ri] = j;
                swap_roles(sol.drone_deliveries, k, j);
                sol.drone_deliveries[d].drone = k;
            } else {
                if (!customer_at(li) || !customer_at(ri)) return false;
                std::swap(sol.truck_tour[li], sol.truck_tour[ri]);
                swap_roles(sol.drone_deliveries, i, k);
            }
            add_cluster(li, ri, 0);
            break;
        }
        case MoveKind::DroneInsert: {
            int a = pos(move.u);
            int b = pos(move.v);
            int c = pos(move.w);
            if (!customer_at(a) || idx.has_role(a) || !inst.is_drone_eligible(move.u) || b < 0 || c < 0 ||
                b >= c || a == b || a == c) {
                return false;
            }
            if (idx.launch_at[b] >= 0 || idx.inside_span[b] >= 0 || idx.rendezvous_at[c] >= 0 ||
                idx.inside_span[c] >= 0) {
                return false;
            }
            for (int p = b + 1; p < c; ++p) {
                if (idx.has_role(p)) return false;
            }
            sol.drone_deliveries = dds;
            sol.drone_deliveries.push_back({move.v, move.u, move.w});
            sol.truck_tour.reserve(td.size() - 1);
            for (int p = 0; p <= last; ++p) {
                if (p != a) sol.truck_tour.push_back(td[p]);
            }
            add_cluster(a, a, -1);
            add_cluster(b, c, 0);
            break;
        }
        case MoveKind::DroneRemove: {
            int d = sortie_of(move.u);
            int p = pos(move.v);
            if (d < 0 || p < 0 || p >= last) return false;
            sol.drone_deliveries = dds;
            sol.drone_deliveries.erase(sol.drone_deliveries.begin() + d);
            sol.truck_tour.reserve(td.size() + 1);
            for (int q = 0; q <= last; ++q) {
                sol.truck_tour.push_back(td[q]);
                if (q == p) sol.truck_tour.push_back(move.u);
            }
            add_cluster(idx.launch_pos[d], idx.rendezvous_pos[d], 0);
            add_cluster(p + 1, p, +1);
            break;
        }
        case MoveKind::DroneSwap: {
            int d1 = sortie_of(move.u);
            int d2 = sortie_of(move.v);
            if (d1 < 0 || d2 < 0 || d1 == d2) return false;
            sol = current_;
            std::swap(sol.drone_deliveries[d1].drone, sol.drone_deliveries[d2].drone);
            add_cluster(idx.launch_pos[d1], idx.rendezvous_pos[d1], 0);
            add_cluster(idx.launch_pos[d2], idx.rendezvous_pos[d2], 0);
            break;
        }
        case MoveKind::DroneRelocate: {
            int d = sortie_of(move.u);
            int b = pos(move.v);
            int c = pos(move.w);
            if (d < 0 || b < 0 || c < 0 || b >= c) return false;
            int li = idx.launch_pos[d];
            int ri = idx.rendezvous_pos[d];
            if (b == li && c == ri) return false;
            auto other = [&](int e) { return e >= 0 && e != d; };
            if (other(idx.launch_at[b]) || other(idx.inside_span[b]) || other(idx.rendezvous_at[c]) ||
                other(idx.inside_span[c])) {
                return false;
            }
            for (int p = b + 1; p < c; ++p) {
                if (other(idx.launch_at[p]) || other(idx.rendezvous_at[p])) return false;
            }
            sol = current_;
            sol.drone_deliveries[d].launch = move.v;
            sol.drone_deliveries[d].rendezvous = move.w;
            add_cluster(li, ri, 0);
            add_cluster(b, c, 0);
            break;
        }
    }
    // The truck has to visit at least one customer.
    if (sol.truck_tour.size() == 2) return false;
    order_clusters();
    return true;
}

int MoveEvaluator::segment_start_ending_at(int pos) const {
    int d = index_.rendezvous_at[pos];
    return d >= 0 ? index_.launch_pos[static_cast<std::size_t>(d)] : pos - 1;
}

int MoveEvaluator::window_start(int lo) const {
    int s = 0;
    if (index_.inside_span[lo] >= 0) {
        s = index_.launch_pos[static_cast<std::size_t>(index_.inside_span[lo])];
    } else if (lo > 0) {
        s = segment_start_ending_at(lo);
    }
    // One more segment back: its recovery time depends on whether the
    // following segment launches.
    return s == 0 ? 0 : segment_start_ending_at(s);
}

int MoveEvaluator::window_end(int hi) const {
    const int last = static_cast<int>(current_.truck_tour.size()) - 1;
    if (hi >= last) return last;
    if (int d = index_.inside_span[hi]; d >= 0) return index_.rendezvous_pos[static_cast<std::size_t>(d)];
    if (int d = index_.launch_at[hi]; d >= 0) return index_.rendezvous_pos[static_cast<std::size_t>(d)];
    return hi + 1;
}

double MoveEvaluator::window_delta(const Built& built) const {
    const Instance& inst = cost_->instance();
    const auto& td = built.sol.truck_tour;
    const auto& dds = built.sol.drone_deliveries;

    auto& pos = pos_scratch_;
    pos.assign(static_cast<std::size_t>(inst.node_count()), -1);
    for (std::size_t p = 0; p < td.size(); ++p) pos[static_cast<std::size_t>(td[p])] = static_cast<int>(p);
    auto& launch_at = launch_scratch_;
    launch_at.assign(td.size(), -1);
    for (std::size_t d = 0; d < dds.size(); ++d) {
        int p = pos[static_cast<std::size_t>(dds[d].launch)];
        if (p >= 0) launch_at[static_cast<std::size_t>(p)] = static_cast<int>(d);
    }

    auto full = [&]() {
        ++fallbacks_;
        return segment_penalized_cost(built.sol, *cost_) - current_cost();
    };

    // Old-coordinate windows, merged when they touch.
    struct Window {
        int lo;
        int hi;
        int shift;
    };
    std::array<Window, 2> windows{};
    int count = 0;
    for (int c = 0; c < built.count; ++c) {
        const auto& cl = built.clusters[c];
        Window w{window_start(cl.lo), window_end(cl.hi), cl.shift};
        if (count > 0 && windows[count - 1].hi >= w.lo) {
            auto& prev = windows[count - 1];
            prev.lo = std::min(prev.lo, w.lo);
            prev.hi = std::max(prev.hi, w.hi);
            prev.shift += w.shift;
        } else {
            windows[count++] = w;
        }
    }

    double delta = 0.0;
    int shift_before = 0;
    for (int c = 0; c < count; ++c) {
        const auto& w = windows[c];
        int p = w.lo + shift_before;
        int end = w.hi + shift_before + w.shift;
        double fresh = 0.0;
        while (p < end) {
            int d = launch_at[static_cast<std::size_t>(p)];
            if (d < 0) {
                fresh += cost_->truck_arc(td[p], td[p + 1]);
                ++p;
                continue;
            }
            const auto& dd = dds[static_cast<std::size_t>(d)];
            int q = pos[static_cast<std::size_t>(dd.rendezvous)];
            if (q <= p || q > end) return full();
            double time = 0.0;
            double dist = 0.0;
            for (int r = p; r < q; ++r) {
                time += inst.truck_time(td[r], td[r + 1]);
                dist += inst.truck_dist(td[r], td[r + 1]);
            }
            fresh += cost_->drone_span(dd.launch, dd.drone, dd.rendezvous, time, dist,
                                       launch_at[static_cast<std::size_t>(q)] >= 0);
            p = q;
        }
        if (p != end) return full();
        if (!(fresh < kInadmissible)) return kInadmissible;
        delta += fresh - (cumulative_[w.hi] - cumulative_[w.lo]);
        shift_before += w.shift;
    }
    return delta;
}

std::optional<TspDSolution> MoveEvaluator::apply(const Move& move) const {
    if (!build(move, scratch_)) return std::nullopt;
    return scratch_.sol;
}

std::optional<double> MoveEvaluator::delta(const Move& move) const {
    if (!build(move, scratch_)) return std::nullopt;
    return window_delta(scratch_);
}

std::optional<std::pair<TspDSolution, double>> MoveEvaluator::try_move(const Move& move) const {
    if (!build(move, scratch_)) return std::nullopt;
    double d = window_delta(scratch_);
    return std::make_pair(scratch_.sol, d);
}

std::optional<TspDSolution> apply_move(const Move& move, const TspDSolution& sol, const Instance& inst) {
    SegmentCost cost(inst, PenaltyConfig{}, Objective::MinCost);
    return MoveEvaluator(sol, cost).apply(move);
}

std::optional<double> evaluate_move(const Move& move, const TspDSolution& sol, const Instance& inst,
                                    const PenaltyConfig& cfg, Objective obj) {
    SegmentCost cost(inst, cfg, obj);
    return MoveEvaluator(sol, cost).delta(move);
}

std::vector<Move> candidate_moves(const TspDSolution& sol, const TourIndex& idx, const Instance& inst,
                                  const GranularNeighbors& neighbors) {
    const auto& td = sol.truck_tour;
    const int last = static_cast<int>(td.size()) - 1;
    std::vector<Move> moves;
    auto pos = [&](NodeId v) { return idx.position_of[static_cast<std::size_t>(v)]; };
    auto on_tour_customer = [&](NodeId v) { return inst.is_customer(v) && pos(v) >= 0; };

    // Sortie endpoints reachable from an anchor without crossing another
    // sortie; stops once the truck leg exceeds the endurance.
    auto spans_from = [&](int anchor, bool forward, int skip, int ignore_sortie, auto&& emit) {
        auto foreign = [&](int e) { return e >= 0 && e != ignore_sortie; };
        double travel = 0.0;
        int prev = anchor;
        for (int p = forward ? anchor + 1 : anchor - 1; p >= 0 && p <= last; p += forward ? 1 : -1) {
            if (p == skip) continue;
            travel += forward ? inst.truck_time(td[prev], td[p]) : inst.truck_time(td[p], td[prev]);
            prev = p;
            if (forward) {
                if (!foreign(idx.rendezvous_at[p]) && !foreign(idx.inside_span[p])) emit(p);
            } else {
                if (!foreign(idx.launch_at[p]) && !foreign(idx.inside_span[p])) emit(p);
            }
            if (foreign(idx.launch_at[p]) || foreign(idx.rendezvous_at[p])) break;
            if (travel > inst.endurance) break;
        }
    };

    for (int a = 1; a < last; ++a) {
        NodeId u = td[a];
        const auto& near = neighbors.of(u);
        auto with_depot = [&](auto&& fn) {
            fn(inst.depot());
            for (NodeId v : near) fn(v);
        };
        if (idx.truck_only(a)) {
            with_depot([&](NodeId v) {
                if (pos(v) < 0) return;
                moves.push_back({MoveKind::RelocateOne, u, v});
                if (a + 1 < last && idx.truck_only(a + 1)) {
                    moves.push_back({MoveKind::RelocatePair, u, v});
                    moves.push_back({MoveKind::RelocatePairReversed, u, v});
                }
            });
        }
        for (NodeId v : near) {
            if (!on_tour_customer(v)) continue;
            moves.push_back({MoveKind::SwapOne, u, v});
            if (a + 1 < last && !idx.has_role(a + 1)) moves.push_back({MoveKind::SwapPairOne, u, v});
            if (a + 1 < last && pos(v) + 1 < last) moves.push_back({MoveKind::SwapPairPair, u, v});
        }
        with_depot([&](NodeId v) {
            int b = pos(v);
            if (b < 0) return;
            // Reverse between the two arcs leaving the earlier node.
            int lo = std::min(a, b);
            int hi = std::max(a, b);
            if (lo + 1 < hi && hi < last) {
                moves.push_back({MoveKind::TwoOpt, td[lo], td[hi]});
                moves.push_back({MoveKind::TwoOptKeepRoles, td[lo], td[hi]});
            }
        });
        if (!idx.has_role(a) && inst.is_drone_eligible(u)) {
            auto emit_pair = [&](int b, int c) { moves.push_back({MoveKind::DroneInsert, u, td[b], td[c]}); };
            with_depot([&](NodeId i) {
                int b = pos(i);
                if (b < 0 || idx.launch_at[b] >= 0 || idx.inside_span[b] >= 0) return;
                spans_from(b, true, a, -1, [&](int c) { emit_pair(b, c); });
            });
            auto ends = near;
            ends.push_back(inst.depot_end());
            for (NodeId k : ends) {
                int c = pos(k);
                if (c < 0 || idx.rendezvous_at[c] >= 0 || idx.inside_span[c] >= 0) continue;
                spans_from(c, false, a, -1, [&](int b) { emit_pair(b, c); });
            }
        }
    }

    for (std::size_t d = 0; d < sol.drone_deliveries.size(); ++d) {
        NodeId j = sol.drone_deliveries[d].drone;
        const auto& near = neighbors.of(j);
        moves.push_back({MoveKind::LaunchSwap, j});
        moves.push_back({MoveKind::RendezvousSwap, j});
        moves.push_back({MoveKind::LaunchRendezvousSwap, j});
        for (NodeId v : near) {
            if (on_tour_customer(v)) {
                moves.push_back({MoveKind::DroneTruckSwap, j, v});
            } else if (inst.is_customer(v)) {
                moves.push_back({MoveKind::DroneSwap, j, v});
            }
        }
        auto reinsert = [&](NodeId v) {
            int p = pos(v);
            if (p < 0) return;
            if (p < last) moves.push_back({MoveKind::DroneRemove, j, v});
            if (p > 0) moves.push_back({MoveKind::DroneRemove, j, td[p - 1]});
        };
        reinsert(inst.depot());
        for (NodeId v : near) reinsert(v);

        auto ds = static_cast<int>(d);
        auto emit = [&](int b, int c) { moves.push_back({MoveKind::DroneRelocate, j, td[b], td[c]}); };
        auto starts = near;
        starts.push_back(inst.depot());
        for (NodeId i : starts) {
            int b = pos(i);
            if (b < 0 || b == last) continue;
            spans_from(b, true, -1, ds, [&](int c) { emit(b, c); });
        }
        auto ends = near;
        ends.push_back(inst.depot_end());
        for (NodeId k : ends) {
            int c = pos(k);
            if (c <= 0) continue;
            spans_from(c, false, -1, ds, [&](int b) { emit(b, c); });
        }
    }
    return moves;
}

Move random_move(const TspDSolution& sol, const Instance& inst, Rng& rng) {
    Move move;
    move.kind = static_cast<MoveKind>(rng.between(1, kMoveKindCount));
    const auto& td = sol.truck_tour;
    auto any_tour_node = [&]() { return td[static_cast<std::size_t>(rng.index(td.size()))]; };
    bool sortie_move = move.kind >= MoveKind::DroneTruckSwap && move.kind != MoveKind::DroneInsert;
    if (sortie_move && !sol.drone_deliveries.empty()) {
        move.u = sol.drone_deliveries[static_cast<std::size_t>(rng.index(sol.drone_deliveries.size()))].drone;
    } else {
        move.u = any_tour_node();
    }
    if (move.kind == MoveKind::DroneSwap && !sol.drone_deliveries.empty()) {
        move.v = sol.drone_deliveries[static_cast<std::size_t>(rng.index(sol.drone_deliveries.size()))].drone;
    } else {
        move.v = any_tour_node();
    }
    move.w = any_tour_node();
    (void)inst;
    return move;
}

TspDSolution educate(TspDSolution sol, const Instance& inst, const PenaltyConfig& cfg, Objective obj,
                     const GranularNeighbors& neighbors, std::uint64_t seed, EducationStats* stats) {
    Rng rng(seed);
    SegmentCost cost(inst, cfg, obj);
    EducationStats local;
    bool improved = true;
    while (improved) {
        improved = false;
        ++local.rounds;
        auto evaluator = std::make_unique<MoveEvaluator>(sol, cost);
        auto moves = candidate_moves(sol, evaluator->index(), inst, neighbors);
        rng.shuffle(moves);
        for (const Move& move : moves) {
            ++local.evaluations;
            auto gain = evaluator->delta(move);
            if (!gain || !(*gain < -kImprovementTolerance)) continue;
            sol = *evaluator->apply(move);
            evaluator = std::make_unique<MoveEvaluator>(sol, cost);
            ++local.moves_applied;
            improved = true;
        }
    }
    if (stats) *stats = local;
    return sol;
}

}  // namespace tspd
