#include "tspd/crossover.hpp"

#include <algorithm>
#include <stdexcept>

namespace tspd {

namespace {

std::vector<bool> membership(const std::vector<NodeId>& nodes, std::size_t n) {
    std::vector<bool> in(n + 2, false);
    for (NodeId v : nodes) in[static_cast<std::size_t>(v)] = true;
    return in;
}

std::vector<bool> random_selection(std::size_t n, Rng& rng) {
    std::vector<bool> selected(n);
    for (std::size_t i = 0; i < n; ++i) selected[i] = rng.chance(0.5);
    return selected;
}

std::pair<int, int> random_cut(std::size_t n, Rng& rng) {
    int a = rng.index(n);
    int b = rng.index(n);
    if (a > b) std::swap(a, b);
    return {a, b};
}

}  // namespace

std::string to_string(CrossoverKind kind) {
    switch (kind) {
        case CrossoverKind::DX: return "dx";
        case CrossoverKind::OX: return "ox";
        case CrossoverKind::PMX: return "pmx";
        case CrossoverKind::OBX: return "obx";
        case CrossoverKind::PBX: return "pbx";
    }
    return "?";
}

CrossoverKind parse_crossover(const std::string& name) {
    for (auto kind : {CrossoverKind::DX, CrossoverKind::OX, CrossoverKind::PMX, CrossoverKind::OBX,
                      CrossoverKind::PBX}) {
        if (to_string(kind) == name) return kind;
    }
    throw std::invalid_argument("unknown crossover '" + name + "'");
}

GiantTour keep_and_fill(const GiantTour& p1, const GiantTour& p2, const std::vector<NodeId>& kept) {
    const std::size_t n = p1.size();
    auto keep = membership(kept, n);
    GiantTour child;
    child.order.assign(n, -1);
    for (std::size_t i = 0; i < n; ++i) {
        if (keep[static_cast<std::size_t>(p1[i])]) child.order[i] = p1[i];
    }
    std::size_t next = 0;
    for (NodeId v : p2.order) {
        if (keep[static_cast<std::size_t>(v)]) continue;
        while (child.order[next] >= 0) ++next;
        child.order[next] = v;
    }
    return child;
}

GiantTour crossover_dx(const GiantTour& p1, const GiantTour& p2, const TspDSolution& sol1, Rng& rng) {
    std::vector<NodeId> drone_nodes;
    if (sol1.drone_deliveries.size() >= 2) {
        std::vector<std::pair<std::ptrdiff_t, NodeId>> by_launch;
        for (const auto& dd : sol1.drone_deliveries) {
            auto it = std::find(sol1.truck_tour.begin(), sol1.truck_tour.end(), dd.launch);
            by_launch.emplace_back(it - sol1.truck_tour.begin(), dd.drone);
        }
        std::sort(by_launch.begin(), by_launch.end());
        for (const auto& [pos, j] : by_launch) drone_nodes.push_back(j);
    }

    bool truck_branch = rng.chance(0.5) || drone_nodes.size() < 2;
    const std::vector<NodeId>& source = truck_branch ? sol1.truck_tour : drone_nodes;
    int a = rng.index(source.size() - 1);
    int b = rng.between(a + 1, static_cast<int>(source.size()) - 1);

    std::vector<NodeId> kept;
    for (int i = a; i <= b; ++i) {
        NodeId v = source[static_cast<std::size_t>(i)];
        if (v >= 1 && v <= static_cast<NodeId>(p1.size())) kept.push_back(v);
    }
    return keep_and_fill(p1, p2, kept);
}

GiantTour order_crossover(const GiantTour& p1, const GiantTour& p2, int first, int last) {
    const auto n = static_cast<int>(p1.size());
    GiantTour child;
    child.order.assign(p1.size(), -1);
    std::vector<bool> used(p1.size() + 2, false);
    for (int i = first; i <= last; ++i) {
        child.order[i] = p1[i];
        used[static_cast<std::size_t>(p1[i])] = true;
    }
    int write = (last + 1) % n;
    for (int step = 0; step < n; ++step) {
        NodeId v = p2[static_cast<std::size_t>((last + 1 + step) % n)];
        if (used[static_cast<std::size_t>(v)]) continue;
        child.order[write] = v;
        write = (write + 1) % n;
    }
    return child;
}

GiantTour partially_mapped_crossover(const GiantTour& p1, const GiantTour& p2, int first, int last) {
    const std::size_t n = p1.size();
    GiantTour child;
    child.order.assign(n, -1);
    std::vector<int> pos_in_p2(n + 2, -1);
    for (std::size_t i = 0; i < n; ++i) pos_in_p2[static_cast<std::size_t>(p2[i])] = static_cast<int>(i);
    std::vector<bool> used(n + 2, false);
    for (int i = first; i <= last; ++i) {
        child.order[i] = p1[i];
        used[static_cast<std::size_t>(p1[i])] = true;
    }
    for (int i = first; i <= last; ++i) {
        NodeId v = p2[i];
        if (used[static_cast<std::size_t>(v)]) continue;
        int pos = i;
        while (pos >= first && pos <= last) pos = pos_in_p2[static_cast<std::size_t>(p1[pos])];
        child.order[pos] = v;
        used[static_cast<std::size_t>(v)] = true;
    }
    for (std::size_t i = 0; i < n; ++i) {
        if (child.order[i] < 0) child.order[i] = p2[i];
    }
    return child;
}

GiantTour order_based_crossover(const GiantTour& p1, const GiantTour& p2,
                                const std::vector<bool>& selected) {
    const std::size_t n = p1.size();
    std::vector<NodeId> imposed;
    for (std::size_t i = 0; i < n; ++i) {
        if (selected[i]) imposed.push_back(p2[i]);
    }
    auto chosen = membership(imposed, n);
    GiantTour child = p1;
    std::size_t next = 0;
    for (std::size_t i = 0; i < n; ++i) {
        if (chosen[static_cast<std::size_t>(p1[i])]) child.order[i] = imposed[next++];
    }
    return child;
}

GiantTour position_based_crossover(const GiantTour& p1, const GiantTour& p2,
                                   const std::vector<bool>& selected) {
    std::vector<NodeId> kept;
    for (std::size_t i = 0; i < p1.size(); ++i) {
        if (selected[i]) kept.push_back(p1[i]);
    }
    return keep_and_fill(p1, p2, kept);
}

GiantTour crossover_classical(CrossoverKind kind, const GiantTour& p1, const GiantTour& p2, Rng& rng) {
    if (p1.size() == 0) return p1;
    switch (kind) {
        case CrossoverKind::OX: {
            auto [a, b] = random_cut(p1.size(), rng);
            return order_crossover(p1, p2, a, b);
        }
        case CrossoverKind::PMX: {
            auto [a, b] = random_cut(p1.size(), rng);
            return partially_mapped_crossover(p1, p2, a, b);
        }
        case CrossoverKind::OBX:
            return order_based_crossover(p1, p2, random_selection(p1.size(), rng));
        case CrossoverKind::PBX:
            return position_based_crossover(p1, p2, random_selection(p1.size(), rng));
        case CrossoverKind::DX:
            break;
    }
    throw std::invalid_argument("crossover_classical: DX needs the decoded parent");
}

GiantTour crossover(CrossoverKind kind, const GiantTour& p1, const GiantTour& p2,
                    const TspDSolution& sol1, Rng& rng) {
    if (kind == CrossoverKind::DX) return crossover_dx(p1, p2, sol1, rng);
    return crossover_classical(kind, p1, p2, rng);
}

}  // namespace tspd
