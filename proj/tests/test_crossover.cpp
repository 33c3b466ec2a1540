#include <gtest/gtest.h>

#include <numeric>

#include "support.hpp"
#include "tspd/crossover.hpp"
#include "tspd/split.hpp"

using namespace tspd;
using tspd::testing::random_giant_tour;
using tspd::testing::random_instance;

namespace {

constexpr std::array<CrossoverKind, 5> kAllKinds{CrossoverKind::DX, CrossoverKind::OX, CrossoverKind::PMX,
                                                 CrossoverKind::OBX, CrossoverKind::PBX};

/// Straight-line rewrite of the DX fill rule: kept nodes stay at their
/// parent-1 index, the rest follow parent 2 into the free indices.
std::vector<NodeId> reference_fill(const std::vector<NodeId>& p1, const std::vector<NodeId>& p2,
                                   const std::vector<NodeId>& kept) {
    std::vector<NodeId> child(p1.size(), 0);
    std::vector<NodeId> rest;
    for (NodeId v : p2) {
        if (std::find(kept.begin(), kept.end(), v) == kept.end()) rest.push_back(v);
    }
    std::size_t r = 0;
    for (std::size_t i = 0; i < p1.size(); ++i) {
        child[i] = std::find(kept.begin(), kept.end(), p1[i]) != kept.end() ? p1[i] : rest[r++];
    }
    return child;
}

}  // namespace

TEST(Crossover, DxWorkedExample) {
    GiantTour p1{{1, 2, 3, 4}};
    GiantTour p2{{4, 3, 2, 1}};
    EXPECT_EQ(keep_and_fill(p1, p2, {2, 3}).order, (std::vector<NodeId>{4, 2, 3, 1}));
    EXPECT_EQ(reference_fill(p1.order, p2.order, {2, 3}), (std::vector<NodeId>{4, 2, 3, 1}));
}

TEST(Crossover, KeepAndFillMatchesReference) {
    Rng rng(5);
    for (int trial = 0; trial < 2000; ++trial) {
        int n = 1 + rng.index(12);
        auto p1 = random_giant_tour(n, rng);
        auto p2 = random_giant_tour(n, rng);
        std::vector<NodeId> kept;
        for (NodeId v = 1; v <= n; ++v) {
            if (rng.chance(0.4)) kept.push_back(v);
        }
        EXPECT_EQ(keep_and_fill(p1, p2, kept).order, reference_fill(p1.order, p2.order, kept));
    }
}

TEST(Crossover, PmxWorkedExample) {
    // Cut over 1-based positions 2..3: child keeps 2,3 from P1; P2 contributes
    // 4 (mapped 4->2->... lands at index 4) and 5 (mapped 5->3 lands at index 0).
    GiantTour p1{{1, 2, 3, 4, 5}};
    GiantTour p2{{3, 4, 5, 1, 2}};
    EXPECT_EQ(partially_mapped_crossover(p1, p2, 1, 2).order, (std::vector<NodeId>{5, 2, 3, 1, 4}));
}

TEST(Crossover, OxFullCutAndWrap) {
    GiantTour p1{{1, 2, 3, 4, 5, 6}};
    GiantTour p2{{6, 5, 4, 3, 2, 1}};
    EXPECT_EQ(order_crossover(p1, p2, 0, 5), p1);
    // Keep 3,4 at indices 2..3; fill from index 4 onward with P2 read from index 4.
    EXPECT_EQ(order_crossover(p1, p2, 2, 3).order, (std::vector<NodeId>{6, 5, 3, 4, 2, 1}));
}

TEST(Crossover, ObxAndPbxExamples) {
    GiantTour p1{{1, 2, 3, 4, 5}};
    GiantTour p2{{5, 4, 3, 2, 1}};
    // OBX: P2's selected nodes {4, 2} (indices 1, 3) are imposed on P1 in P2 order.
    EXPECT_EQ(order_based_crossover(p1, p2, {false, true, false, true, false}).order,
              (std::vector<NodeId>{1, 4, 3, 2, 5}));
    // PBX: P1 keeps indices 0 and 4, the rest follow P2.
    EXPECT_EQ(position_based_crossover(p1, p2, {true, false, false, false, true}).order,
              (std::vector<NodeId>{1, 4, 3, 2, 5}));
}

TEST(Crossover, IdenticalParentsGiveParent) {
    Rng rng(3);
    auto inst = random_instance(12, 3);
    for (int trial = 0; trial < 200; ++trial) {
        auto p = random_giant_tour(12, rng);
        auto sol = split(p, inst, PenaltyConfig{}, Objective::MinCost);
        for (auto kind : kAllKinds) EXPECT_EQ(crossover(kind, p, p, sol, rng), p) << to_string(kind);
    }
}

TEST(Crossover, AlwaysPermutation) {
    Rng rng(9);
    auto inst = random_instance(15, 9);
    for (int trial = 0; trial < 4000; ++trial) {
        int n = 15;
        auto p1 = random_giant_tour(n, rng);
        auto p2 = random_giant_tour(n, rng);
        auto sol = split(p1, inst, PenaltyConfig{}, Objective::MinCost);
        for (auto kind : kAllKinds) {
            ASSERT_TRUE(is_permutation_of_customers(crossover(kind, p1, p2, sol, rng), n)) << to_string(kind);
        }
    }
}

TEST(Crossover, DxWithoutDeliveriesUsesTruckCut) {
    Rng rng(1);
    GiantTour p1{{1, 2, 3}};
    GiantTour p2{{3, 2, 1}};
    auto sol = truck_only_solution(p1, 3);
    for (int i = 0; i < 100; ++i) {
        auto child = crossover_dx(p1, p2, sol, rng);
        EXPECT_TRUE(is_permutation_of_customers(child, 3));
    }
}

TEST(Crossover, Names) {
    for (auto kind : kAllKinds) EXPECT_EQ(parse_crossover(to_string(kind)), kind);
    EXPECT_THROW(parse_crossover("cx"), std::invalid_argument);
}
