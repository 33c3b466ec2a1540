#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "support.hpp"
#include "tspd/restore.hpp"
#include "tspd/split.hpp"

using namespace tspd;
using tspd::testing::random_giant_tour;
using tspd::testing::random_instance;
using tspd::testing::random_solution;

TEST(Restore, NoDeliveriesDropsDepots) {
    TspDSolution sol{{0, 3, 1, 2, 4}, {}};
    EXPECT_EQ(restore(sol, 1).order, (std::vector<NodeId>{3, 1, 2}));
}

TEST(Restore, SingleSlotSpan) {
    TspDSolution sol{{0, 1, 3, 4}, {{1, 2, 3}}};
    for (std::uint64_t seed = 0; seed < 10; ++seed) EXPECT_EQ(restore(sol, seed).order, (std::vector<NodeId>{1, 2, 3}));
}

TEST(Restore, DepotEndpointsUseTourBoundaries) {
    TspDSolution sol{{0, 3, 4}, {{0, 1, 3}, {3, 2, 4}}};
    for (std::uint64_t seed = 0; seed < 10; ++seed) EXPECT_EQ(restore(sol, seed).order, (std::vector<NodeId>{1, 3, 2}));
}

TEST(Restore, SlotsAreUniform) {
    // j can land in any of the three gaps between launch 1 and rendezvous 4.
    TspDSolution sol{{0, 1, 2, 3, 4, 6}, {{1, 5, 4}}};
    std::vector<int> counts(3, 0);
    const int draws = 30000;
    for (int s = 0; s < draws; ++s) {
        auto gt = restore(sol, static_cast<std::uint64_t>(s));
        auto it = std::find(gt.order.begin(), gt.order.end(), 5);
        int slot = static_cast<int>(it - gt.order.begin()) - 1;
        ASSERT_GE(slot, 0);
        ASSERT_LT(slot, 3);
        ++counts[static_cast<std::size_t>(slot)];
    }
    for (int c : counts) EXPECT_NEAR(c, draws / 3.0, 4.0 * std::sqrt(draws * (1.0 / 3) * (2.0 / 3)));
}

TEST(Restore, PermutationAndOrderProperties) {
    for (std::uint64_t seed = 1; seed <= 200; ++seed) {
        int n = 3 + static_cast<int>(seed % 8);
        auto inst = random_instance(n, seed);
        Rng rng(seed);
        auto sol = random_solution(inst, rng, 0.5);
        auto gt = restore(sol, seed);
        ASSERT_TRUE(is_permutation_of_customers(gt, n));
        EXPECT_EQ(restore(sol, seed), gt);
        std::vector<int> at(static_cast<std::size_t>(n + 2), -1);
        for (std::size_t i = 0; i < gt.size(); ++i) at[static_cast<std::size_t>(gt[i])] = static_cast<int>(i) + 1;
        at[0] = 0;
        at[static_cast<std::size_t>(n + 1)] = n + 1;
        for (std::size_t p = 1; p < sol.truck_tour.size(); ++p) {
            EXPECT_LT(at[static_cast<std::size_t>(sol.truck_tour[p - 1])], at[static_cast<std::size_t>(sol.truck_tour[p])]);
        }
        for (const auto& dd : sol.drone_deliveries) {
            EXPECT_LT(at[static_cast<std::size_t>(dd.launch)], at[static_cast<std::size_t>(dd.drone)]);
            EXPECT_LT(at[static_cast<std::size_t>(dd.drone)], at[static_cast<std::size_t>(dd.rendezvous)]);
        }
        // The restored chromosome can always be decoded back into the same solution family.
        auto again = split(gt, inst, PenaltyConfig{}, Objective::MinCost);
        auto truck = truck_only_solution(gt, n);
        EXPECT_LE(*penalized_cost(again, inst, PenaltyConfig{}, Objective::MinCost),
                  *penalized_cost(truck, inst, PenaltyConfig{}, Objective::MinCost) + 1e-9);
        EXPECT_LE(*penalized_cost(again, inst, PenaltyConfig{}, Objective::MinCost),
                  *penalized_cost(sol, inst, PenaltyConfig{}, Objective::MinCost) + 1e-6);
    }
}
