#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <functional>

#include "support.hpp"
#include "tspd/genetic.hpp"
#include "tspd/oracle.hpp"

using namespace tspd;
using tspd::testing::random_giant_tour;
using tspd::testing::random_instance;
using tspd::testing::random_solution;

namespace {

// Independent count of order-preserving labelings: a truck arc from p, or a
// span p..b with one eligible interior drone node.
long count_labelings(const std::vector<bool>& eligible_at, int p, int last) {
    if (p == last) return 1;
    long total = count_labelings(eligible_at, p + 1, last);
    for (int b = p + 2; b <= last; ++b) {
        if (p == 0 && b == last && last == 2) continue;
        long drones = 0;
        for (int m = p + 1; m < b; ++m) drones += eligible_at[static_cast<std::size_t>(m)];
        total += drones * count_labelings(eligible_at, b, last);
    }
    return total;
}

PenaltyConfig strict() {
    PenaltyConfig cfg;
    cfg.relax = RelaxMode::None;
    return cfg;
}

}  // namespace

TEST(EnumerateSplits, SingleCustomerHasOneLabeling) {
    auto inst = random_instance(1, 3, 5.0, 1.0, 100.0);
    auto all = enumerate_splits(GiantTour{{1}}, inst, PenaltyConfig{}, Objective::MinCost);
    ASSERT_EQ(all.size(), 1u);
    EXPECT_EQ(all[0].solution.truck_tour, (std::vector<NodeId>{0, 1, 2}));
}

TEST(EnumerateSplits, CountMatchesRecursiveCounter) {
    for (int n = 1; n <= 7; ++n) {
        for (double share : {1.0, 0.5}) {
            auto inst = random_instance(n, static_cast<std::uint64_t>(n), 10.0, share, 1e9);
            Rng rng(static_cast<std::uint64_t>(n) + 40);
            auto gt = random_giant_tour(n, rng);
            std::vector<bool> eligible_at{false};
            for (NodeId v : gt.order) eligible_at.push_back(inst.is_drone_eligible(v));
            eligible_at.push_back(false);
            auto all = enumerate_splits(gt, inst, PenaltyConfig{}, Objective::MinTime);
            EXPECT_EQ(static_cast<long>(all.size()), count_labelings(eligible_at, 0, n + 1)) << "n=" << n;
            bool has_all_truck = std::any_of(all.begin(), all.end(), [](const Labeling& l) {
                return l.solution.drone_deliveries.empty();
            });
            EXPECT_TRUE(has_all_truck);
            for (const auto& l : all) {
                ASSERT_TRUE(validate_solution(l.solution, inst).empty()) << to_string(l.solution);
            }
        }
    }
    // n = 3, all eligible, counted by hand: 5 + 2 + 2 + 3.
    std::vector<bool> three(5, true);
    three.front() = three.back() = false;
    EXPECT_EQ(count_labelings(three, 0, 4), 12);
}

TEST(EnumerateSplits, PhiMatchesPenalizedCost) {
    auto inst = random_instance(6, 9);
    Rng rng(2);
    PenaltyConfig cfg;
    cfg.omega = 3.5;
    auto gt = random_giant_tour(6, rng);
    for (const auto& l : enumerate_splits(gt, inst, cfg, Objective::MinCost)) {
        auto phi = penalized_cost(l.solution, inst, cfg, Objective::MinCost);
        ASSERT_TRUE(phi);
        EXPECT_DOUBLE_EQ(*phi, l.phi);
    }
}

TEST(EnumerateSplits, SizeGuard) {
    auto inst = random_instance(8, 1);
    Rng rng(1);
    EXPECT_THROW(enumerate_splits(random_giant_tour(8, rng), inst, PenaltyConfig{}, Objective::MinCost),
                 SizeGuardError);
}

TEST(ExactSolve, SingleCustomer) {
    auto inst = random_instance(1, 5, 10.0, 1.0);
    for (auto obj : {Objective::MinCost, Objective::MinTime}) {
        auto r = exact_solve(inst, obj);
        EXPECT_EQ(r.solution.truck_tour, (std::vector<NodeId>{0, 1, 2}));
        EXPECT_DOUBLE_EQ(r.value, evaluate(r.solution, inst, PenaltyConfig{}, obj).objective);
    }
}

TEST(ExactSolve, MatchesPermutationEnumeration) {
    // Brute force: every permutation, every labeling, feasible ones only.
    for (int n = 2; n <= 6; ++n) {
        for (std::uint64_t seed = 1; seed <= 10; ++seed) {
            auto inst = random_instance(n, seed * 7 + static_cast<std::uint64_t>(n));
            for (auto obj : {Objective::MinCost, Objective::MinTime}) {
                GiantTour gt;
                for (int i = 1; i <= n; ++i) gt.order.push_back(i);
                double best = kInadmissible;
                do {
                    for (const auto& l : enumerate_splits(gt, inst, strict(), obj)) best = std::min(best, l.phi);
                } while (std::next_permutation(gt.order.begin(), gt.order.end()));
                auto r = exact_solve(inst, obj);
                EXPECT_NEAR(r.value, best, 1e-9 * std::max(1.0, best)) << "n=" << n << " seed=" << seed;
                EXPECT_TRUE(validate_solution(r.solution, inst).empty());
                EXPECT_TRUE(is_feasible(r.solution, inst));
                EXPECT_DOUBLE_EQ(r.value, evaluate(r.solution, inst, PenaltyConfig{}, obj).objective);
            }
        }
    }
}

TEST(ExactSolve, DroneUsedOnlyWhenItPays) {
    // A far eligible customer with generous endurance: a sortie beats both
    // truck orders under a cheap drone.
    std::vector<Point> coords{{0, 0}, {4, 0}, {2, 6}};
    Instance params;
    params.endurance = 100.0;
    params.truck_cost = 10.0;
    params.drone_cost = 0.1;
    auto inst = make_euclidean_instance(coords, {false, false, true}, params);
    auto r = exact_solve(inst, Objective::MinCost);
    ASSERT_EQ(r.solution.drone_deliveries.size(), 1u);
    EXPECT_EQ(r.solution.drone_deliveries[0].drone, 2);
    double truck_only = std::min(evaluate({{0, 1, 2, 3}, {}}, inst, PenaltyConfig{}, Objective::MinCost).objective,
                                 evaluate({{0, 2, 1, 3}, {}}, inst, PenaltyConfig{}, Objective::MinCost).objective);
    EXPECT_LT(r.value, truck_only);

    params.drone_cost = 1000.0;
    auto pricey = make_euclidean_instance(coords, {false, false, true}, params);
    EXPECT_TRUE(exact_solve(pricey, Objective::MinCost).solution.drone_deliveries.empty());
}

TEST(ExactSolve, LowerBoundsHeuristic) {
    for (std::uint64_t seed = 1; seed <= 3; ++seed) {
        auto inst = random_instance(7, seed + 100);
        for (auto obj : {Objective::MinCost, Objective::MinTime}) {
            auto exact = exact_solve(inst, obj);
            HgaParams params;
            params.iter_ni = 200;
            auto heuristic = run_hga(inst, params, obj, seed);
            ASSERT_EQ(heuristic.status, RunStatus::Feasible);
            EXPECT_LE(exact.value, heuristic.value + 1e-9);
            // Small instances are easy for the full search.
            EXPECT_NEAR(exact.value, heuristic.value, 1e-6 * std::max(1.0, exact.value));
            Rng rng(seed);
            for (int i = 0; i < 50; ++i) {
                auto sol = random_solution(inst, rng);
                if (!is_feasible(sol, inst)) continue;
                EXPECT_LE(exact.value, evaluate(sol, inst, PenaltyConfig{}, obj).objective + 1e-9);
            }
        }
    }
}

TEST(ExactSolve, SizeGuard) {
    EXPECT_THROW(exact_solve(random_instance(9, 1), Objective::MinCost), SizeGuardError);
}

TEST(Events, AgreeWithTimelineWalk) {
    for (std::uint64_t seed = 1; seed <= 100; ++seed) {
        auto inst = random_instance(12, seed);
        Rng rng(seed);
        auto sol = random_solution(inst, rng, 0.5);
        auto a = simulate_timeline(sol, inst);
        auto b = simulate_events(sol, inst);
        ASSERT_EQ(a.effective, b.effective);
        ASSERT_EQ(a.departure, b.departure);
        ASSERT_EQ(a.truck_end, b.truck_end);
        for (std::size_t d = 0; d < a.deliveries.size(); ++d) {
            ASSERT_EQ(a.deliveries[d].drone_at_rendezvous, b.deliveries[d].drone_at_rendezvous);
            ASSERT_EQ(a.deliveries[d].truck_excess, b.deliveries[d].truck_excess);
            ASSERT_EQ(a.deliveries[d].drone_excess, b.deliveries[d].drone_excess);
        }
    }
}
