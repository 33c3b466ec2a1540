#include <gtest/gtest.h>

#include <algorithm>

#include "support.hpp"
#include "tspd/evaluation.hpp"
#include "tspd/oracle.hpp"

using namespace tspd;
using tspd::testing::random_instance;
using tspd::testing::random_solution;

namespace {

/// Hand-built instance: explicit matrices over nodes 0..n+1.
Instance explicit_instance(int n) {
    Instance inst;
    inst.n = n;
    auto size = static_cast<std::size_t>(n + 2);
    inst.truck_dist = Matrix(size);
    inst.truck_time = Matrix(size);
    inst.drone_dist = Matrix(size);
    inst.drone_time = Matrix(size);
    inst.drone_eligible.assign(size, false);
    for (int i = 1; i <= n; ++i) inst.drone_eligible[static_cast<std::size_t>(i)] = true;
    return inst;
}

void set_both(Matrix& m, NodeId a, NodeId b, double v) {
    m(a, b) = v;
    m(b, a) = v;
}

}  // namespace

TEST(Timeline, TruckOnlyChain) {
    auto inst = explicit_instance(1);
    set_both(inst.truck_time, 0, 1, 10);
    set_both(inst.truck_time, 1, 2, 10);
    TspDSolution sol{{0, 1, 2}, {}};
    auto tl = simulate_timeline(sol, inst);
    EXPECT_DOUBLE_EQ(tl.effective.back(), 20.0);
    EXPECT_DOUBLE_EQ(completion_time(sol, inst), 20.0);
    EXPECT_TRUE(is_feasible(sol, inst));
}

TEST(Timeline, DepotLaunchWaitsForTruck) {
    auto inst = explicit_instance(2);
    set_both(inst.truck_time, 0, 1, 15);
    set_both(inst.truck_time, 1, 3, 15);
    set_both(inst.drone_time, 0, 2, 5);
    set_both(inst.drone_time, 2, 1, 5);
    TspDSolution sol{{0, 1, 3}, {{0, 2, 1}}};
    auto tl = simulate_timeline(sol, inst);
    const auto& dt = tl.deliveries[0];
    EXPECT_DOUBLE_EQ(dt.launch_departure, 1.0);
    EXPECT_DOUBLE_EQ(dt.drone_at_rendezvous, 11.0);
    EXPECT_DOUBLE_EQ(dt.truck_at_rendezvous, 16.0);
    EXPECT_DOUBLE_EQ(dt.drone_wait, 5.0);
    EXPECT_DOUBLE_EQ(dt.truck_wait, 0.0);
    EXPECT_DOUBLE_EQ(tl.effective[1], 17.0);
    EXPECT_DOUBLE_EQ(dt.truck_excess, 0.0);
    EXPECT_DOUBLE_EQ(completion_time(sol, inst), 32.0);

    // Even with a tiny endurance the truck leg from the depot is exempt.
    inst.endurance = 3.0;
    tl = simulate_timeline(sol, inst);
    EXPECT_DOUBLE_EQ(tl.deliveries[0].truck_excess, 0.0);
    EXPECT_DOUBLE_EQ(tl.deliveries[0].drone_excess, 5.0 + 5.0 + 1.0 - 3.0);
}

TEST(Timeline, CustomerLaunchExcessAndRelaunch) {
    auto inst = explicit_instance(4);
    set_both(inst.truck_time, 0, 1, 2);
    set_both(inst.truck_time, 1, 3, 4);
    set_both(inst.truck_time, 3, 5, 3);
    set_both(inst.drone_time, 1, 2, 2);
    set_both(inst.drone_time, 2, 3, 2);
    set_both(inst.drone_time, 3, 4, 1);
    set_both(inst.drone_time, 4, 5, 1);
    inst.endurance = 3.0;
    TspDSolution sol{{0, 1, 3, 5}, {{1, 2, 3}, {3, 4, 5}}};
    auto tl = simulate_timeline(sol, inst);
    const auto& first = tl.deliveries[0];
    // Relaunch at 3: recovery counts s_R + s_L.
    EXPECT_DOUBLE_EQ(first.recover_truck, 2.0);
    EXPECT_DOUBLE_EQ(first.truck_excess, 4.0 + 2.0 - 3.0);
    EXPECT_DOUBLE_EQ(first.drone_excess, 2.0 + 2.0 + 1.0 - 3.0);
    const auto& second = tl.deliveries[1];
    EXPECT_DOUBLE_EQ(second.recover_truck, 1.0);
    EXPECT_DOUBLE_EQ(second.truck_excess, 3.0 + 1.0 - 3.0);
    EXPECT_DOUBLE_EQ(second.drone_excess, 0.0);
    // t: 0 -> depart 0, arrive 1 at 2, launch departs 3, truck at 3 at 7, drone at 7.
    EXPECT_DOUBLE_EQ(tl.effective[1], 2.0);
    EXPECT_DOUBLE_EQ(tl.effective[2], 8.0);
    EXPECT_DOUBLE_EQ(tl.departure[2], 9.0);
    EXPECT_DOUBLE_EQ(tl.effective[3], 13.0);
    EXPECT_FALSE(is_feasible(sol, inst));
}

TEST(OperationalCost, TruckOnlyAndZeroWait) {
    auto inst = random_instance(3, 4);
    inst.truck_cost = 3.0;
    inst.drone_cost = 0.5;
    TspDSolution truck{{0, 1, 2, 3, 4}, {}};
    double length = inst.truck_dist(0, 1) + inst.truck_dist(1, 2) + inst.truck_dist(2, 3) + inst.truck_dist(3, 4);
    EXPECT_NEAR(operational_cost(truck, inst), 3.0 * length, 1e-12);

    auto eq = random_instance(2, 5, 20.0, 1.0);
    eq.truck_time(0, 1) = eq.truck_time(1, 0) = 4.0;
    eq.drone_time(0, 2) = eq.drone_time(2, 0) = 2.0;
    eq.drone_time(2, 1) = eq.drone_time(1, 2) = 2.0;
    TspDSolution one{{0, 1, 3}, {{0, 2, 1}}};
    double expected = eq.truck_cost * (eq.truck_dist(0, 1) + eq.truck_dist(1, 3)) +
                      eq.drone_cost * (eq.drone_dist(0, 2) + eq.drone_dist(2, 1));
    EXPECT_NEAR(operational_cost(one, eq), expected, 1e-12);
}

TEST(OperationalCost, WaitFeeConventions) {
    auto inst = explicit_instance(2);
    set_both(inst.truck_time, 0, 1, 15);
    set_both(inst.truck_time, 1, 3, 15);
    set_both(inst.drone_time, 0, 2, 5);
    set_both(inst.drone_time, 2, 1, 5);
    inst.truck_wait_fee = 2.0;  // alpha
    inst.drone_wait_fee = 7.0;  // beta
    TspDSolution sol{{0, 1, 3}, {{0, 2, 1}}};
    // The drone waits 5 minutes, the truck does not wait.
    EXPECT_DOUBLE_EQ(operational_cost(sol, inst, WaitFeeConvention::AsWritten), 2.0 * 5.0);
    EXPECT_DOUBLE_EQ(operational_cost(sol, inst, WaitFeeConvention::AsNamed), 7.0 * 5.0);
}

TEST(PenalizedCost, MinCostPenaltyTerm) {
    auto inst = explicit_instance(3);
    set_both(inst.truck_time, 0, 1, 1);
    set_both(inst.truck_time, 1, 3, 22);
    set_both(inst.truck_time, 3, 4, 1);
    set_both(inst.drone_time, 1, 2, 3);
    set_both(inst.drone_time, 2, 3, 3);
    inst.truck_cost = 1.0;
    inst.drone_cost = 1.0;
    TspDSolution sol{{0, 1, 3, 4}, {{1, 2, 3}}};
    // truck_excess = 22 + 1 - 20 = 3
    PenaltyConfig cfg;
    cfg.omega = 1.0;
    auto ev = evaluate(sol, inst, cfg, Objective::MinCost);
    EXPECT_DOUBLE_EQ(ev.truck_excess, 3.0);
    EXPECT_NEAR(*penalized_cost(sol, inst, cfg, Objective::MinCost), ev.objective + 3.0 * (2.0 / 3.0), 1e-12);
    cfg.relax = RelaxMode::Drone;
    EXPECT_FALSE(penalized_cost(sol, inst, cfg, Objective::MinCost));
    cfg.relax = RelaxMode::Truck;
    EXPECT_TRUE(penalized_cost(sol, inst, cfg, Objective::MinCost));
    cfg.relax = RelaxMode::None;
    EXPECT_FALSE(penalized_cost(sol, inst, cfg, Objective::MinCost));
}

TEST(PenalizedCost, LinearInOmegaAndFeasibilityAgreement) {
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        auto inst = random_instance(10, seed, 30.0, 0.9, 15.0);
        Rng rng(seed);
        auto sol = random_solution(inst, rng, 0.5);
        for (auto obj : {Objective::MinCost, Objective::MinTime}) {
            PenaltyConfig one;
            PenaltyConfig two;
            two.omega = 2.0;
            double p1 = *penalized_cost(sol, inst, one, obj);
            double p2 = *penalized_cost(sol, inst, two, obj);
            auto ev = evaluate(sol, inst, one, obj);
            EXPECT_NEAR(p2 - p1, ev.violation, 1e-9);
            EXPECT_GE(p2, p1);
            EXPECT_EQ(is_feasible(sol, inst), p1 == ev.objective && p2 == ev.objective);
            // Reordering deliveries changes nothing.
            auto shuffled = sol;
            rng.shuffle(shuffled.drone_deliveries);
            EXPECT_DOUBLE_EQ(*penalized_cost(shuffled, inst, one, obj), p1);
        }
    }
}

TEST(PenalizedCost, MinTimePenaltyUsesLargerExcess) {
    auto inst = explicit_instance(3);
    set_both(inst.truck_time, 0, 1, 1);
    set_both(inst.truck_time, 1, 3, 22);
    set_both(inst.truck_time, 3, 4, 1);
    set_both(inst.drone_time, 1, 2, 10);
    set_both(inst.drone_time, 2, 3, 10);
    TspDSolution sol{{0, 1, 3, 4}, {{1, 2, 3}}};
    PenaltyConfig cfg;
    cfg.omega = 10.0;
    auto ev = evaluate(sol, inst, cfg, Objective::MinTime);
    EXPECT_DOUBLE_EQ(ev.truck_excess, 3.0);
    EXPECT_DOUBLE_EQ(ev.drone_excess, 1.0);
    EXPECT_DOUBLE_EQ(ev.violation, 3.0);
    EXPECT_DOUBLE_EQ(ev.objective, 1.0 + 1.0 + 22.0 + 1.0 + 1.0);
}

TEST(SegmentCost, SumMatchesFullEvaluation) {
    for (std::uint64_t seed = 1; seed <= 30; ++seed) {
        auto inst = random_instance(12, seed, 25.0, 0.7, 18.0);
        Rng rng(seed * 3);
        auto sol = random_solution(inst, rng, 0.5);
        for (auto obj : {Objective::MinCost, Objective::MinTime}) {
            for (auto fees : {WaitFeeConvention::AsWritten, WaitFeeConvention::AsNamed}) {
                PenaltyConfig cfg;
                cfg.omega = 2.5;
                cfg.wait_fees = fees;
                SegmentCost cost(inst, cfg, obj);
                EXPECT_NEAR(segment_penalized_cost(sol, cost), *penalized_cost(sol, inst, cfg, obj), 1e-9);
            }
        }
    }
}

TEST(Timeline, WalkAgreesWithEventSimulation) {
    for (std::uint64_t seed = 1; seed <= 200; ++seed) {
        auto inst = random_instance(15, seed, 30.0, 0.8);
        Rng rng(seed);
        auto sol = random_solution(inst, rng, 0.5);
        auto walk = simulate_timeline(sol, inst);
        auto events = simulate_events(sol, inst);
        ASSERT_EQ(walk.effective, events.effective) << to_string(sol);
        ASSERT_EQ(walk.truck_arrival, events.truck_arrival);
        ASSERT_EQ(walk.departure, events.departure);
        for (std::size_t d = 0; d < walk.deliveries.size(); ++d) {
            const auto& a = walk.deliveries[d];
            const auto& b = events.deliveries[d];
            ASSERT_EQ(a.drone_at_rendezvous, b.drone_at_rendezvous);
            ASSERT_EQ(a.truck_wait, b.truck_wait);
            ASSERT_EQ(a.drone_wait, b.drone_wait);
            ASSERT_EQ(a.truck_excess, b.truck_excess);
            ASSERT_EQ(a.drone_excess, b.drone_excess);
            // Waits are complementary.
            ASSERT_EQ(a.truck_wait * a.drone_wait, 0.0);
        }
    }
}

TEST(Names, RoundTrip) {
    for (auto m : {RelaxMode::All, RelaxMode::Truck, RelaxMode::Drone, RelaxMode::None}) {
        EXPECT_EQ(parse_relax(to_string(m)), m);
    }
    EXPECT_THROW(parse_relax("some"), std::invalid_argument);
    EXPECT_EQ(parse_wait_fees("as-named"), WaitFeeConvention::AsNamed);
}
