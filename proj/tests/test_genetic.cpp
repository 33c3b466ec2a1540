#include <gtest/gtest.h>

#include <cmath>
#include <map>

#include "support.hpp"
#include "tspd/genetic.hpp"

using namespace tspd;
using tspd::testing::random_giant_tour;
using tspd::testing::random_instance;

namespace {

Individual member(std::vector<NodeId> order, double phi) {
    Individual ind;
    ind.chromosome.order = std::move(order);
    ind.objective = phi;
    ind.phi = phi;
    return ind;
}

HgaParams quick_params() {
    HgaParams p;
    p.iter_ni = 150;
    return p;
}

}  // namespace

TEST(Diversity, HammingDistance) {
    EXPECT_DOUBLE_EQ(chromosome_distance(GiantTour{{1, 2, 3, 4}}, GiantTour{{1, 2, 3, 4}}), 0.0);
    EXPECT_DOUBLE_EQ(chromosome_distance(GiantTour{{1, 2, 3, 4}}, GiantTour{{2, 3, 4, 1}}), 1.0);
    EXPECT_DOUBLE_EQ(chromosome_distance(GiantTour{{1, 2, 3, 4}}, GiantTour{{1, 3, 2, 4}}), 0.5);
}

TEST(Diversity, ClosestNeighbors) {
    EXPECT_EQ(close_neighbor_count(1, 0.2), 0);
    EXPECT_EQ(close_neighbor_count(2, 0.2), 1);
    EXPECT_EQ(close_neighbor_count(11, 0.2), 2);
    EXPECT_EQ(close_neighbor_count(40, 0.2), 8);
    Subpopulation pop{member({1, 2, 3, 4}, 0), member({1, 2, 4, 3}, 0), member({4, 3, 2, 1}, 0)};
    EXPECT_DOUBLE_EQ(diversity_contribution(0, pop, 1), 0.5);
    EXPECT_DOUBLE_EQ(diversity_contribution(0, pop, 2), 0.75);
    Subpopulation alone{member({1, 2}, 0)};
    EXPECT_DOUBLE_EQ(diversity_contribution(0, alone, 1), 1.0);
}

TEST(BiasedFitness, RankArithmetic) {
    HgaParams params;
    Subpopulation single{member({1, 2, 3}, 5)};
    update_biased_fitness(single, params);
    EXPECT_DOUBLE_EQ(single[0].bf, 0.0);

    // Equal fitness: the first member gets fit rank 0; the more diverse one dc 0.
    params.nb_elite = 1;
    Subpopulation pop{member({1, 2, 3, 4}, 7), member({1, 2, 3, 4}, 7), member({4, 3, 2, 1}, 7)};
    update_biased_fitness(pop, params);
    EXPECT_EQ(pop[0].fit_rank, 0);
    EXPECT_EQ(pop[1].fit_rank, 1);
    EXPECT_EQ(pop[2].div_rank, 0);
    double weight = 1.0 - 1.0 / 3.0;
    for (const auto& ind : pop) EXPECT_DOUBLE_EQ(ind.bf, ind.fit_rank + weight * ind.div_rank);

    // nbElite = population size: diversity weight vanishes.
    params.nb_elite = 3;
    update_biased_fitness(pop, params);
    for (const auto& ind : pop) EXPECT_DOUBLE_EQ(ind.bf, ind.fit_rank);
    params.nb_elite = 1;
    params.no_div = true;
    update_biased_fitness(pop, params);
    for (const auto& ind : pop) EXPECT_DOUBLE_EQ(ind.bf, ind.fit_rank);
}

TEST(Selection, TournamentFavorsLowerBf) {
    Subpopulation pop{member({1, 2}, 0), member({2, 1}, 5)};
    pop[0].bf = 0;
    pop[1].bf = 5;
    Rng rng(4);
    std::vector<const Individual*> pool{&pop[0], &pop[1]};
    int first = 0;
    for (int i = 0; i < 1000; ++i) first += &tournament(pool, rng) == &pop[0];
    // Only a draw of the worse member twice loses: probability 1/4.
    EXPECT_NEAR(first / 1000.0, 0.75, 0.05);

    Subpopulation one{member({1}, 0)};
    auto [a, b] = select_parents(one, Subpopulation{}, rng);
    EXPECT_EQ(a, b);
}

TEST(Selection, MatchesAnalyticTournamentDistribution) {
    // With distinct bf ranks r = 0..m-1, the winner has rank r with
    // probability (2(m - r) - 1) / m^2.
    const int m = 10;
    Subpopulation pop;
    for (int i = 0; i < m; ++i) {
        pop.push_back(member({1}, i));
        pop.back().bf = i;
    }
    std::vector<const Individual*> pool;
    for (const auto& ind : pop) pool.push_back(&ind);
    Rng rng(11);
    const int draws = 10000;
    std::vector<int> wins(m, 0);
    for (int i = 0; i < draws; ++i) ++wins[static_cast<std::size_t>(&tournament(pool, rng) - pop.data())];
    for (int r = 0; r < m; ++r) {
        double p = (2.0 * (m - r) - 1.0) / (m * m);
        double sd = std::sqrt(draws * p * (1 - p));
        EXPECT_NEAR(wins[static_cast<std::size_t>(r)], draws * p, 3 * sd) << "rank " << r;
    }
    for (int r = 1; r < m; ++r) EXPECT_GT(wins[static_cast<std::size_t>(r - 1)], wins[static_cast<std::size_t>(r)]);
}

TEST(Survivors, RemovesWorstOrClonesFirst) {
    HgaParams params;
    Subpopulation pop{member({1, 2, 3}, 1), member({2, 1, 3}, 2), member({3, 1, 2}, 9)};
    select_survivors(pop, 1, params);
    ASSERT_EQ(pop.size(), 2u);
    for (const auto& ind : pop) EXPECT_NE(ind.phi, 9);

    // A clone goes before a worse-ranked distinct member.
    Subpopulation clones{member({1, 2, 3}, 1), member({1, 2, 3}, 2), member({3, 1, 2}, 9)};
    select_survivors(clones, 1, params);
    ASSERT_EQ(clones.size(), 2u);
    EXPECT_NE(clones[0].chromosome, clones[1].chromosome);

    EXPECT_TRUE(is_clone(GiantTour{{1, 2, 3}}, GiantTour{{3, 2, 1}}));
    EXPECT_FALSE(is_clone(GiantTour{{1, 2, 3}}, GiantTour{{2, 1, 3}}));
}

TEST(Penalty, Adjustment) {
    EXPECT_DOUBLE_EQ(adjust_penalty(1.0, 0.3, 0.3), 1.0);
    EXPECT_DOUBLE_EQ(adjust_penalty(1.0, 0.0, 0.3), 1.2);
    EXPECT_DOUBLE_EQ(adjust_penalty(1.0, 1.0, 0.3), 0.85);
    double omega = 1.0;
    for (int i = 0; i < 5; ++i) omega = adjust_penalty(adjust_penalty(omega, 0.0, 0.3), 1.0, 0.3);
    EXPECT_NEAR(omega, std::pow(1.02, 5), 1e-12);
    EXPECT_DOUBLE_EQ(adjust_penalty(1e6, 0.0, 0.3), 1e6);
    EXPECT_DOUBLE_EQ(adjust_penalty(1e-3, 1.0, 0.3), 1e-3);
}

TEST(Initialization, CheapestInsertion) {
    auto inst = random_instance(10, 2);
    Rng rng(3);
    for (int i = 0; i < 60; ++i) EXPECT_TRUE(is_permutation_of_customers(randomized_cheapest_insertion(inst, Objective::MinCost, 3, rng), 10));

    // With k = 1 every insertion is the cheapest one. On a line through the
    // depot that keeps the round trip optimal: length twice the farthest point.
    std::vector<Point> coords;
    for (int i = 0; i <= 6; ++i) coords.push_back({static_cast<double>(i), 0.0});
    auto line = make_euclidean_instance(coords, std::vector<bool>(7, false), Instance{});
    for (std::uint64_t s = 0; s < 10; ++s) {
        Rng r(s);
        auto gt = randomized_cheapest_insertion(line, Objective::MinTime, 1, r);
        auto sol = truck_only_solution(gt, line.n);
        double length = 0;
        for (std::size_t p = 1; p < sol.truck_tour.size(); ++p) length += line.truck_dist(sol.truck_tour[p - 1], sol.truck_tour[p]);
        EXPECT_NEAR(length, 12.0, 1e-9) << to_string(sol);
        Rng again(s);
        EXPECT_EQ(randomized_cheapest_insertion(line, Objective::MinTime, 1, again), gt);
    }
}

TEST(Params, SetAndValidate) {
    HgaParams p;
    p.set("mu", "20");
    p.set("crossover", "pmx");
    p.set("relax", "drone");
    p.set("no_div", "true");
    p.set("time_limit", "2.5");
    EXPECT_EQ(p.mu, 20);
    EXPECT_EQ(p.crossover, CrossoverKind::PMX);
    EXPECT_EQ(p.relax, RelaxMode::Drone);
    EXPECT_TRUE(p.no_div);
    EXPECT_DOUBLE_EQ(p.time_limit, 2.5);
    EXPECT_THROW(p.set("nope", "1"), std::invalid_argument);
    EXPECT_THROW(p.set("mu", "1x"), std::invalid_argument);
    p.nb_elite = 30;
    EXPECT_THROW(p.validate(), std::invalid_argument);
    HgaParams q;
    q.no_inf = true;
    EXPECT_EQ(q.effective_relax(), RelaxMode::None);
    EXPECT_EQ(q.iter_div(), 750);
}

TEST(Hga, SingleCustomer) {
    auto inst = random_instance(1, 1, 10.0, 1.0);
    for (auto obj : {Objective::MinCost, Objective::MinTime}) {
        auto r = run_hga(inst, quick_params(), obj, 1);
        EXPECT_EQ(r.status, RunStatus::Feasible);
        EXPECT_EQ(r.best.truck_tour, (std::vector<NodeId>{0, 1, 2}));
    }
}

TEST(Hga, PopulationInvariantsAndDeterminism) {
    auto inst = random_instance(15, 21);
    HgaParams params = quick_params();
    params.max_iterations = 300;
    Hga hga(inst, params, Objective::MinCost, 5);
    hga.initialize();
    for (int it = 0; it < 300; ++it) {
        hga.iterate();
        for (const auto& ind : hga.feasible()) {
            ASSERT_TRUE(ind.feasible);
            ASSERT_TRUE(is_feasible(ind.decoded, inst));
            ASSERT_TRUE(is_permutation_of_customers(ind.chromosome, inst.n));
        }
        for (const auto& ind : hga.infeasible()) {
            ASSERT_FALSE(is_feasible(ind.decoded, inst));
            ASSERT_TRUE(is_permutation_of_customers(ind.chromosome, inst.n));
        }
        ASSERT_LT(hga.feasible().size(), static_cast<std::size_t>(params.mu + params.lambda));
        ASSERT_LT(hga.infeasible().size(), static_cast<std::size_t>(params.mu + params.lambda));
    }
    auto a = run_hga(inst, quick_params(), Objective::MinTime, 17);
    auto b = run_hga(inst, quick_params(), Objective::MinTime, 17);
    EXPECT_EQ(a.best, b.best);
    EXPECT_EQ(a.stats.best_trace, b.stats.best_trace);
}

TEST(Hga, BestTraceIsMonotone) {
    for (std::uint64_t seed = 1; seed <= 3; ++seed) {
        auto inst = random_instance(20, seed);
        auto params = quick_params();
        params.iter_ni = 100;
        params.iter_div_frac = 0.2;  // several diversifications
        auto r = run_hga(inst, params, Objective::MinCost, seed);
        EXPECT_GT(r.stats.diversifications, 0);
        for (std::size_t i = 1; i < r.stats.best_trace.size(); ++i) {
            ASSERT_LE(r.stats.best_trace[i], r.stats.best_trace[i - 1]);
        }
        EXPECT_NEAR(r.value, r.stats.best_trace.back(), 1e-9);
    }
}

TEST(Hga, DiversifyKeepsBest) {
    auto inst = random_instance(15, 4);
    Hga hga(inst, quick_params(), Objective::MinCost, 2);
    hga.initialize();
    for (int i = 0; i < 50; ++i) hga.iterate();
    ASSERT_TRUE(hga.best_feasible());
    double best = hga.best_feasible()->objective;
    hga.diversify();
    bool present = false;
    for (const auto& ind : hga.feasible()) present |= std::abs(ind.objective - best) < 1e-12;
    EXPECT_TRUE(present);
}

TEST(Hga, RepairRemovesOverlongSortie) {
    // One customer far off the truck's path with a sortie the drone cannot fly
    // within endurance; repair must drop it.
    std::vector<Point> coords{{0, 0}, {1, 0}, {30, 0}, {2, 0}};
    Instance params;
    params.truck_cost = 1.0;
    params.drone_cost = 1.0;
    auto inst = make_euclidean_instance(coords, {false, false, true, false}, params);
    HgaParams hp;
    Hga hga(inst, hp, Objective::MinCost, 1);
    Individual child;
    child.decoded = TspDSolution{{0, 1, 3, 4}, {{1, 2, 3}}};
    child.chromosome = GiantTour{{1, 2, 3}};
    ASSERT_FALSE(is_feasible(child.decoded, inst));
    auto fixed = hga.repair(child);
    EXPECT_TRUE(fixed.feasible);
    EXPECT_TRUE(fixed.decoded.drone_deliveries.empty());
}

TEST(Hga, RepairSucceedsSometimesOnRandomInstances) {
    long attempted = 0;
    long succeeded = 0;
    for (std::uint64_t seed = 1; seed <= 4; ++seed) {
        auto inst = random_instance(20, seed, 40.0, 0.9, 15.0);
        auto params = quick_params();
        params.iter_ni = 80;
        auto r = run_hga(inst, params, Objective::MinCost, seed);
        attempted += r.stats.repairs_attempted;
        succeeded += r.stats.repairs_succeeded;
    }
    EXPECT_GT(attempted, 0);
    EXPECT_GT(succeeded, 0);
}

TEST(Hga, InitialPopulationIsDiverse) {
    auto inst = random_instance(50, 8);
    HgaParams params;
    Hga hga(inst, params, Objective::MinCost, 3);
    hga.initialize();
    std::vector<const Individual*> all;
    for (const auto& ind : hga.feasible()) all.push_back(&ind);
    for (const auto& ind : hga.infeasible()) all.push_back(&ind);
    double total = 0;
    int pairs = 0;
    for (std::size_t i = 0; i < all.size(); ++i) {
        for (std::size_t j = i + 1; j < all.size(); ++j) {
            total += chromosome_distance(all[i]->chromosome, all[j]->chromosome);
            ++pairs;
        }
    }
    EXPECT_GT(total / pairs, 0.1);
}
