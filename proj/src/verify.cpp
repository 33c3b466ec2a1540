#include "tspd/verify.hpp"

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <numeric>
#include <sstream>

#include "tspd/bench.hpp"
#include "tspd/crossover.hpp"
#include "tspd/evaluation.hpp"
#include "tspd/local_search.hpp"
#include "tspd/oracle.hpp"
#include "tspd/restore.hpp"
#include "tspd/split.hpp"

namespace tspd {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

bool same_timing(const DeliveryTiming& a, const DeliveryTiming& b) {
    return a.launch_departure == b.launch_departure && a.drone_at_customer == b.drone_at_customer &&
           a.drone_at_rendezvous == b.drone_at_rendezvous && a.truck_at_rendezvous == b.truck_at_rendezvous &&
           a.truck_leg_time == b.truck_leg_time && a.drone_leg_time == b.drone_leg_time &&
           a.recover_truck == b.recover_truck && a.truck_wait == b.truck_wait && a.drone_wait == b.drone_wait &&
           a.truck_excess == b.truck_excess && a.drone_excess == b.drone_excess;
}

bool same_timeline(const Timeline& a, const Timeline& b) {
    if (a.truck_arrival != b.truck_arrival || a.effective != b.effective || a.departure != b.departure) return false;
    if (a.truck_end != b.truck_end || a.drone_end != b.drone_end) return false;
    if (a.deliveries.size() != b.deliveries.size()) return false;
    for (std::size_t d = 0; d < a.deliveries.size(); ++d) {
        if (!same_timing(a.deliveries[d], b.deliveries[d])) return false;
    }
    return true;
}

GiantTour random_tour(int n, Rng& rng) {
    GiantTour gt;
    gt.order.resize(static_cast<std::size_t>(n));
    std::iota(gt.order.begin(), gt.order.end(), 1);
    rng.shuffle(gt.order);
    return gt;
}

/// Instance with randomized geometry and endurance so that both feasible and
/// infeasible sorties occur.
Instance varied_instance(int n, Rng& rng) {
    GeneratorParams gen;
    constexpr std::array<double, 3> areas{10.0, 20.0, 40.0};
    constexpr std::array<double, 3> endurances{10.0, 20.0, 40.0};
    gen.area = areas[static_cast<std::size_t>(rng.index(areas.size()))];
    gen.endurance = endurances[static_cast<std::size_t>(rng.index(endurances.size()))];
    gen.drone_eligible_frac = 0.5 + 0.5 * rng.uniform();
    gen.truck_wait_fee = rng.uniform() * 2.0;
    gen.drone_wait_fee = rng.uniform() * 2.0;
    return generate_instance(n, rng.next(), gen);
}

constexpr std::array<RelaxMode, 4> kRelaxModes{RelaxMode::All, RelaxMode::Truck, RelaxMode::Drone, RelaxMode::None};
constexpr std::array<Objective, 2> kObjectives{Objective::MinCost, Objective::MinTime};

}  // namespace

TspDSolution random_structural_solution(const Instance& inst, Rng& rng, double sortie_chance) {
    GiantTour gt = random_tour(inst.n, rng);
    std::vector<NodeId> seq{inst.depot()};
    seq.insert(seq.end(), gt.order.begin(), gt.order.end());
    seq.push_back(inst.depot_end());
    const int last = static_cast<int>(seq.size()) - 1;

    TspDSolution sol;
    std::vector<bool> flown(seq.size(), false);
    int p = 0;
    while (p < last) {
        if (p + 2 <= last && !(p == 0 && last == 2) && rng.chance(sortie_chance)) {
            int len = rng.between(2, std::min(5, last - p));
            int m = rng.between(p + 1, p + len - 1);
            if (inst.is_drone_eligible(seq[static_cast<std::size_t>(m)])) {
                sol.drone_deliveries.push_back({seq[static_cast<std::size_t>(p)], seq[static_cast<std::size_t>(m)],
                                                seq[static_cast<std::size_t>(p + len)]});
                flown[static_cast<std::size_t>(m)] = true;
                p += len;
                continue;
            }
        }
        ++p;
    }
    for (std::size_t q = 0; q < seq.size(); ++q) {
        if (!flown[q]) sol.truck_tour.push_back(seq[q]);
    }
    return sol;
}

CheckResult check_split(int pairs, std::uint64_t seed) {
    auto start = Clock::now();
    CheckResult out{"split vs enumeration", true, {}, 0.0};
    Rng rng(seed);
    long comparisons = 0;
    for (int k = 0; k < pairs && out.passed; ++k) {
        int n = rng.between(1, kEnumerateSplitsMaxCustomers);
        Instance inst = varied_instance(n, rng);
        GiantTour gt = random_tour(n, rng);
        for (Objective obj : kObjectives) {
            for (double omega : {0.1, 1.0, 10.0}) {
                for (RelaxMode relax : kRelaxModes) {
                    PenaltyConfig cfg;
                    cfg.omega = omega;
                    cfg.relax = relax;
                    auto labelings = enumerate_splits(gt, inst, cfg, obj);
                    double best = kInadmissible;
                    for (const auto& l : labelings) best = std::min(best, l.phi);
                    TspDSolution s = split(gt, inst, cfg, obj);
                    auto phi = penalized_cost(s, inst, cfg, obj);
                    ++comparisons;
                    if (!validate_solution(s, inst).empty() || !phi || *phi != best) {
                        std::ostringstream msg;
                        msg << "pair " << k << " n=" << n << " obj=" << to_string(obj) << " omega=" << omega
                            << " relax=" << to_string(relax) << ": split " << (phi ? format_double(*phi) : "inadmissible")
                            << " vs enumeration " << format_double(best);
                        out.passed = false;
                        out.detail = msg.str();
                    }
                }
            }
        }
    }
    if (out.passed) out.detail = std::to_string(comparisons) + " comparisons";
    out.seconds = seconds_since(start);
    return out;
}

CheckResult check_timeline(int exhaustive_instances, int random_solutions, std::uint64_t seed) {
    auto start = Clock::now();
    CheckResult out{"walk vs event simulation", true, {}, 0.0};
    Rng rng(seed);
    long solutions = 0;
    PenaltyConfig all;
    for (int k = 0; k < exhaustive_instances && out.passed; ++k) {
        int n = 1 + k % 6;
        Instance inst = varied_instance(n, rng);
        GiantTour gt;
        for (int i = 1; i <= n; ++i) gt.order.push_back(i);
        do {
            for (const auto& l : enumerate_splits(gt, inst, all, Objective::MinTime)) {
                ++solutions;
                if (!same_timeline(simulate_timeline(l.solution, inst), simulate_events(l.solution, inst))) {
                    out.passed = false;
                    out.detail = "disagreement on " + to_string(l.solution);
                    break;
                }
            }
        } while (out.passed && std::next_permutation(gt.order.begin(), gt.order.end()));
    }
    Instance big = varied_instance(20, rng);
    for (int k = 0; k < random_solutions && out.passed; ++k) {
        if (k % 100 == 0) big = varied_instance(20, rng);
        TspDSolution sol = random_structural_solution(big, rng, 0.5);
        ++solutions;
        if (!same_timeline(simulate_timeline(sol, big), simulate_events(sol, big))) {
            out.passed = false;
            out.detail = "disagreement on " + to_string(sol);
        }
    }
    if (out.passed) out.detail = std::to_string(solutions) + " solutions";
    out.seconds = seconds_since(start);
    return out;
}

CheckResult check_move_deltas(long moves, std::uint64_t seed, double tolerance) {
    auto start = Clock::now();
    CheckResult out{"incremental move deltas", true, {}, 0.0};
    Rng rng(seed);
    std::array<long, kMoveKindCount> per_kind{};
    long done = 0;
    double worst = 0.0;
    while (done < moves && out.passed) {
        int n = rng.chance(0.5) ? 8 : 20;
        Instance inst = varied_instance(n, rng);
        for (Objective obj : kObjectives) {
            PenaltyConfig cfg;
            cfg.omega = std::array<double, 3>{0.1, 1.0, 10.0}[static_cast<std::size_t>(rng.index(3))];
            SegmentCost cost(inst, cfg, obj);
            for (int trial = 0; trial < 20 && out.passed; ++trial) {
                TspDSolution sol = random_structural_solution(inst, rng);
                MoveEvaluator eval(sol, cost);
                double before = evaluate(sol, inst, cfg, obj).penalized(cfg.omega);
                for (int attempt = 0; attempt < 60 && done < moves; ++attempt) {
                    Move move = random_move(sol, inst, rng);
                    auto result = eval.try_move(move);
                    if (!result) continue;
                    ++done;
                    ++per_kind[static_cast<std::size_t>(static_cast<int>(move.kind) - 1)];
                    double after = evaluate(result->first, inst, cfg, obj).penalized(cfg.omega);
                    double error = std::abs(result->second - (after - before));
                    worst = std::max(worst, error);
                    if (!(error <= tolerance) || !validate_solution(result->first, inst).empty()) {
                        out.passed = false;
                        out.detail = std::string(to_string(move.kind)) + " on " + to_string(sol) + ": error " +
                                     format_double(error);
                        break;
                    }
                }
            }
        }
    }
    if (out.passed) {
        auto missing = std::count(per_kind.begin(), per_kind.end(), 0L);
        if (missing > 0) {
            out.passed = false;
            out.detail = std::to_string(missing) + " neighborhoods never produced a legal move";
        } else {
            out.detail = std::to_string(done) + " moves, max error " + format_double(worst);
        }
    }
    out.seconds = seconds_since(start);
    return out;
}

CheckResult check_structure(long operations, std::uint64_t seed) {
    auto start = Clock::now();
    CheckResult out{"structural fuzz", true, {}, 0.0};
    Rng rng(seed);
    long done = 0;
    long violations = 0;
    long bad_chromosomes = 0;
    std::string first;
    constexpr std::array<CrossoverKind, 5> kinds{CrossoverKind::DX, CrossoverKind::OX, CrossoverKind::PMX,
                                                 CrossoverKind::OBX, CrossoverKind::PBX};
    while (done < operations) {
        int n = rng.between(1, 30);
        Instance inst = varied_instance(n, rng);
        PenaltyConfig cfg;
        cfg.relax = kRelaxModes[static_cast<std::size_t>(rng.index(kRelaxModes.size()))];
        Objective obj = kObjectives[static_cast<std::size_t>(rng.index(2))];
        GiantTour a = random_tour(n, rng);
        GiantTour b = random_tour(n, rng);
        TspDSolution sol = split(a, inst, cfg, obj);
        auto note = [&](bool ok_solution, bool ok_chromosome, const std::string& what) {
            ++done;
            if (!ok_solution) ++violations;
            if (!ok_chromosome) ++bad_chromosomes;
            if ((!ok_solution || !ok_chromosome) && first.empty()) first = what;
        };
        for (int step = 0; step < 200 && done < operations; ++step) {
            switch (rng.index(4)) {
                case 0: {
                    CrossoverKind kind = kinds[static_cast<std::size_t>(rng.index(kinds.size()))];
                    GiantTour child = crossover(kind, a, b, sol, rng);
                    note(true, is_permutation_of_customers(child, n), "crossover " + to_string(kind));
                    b = a;
                    a = child;
                    break;
                }
                case 1: {
                    sol = split(a, inst, cfg, obj);
                    note(validate_solution(sol, inst).empty(), true, "split of a giant tour");
                    break;
                }
                case 2: {
                    GiantTour g = restore(sol, rng.next());
                    note(true, is_permutation_of_customers(g, n), "restore of " + to_string(sol));
                    a = g;
                    break;
                }
                default: {
                    Move move = random_move(sol, inst, rng);
                    if (auto next = apply_move(move, sol, inst)) {
                        note(validate_solution(*next, inst).empty(), true,
                             std::string(to_string(move.kind)) + " on " + to_string(sol));
                        sol = std::move(*next);
                    } else {
                        note(true, true, "");
                    }
                    break;
                }
            }
        }
    }
    out.passed = violations == 0 && bad_chromosomes == 0;
    std::ostringstream msg;
    msg << done << " operations, " << violations << " solution violations, " << bad_chromosomes
        << " bad chromosomes";
    if (!first.empty()) msg << "; first: " << first;
    out.detail = msg.str();
    out.seconds = seconds_since(start);
    return out;
}

ExactComparison compare_with_exact(int instances, int n_min, int n_max, std::uint64_t first_seed, int seeds,
                                   Objective obj, const HgaParams& params, const GeneratorParams& gen) {
    ExactComparison out;
    for (int k = 0; k < instances; ++k) {
        int n = n_min + k % (n_max - n_min + 1);
        Instance inst = generate_instance(n, first_seed + static_cast<std::uint64_t>(k), gen);
        PenaltyConfig cfg;
        cfg.wait_fees = params.wait_fees;
        double optimum = exact_solve(inst, obj, cfg).value;
        double best = kInadmissible;
        for (int s = 1; s <= seeds; ++s) {
            HgaResult r = run_hga(inst, params, obj, static_cast<std::uint64_t>(s));
            out.slowest_run = std::max(out.slowest_run, r.stats.wall_seconds);
            if (r.status == RunStatus::Feasible) best = std::min(best, r.value);
        }
        ++out.instances;
        double gap = gap_percent(best, optimum);
        if (std::abs(best - optimum) <= 1e-9 * std::max(1.0, std::abs(optimum))) {
            ++out.matched;
        } else {
            out.worst_gap = std::max(out.worst_gap, gap);
            if (gap <= 1.0) ++out.within;
        }
    }
    return out;
}

}  // namespace tspd
