#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "tspd/genetic.hpp"
#include "tspd/model.hpp"

namespace tspd {

/// Worker count from TSPD_WORKERS, else the hardware concurrency (at least 1).
int default_worker_count();

/// A named parameter variant, e.g. an ablation or a crossover choice.
struct BenchConfig {
    std::string label;
    HgaParams params;
};

/// Ablation variants by name: standard, no-inf, no-div, no-repair,
/// no-restore, no-all, relax-truck, relax-drone, relax-none.
BenchConfig ablation_config(const std::string& name, const HgaParams& base);

struct RunRecord {
    std::string instance;
    Objective objective = Objective::MinCost;
    std::string config;
    std::string crossover;
    std::string relax;
    std::string ablations;
    std::uint64_t seed = 0;
    std::string status;  ///< feasible, infeasible or error
    std::string error;
    double value = 0.0;
    double wall_seconds = 0.0;
    long iterations = 0;
    std::vector<double> best_trace;
};

struct Aggregate {
    std::string instance;
    Objective objective = Objective::MinCost;
    std::string config;
    int runs = 0;      ///< feasible runs counted
    int failed = 0;    ///< infeasible or errored runs
    double best = 0.0;
    double mean = 0.0;
    double sd = 0.0;   ///< sample standard deviation
    double mean_wall_seconds = 0.0;
    double best_known = 0.0;
    double gap_best = 0.0;  ///< percent
    double gap_mean = 0.0;  ///< percent
};

struct BenchPlan {
    std::vector<Instance> instances;
    std::vector<Objective> objectives;
    std::vector<BenchConfig> configs;
    std::vector<std::uint64_t> seeds;
    int workers = 1;
};

/// Runs every (instance, objective, config, seed) combination on a worker
/// pool. `sink` receives each record as it completes, one call at a time.
/// Returns the records in plan order.
std::vector<RunRecord> run_bench(const BenchPlan& plan,
                                 const std::function<void(const RunRecord&)>& sink = {});

/// Reference values keyed by (instance, objective).
using ReferenceValues = std::map<std::pair<std::string, Objective>, double>;

/// 100 * (value - best_known) / best_known.
double gap_percent(double value, double best_known);

/// Best feasible value per (instance, objective) over all records.
ReferenceValues best_known_values(const std::vector<RunRecord>& records);

/// One aggregate per (instance, objective, config), in first-seen order.
/// Missing references fall back to the best value over the whole grid.
std::vector<Aggregate> aggregate(const std::vector<RunRecord>& records, const ReferenceValues& reference = {});

/// CSV with one "run" row per record and one "aggregate" row per group.
void write_bench_csv_header(std::ostream& out, bool with_trace);
void write_run_row(std::ostream& out, const RunRecord& r, double best_known, bool with_trace);
void write_aggregate_row(std::ostream& out, const Aggregate& a, bool with_trace);

/// Reads "instance,objective,value" lines (header optional).
ReferenceValues read_reference_csv(std::istream& in);

}  // namespace tspd
