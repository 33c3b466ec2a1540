#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "tspd/crossover.hpp"
#include "tspd/evaluation.hpp"
#include "tspd/local_search.hpp"
#include "tspd/model.hpp"
#include "tspd/random.hpp"

namespace tspd {

struct HgaParams {
    int mu = 15;
    int lambda = 25;
    int nb_elite = 6;
    double xi_ref = 0.3;        ///< target share of naturally feasible offspring
    double n_close_frac = 0.2;
    double omega0 = 1.0;
    int iter_ni = 2500;         ///< stop after this many iterations without improvement
    double iter_div_frac = 0.3;
    double p_rep = 0.5;
    double h = 0.1;             ///< granular threshold
    int init_k = 3;             ///< k of the randomized cheapest insertion
    CrossoverKind crossover = CrossoverKind::DX;
    RelaxMode relax = RelaxMode::All;
    WaitFeeConvention wait_fees = WaitFeeConvention::AsWritten;
    bool no_inf = false;
    bool no_div = false;
    bool no_repair = false;
    bool no_restore = false;
    /// Extra stopping rules; 0 disables. A time limit makes runs depend on
    /// machine speed.
    long max_iterations = 0;
    double time_limit = 0.0;  ///< seconds

    /// Throws std::invalid_argument on out-of-range values.
    void validate() const;

    /// Sets one parameter from its textual form, e.g. ("mu", "20").
    /// Throws std::invalid_argument on unknown keys or bad values.
    void set(const std::string& key, const std::string& value);

    /// Relax mode in effect (no_inf forces None).
    RelaxMode effective_relax() const { return no_inf ? RelaxMode::None : relax; }

    int iter_div() const;
};

struct Individual {
    GiantTour chromosome;
    TspDSolution decoded;
    double objective = 0.0;
    double violation = 0.0;
    bool feasible = true;
    double phi = 0.0;        ///< objective + omega * violation at the last refresh
    double diversity = 1.0;  ///< mean distance to the closest neighbors
    int fit_rank = 0;
    int div_rank = 0;
    double bf = 0.0;

    void refresh_phi(double omega) { phi = objective + omega * violation; }
};

using Subpopulation = std::vector<Individual>;

/// Share of positions at which two chromosomes differ.
double chromosome_distance(const GiantTour& a, const GiantTour& b);

/// Clone test: equal chromosomes, or one equal to the reversal of the other.
bool is_clone(const GiantTour& a, const GiantTour& b);

int close_neighbor_count(std::size_t subpop_size, double n_close_frac);

/// Mean distance from member `self` to its n_close closest other members;
/// 1 for a singleton subpopulation.
double diversity_contribution(std::size_t self, const Subpopulation& subpop, int n_close);

/// Recomputes diversity, both ranks and the biased fitness of every member.
void update_biased_fitness(Subpopulation& subpop, const HgaParams& params);

/// Binary tournament on bf; the first draw wins ties.
const Individual& tournament(const std::vector<const Individual*>& pool, Rng& rng);

std::pair<const Individual*, const Individual*> select_parents(const Subpopulation& feasible,
                                                               const Subpopulation& infeasible, Rng& rng);

/// Removes `count` members one at a time: the worst-bf clone while clones
/// exist, otherwise the worst-bf member. Ranks are refreshed after each removal.
void select_survivors(Subpopulation& subpop, std::size_t count, const HgaParams& params);

/// New penalty coefficient given the naturally feasible share of recent offspring.
double adjust_penalty(double omega, double feasible_fraction, double xi_ref);

/// Random insertion order; each customer goes to one of the k cheapest
/// positions of the partial truck tour, chosen uniformly.
GiantTour randomized_cheapest_insertion(const Instance& inst, Objective obj, int k, Rng& rng);

struct RunStats {
    long iterations = 0;
    double wall_seconds = 0.0;
    std::vector<double> best_trace;         ///< best value after each iteration (inf before any feasible)
    std::vector<double> omega_trace;        ///< omega after each adjustment
    std::vector<double> feasibility_trace;  ///< naturally feasible share per adjustment window
    long diversifications = 0;
    long repairs_attempted = 0;
    long repairs_succeeded = 0;
};

enum class RunStatus { Feasible, NoFeasibleFound };

struct HgaResult {
    RunStatus status = RunStatus::NoFeasibleFound;
    TspDSolution best;     ///< best feasible, or best infeasible when none was found
    Evaluation evaluation; ///< of `best`, under the final penalty coefficient
    double value = 0.0;    ///< objective of `best`
    RunStats stats;
};

/// Full hybrid genetic search. Deterministic in (instance, params, objective,
/// seed) unless a time limit is set.
HgaResult run_hga(const Instance& inst, const HgaParams& params, Objective obj, std::uint64_t seed);

/// The offspring pipeline and population state, exposed for testing.
class Hga {
  public:
    Hga(const Instance& inst, const HgaParams& params, Objective obj, std::uint64_t seed);

    /// Split, educate and restore a chromosome under the current penalty.
    Individual make_individual(const GiantTour& chromosome);

    /// Educates again with omega x10, then x100 if still infeasible.
    Individual repair(const Individual& child);

    void initialize();
    /// Keeps the best third of each subpopulation and refills; returns true
    /// when a new individual improved the best solution.
    bool diversify();
    /// One generation; returns true when the best solution improved.
    bool iterate();
    HgaResult run();

    const Subpopulation& feasible() const { return feasible_; }
    const Subpopulation& infeasible() const { return infeasible_; }
    double omega() const { return cfg_.omega; }
    const std::optional<Individual>& best_feasible() const { return best_feasible_; }

  private:
    /// Routes an individual by feasibility, with probabilistic repair of
    /// infeasible ones. Returns true when the best solution improved.
    bool route(Individual ind);
    bool add(Subpopulation& subpop, Individual ind);
    bool record(const Individual& ind);
    void trim(Subpopulation& subpop);
    void apply_penalty_adjustment();
    Individual finish(TspDSolution sol, const GiantTour& fallback_chromosome);

    const Instance& inst_;
    HgaParams params_;
    Objective obj_;
    PenaltyConfig cfg_;
    GranularNeighbors neighbors_;
    Rng rng_;
    Subpopulation feasible_;
    Subpopulation infeasible_;
    std::optional<Individual> best_feasible_;
    std::optional<Individual> best_infeasible_;
    std::vector<bool> feasibility_window_;
    RunStats stats_;
};

}  // namespace tspd
