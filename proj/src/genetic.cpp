#include "tspd/genetic.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "tspd/restore.hpp"
#include "tspd/split.hpp"

namespace tspd {

namespace {

constexpr std::size_t kFeasibilityWindow = 100;
constexpr long kPenaltyPeriod = 100;
constexpr double kOmegaMin = 1e-3;
constexpr double kOmegaMax = 1e6;

template <typename T>
T parse_number(const std::string& key, const std::string& value) {
    std::size_t used = 0;
    T out{};
    try {
        if constexpr (std::is_same_v<T, double>) {
            out = std::stod(value, &used);
        } else {
            out = static_cast<T>(std::stol(value, &used));
        }
    } catch (const std::exception&) {
        used = 0;
    }
    if (used == 0 || used != value.size()) {
        throw std::invalid_argument("parameter '" + key + "': cannot parse '" + value + "'");
    }
    return out;
}

bool parse_flag(const std::string& key, const std::string& value) {
    if (value == "1" || value == "true" || value == "yes") return true;
    if (value == "0" || value == "false" || value == "no") return false;
    throw std::invalid_argument("parameter '" + key + "': expected true/false, got '" + value + "'");
}

}  // namespace

void HgaParams::validate() const {
    auto require = [](bool ok, const char* what) {
        if (!ok) throw std::invalid_argument(what);
    };
    require(mu > 0, "mu must be positive");
    require(lambda > 0, "lambda must be positive");
    require(nb_elite >= 0 && nb_elite <= mu, "nb_elite must lie in [0, mu]");
    require(xi_ref > 0.0 && xi_ref < 1.0, "xi_ref must lie in (0, 1)");
    require(n_close_frac > 0.0 && n_close_frac <= 1.0, "n_close_frac must lie in (0, 1]");
    require(omega0 > 0.0, "omega0 must be positive");
    require(iter_ni > 0, "iter_ni must be positive");
    require(iter_div_frac > 0.0 && iter_div_frac <= 1.0, "iter_div_frac must lie in (0, 1]");
    require(p_rep >= 0.0 && p_rep <= 1.0, "p_rep must lie in [0, 1]");
    require(h > 0.0 && h <= 1.0, "h must lie in (0, 1]");
    require(init_k >= 1, "init_k must be at least 1");
    require(max_iterations >= 0, "max_iterations must be non-negative");
    require(time_limit >= 0.0, "time_limit must be non-negative");
}

void HgaParams::set(const std::string& key, const std::string& value) {
    if (key == "mu") {
        mu = parse_number<int>(key, value);
    } else if (key == "lambda") {
        lambda = parse_number<int>(key, value);
    } else if (key == "nb_elite") {
        nb_elite = parse_number<int>(key, value);
    } else if (key == "xi_ref") {
        xi_ref = parse_number<double>(key, value);
    } else if (key == "n_close_frac") {
        n_close_frac = parse_number<double>(key, value);
    } else if (key == "omega0") {
        omega0 = parse_number<double>(key, value);
    } else if (key == "iter_ni") {
        iter_ni = parse_number<int>(key, value);
    } else if (key == "iter_div_frac") {
        iter_div_frac = parse_number<double>(key, value);
    } else if (key == "p_rep") {
        p_rep = parse_number<double>(key, value);
    } else if (key == "h") {
        h = parse_number<double>(key, value);
    } else if (key == "init_k") {
        init_k = parse_number<int>(key, value);
    } else if (key == "max_iterations") {
        max_iterations = parse_number<long>(key, value);
    } else if (key == "time_limit") {
        time_limit = parse_number<double>(key, value);
    } else if (key == "crossover") {
        crossover = parse_crossover(value);
    } else if (key == "relax") {
        relax = parse_relax(value);
    } else if (key == "wait_fees") {
        wait_fees = parse_wait_fees(value);
    } else if (key == "no_inf") {
        no_inf = parse_flag(key, value);
    } else if (key == "no_div") {
        no_div = parse_flag(key, value);
    } else if (key == "no_repair") {
        no_repair = parse_flag(key, value);
    } else if (key == "no_restore") {
        no_restore = parse_flag(key, value);
    } else {
        throw std::invalid_argument("unknown parameter '" + key + "'");
    }
}

int HgaParams::iter_div() const {
    return std::max(1, static_cast<int>(std::ceil(iter_div_frac * iter_ni - 1e-9)));
}

double chromosome_distance(const GiantTour& a, const GiantTour& b) {
    if (a.size() == 0) return 0.0;
    std::size_t differ = 0;
    for (std::size_t i = 0; i < a.size(); ++i) differ += a[i] != b[i];
    return static_cast<double>(differ) / static_cast<double>(a.size());
}

bool is_clone(const GiantTour& a, const GiantTour& b) {
    return a == b || std::equal(a.order.begin(), a.order.end(), b.order.rbegin(), b.order.rend());
}

int close_neighbor_count(std::size_t subpop_size, double n_close_frac) {
    if (subpop_size <= 1) return 0;
    auto others = static_cast<double>(subpop_size - 1);
    int count = static_cast<int>(std::ceil(n_close_frac * others - 1e-9));
    return std::clamp(count, 1, static_cast<int>(subpop_size - 1));
}

double diversity_contribution(std::size_t self, const Subpopulation& subpop, int n_close) {
    if (subpop.size() <= 1 || n_close <= 0) return 1.0;
    std::vector<double> dist;
    dist.reserve(subpop.size() - 1);
    for (std::size_t i = 0; i < subpop.size(); ++i) {
        if (i != self) dist.push_back(chromosome_distance(subpop[self].chromosome, subpop[i].chromosome));
    }
    auto k = static_cast<std::size_t>(std::min<int>(n_close, static_cast<int>(dist.size())));
    std::partial_sort(dist.begin(), dist.begin() + static_cast<std::ptrdiff_t>(k), dist.end());
    return std::accumulate(dist.begin(), dist.begin() + static_cast<std::ptrdiff_t>(k), 0.0) /
           static_cast<double>(k);
}

void update_biased_fitness(Subpopulation& subpop, const HgaParams& params) {
    const std::size_t m = subpop.size();
    if (m == 0) return;
    int n_close = close_neighbor_count(m, params.n_close_frac);
    for (std::size_t i = 0; i < m; ++i) subpop[i].diversity = diversity_contribution(i, subpop, n_close);

    std::vector<std::size_t> order(m);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return subpop[a].phi < subpop[b].phi; });
    for (std::size_t r = 0; r < m; ++r) subpop[order[r]].fit_rank = static_cast<int>(r);

    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return subpop[a].diversity > subpop[b].diversity;
    });
    for (std::size_t r = 0; r < m; ++r) subpop[order[r]].div_rank = static_cast<int>(r);

    double weight = params.no_div ? 0.0
                                  : std::max(0.0, 1.0 - static_cast<double>(params.nb_elite) /
                                                            static_cast<double>(m));
    for (auto& ind : subpop) ind.bf = ind.fit_rank + weight * ind.div_rank;
}

const Individual& tournament(const std::vector<const Individual*>& pool, Rng& rng) {
    if (pool.empty()) throw std::logic_error("tournament on an empty population");
    const Individual* a = pool[static_cast<std::size_t>(rng.index(pool.size()))];
    const Individual* b = pool[static_cast<std::size_t>(rng.index(pool.size()))];
    return b->bf < a->bf ? *b : *a;
}

std::pair<const Individual*, const Individual*> select_parents(const Subpopulation& feasible,
                                                               const Subpopulation& infeasible, Rng& rng) {
    std::vector<const Individual*> pool;
    pool.reserve(feasible.size() + infeasible.size());
    for (const auto& ind : feasible) pool.push_back(&ind);
    for (const auto& ind : infeasible) pool.push_back(&ind);
    const Individual& p1 = tournament(pool, rng);
    const Individual& p2 = tournament(pool, rng);
    return {&p1, &p2};
}

void select_survivors(Subpopulation& subpop, std::size_t count, const HgaParams& params) {
    for (std::size_t removed = 0; removed < count && !subpop.empty(); ++removed) {
        update_biased_fitness(subpop, params);
        std::ptrdiff_t worst_clone = -1;
        std::ptrdiff_t worst = -1;
        for (std::size_t i = 0; i < subpop.size(); ++i) {
            auto ii = static_cast<std::ptrdiff_t>(i);
            if (worst < 0 || subpop[i].bf >= subpop[static_cast<std::size_t>(worst)].bf) worst = ii;
            bool clone = false;
            for (std::size_t j = 0; j < subpop.size() && !clone; ++j) {
                clone = j != i && is_clone(subpop[i].chromosome, subpop[j].chromosome);
            }
            if (clone && (worst_clone < 0 || subpop[i].bf >= subpop[static_cast<std::size_t>(worst_clone)].bf)) {
                worst_clone = ii;
            }
        }
        subpop.erase(subpop.begin() + (worst_clone >= 0 ? worst_clone : worst));
    }
    update_biased_fitness(subpop, params);
}

double adjust_penalty(double omega, double feasible_fraction, double xi_ref) {
    if (feasible_fraction < xi_ref - 0.05) {
        omega *= 1.2;
    } else if (feasible_fraction > xi_ref + 0.05) {
        omega *= 0.85;
    }
    return std::clamp(omega, kOmegaMin, kOmegaMax);
}

GiantTour randomized_cheapest_insertion(const Instance& inst, Objective obj, int k, Rng& rng) {
    const Matrix& weight = obj == Objective::MinCost ? inst.truck_dist : inst.truck_time;
    std::vector<NodeId> pending(static_cast<std::size_t>(inst.n));
    std::iota(pending.begin(), pending.end(), 1);
    rng.shuffle(pending);

    std::vector<NodeId> tour{inst.depot(), inst.depot_end()};
    std::vector<std::pair<double, std::size_t>> options;
    for (NodeId v : pending) {
        options.clear();
        for (std::size_t p = 0; p + 1 < tour.size(); ++p) {
            double extra = weight(tour[p], v) + weight(v, tour[p + 1]) - weight(tour[p], tour[p + 1]);
            options.emplace_back(extra, p);
        }
        auto keep = std::min(options.size(), static_cast<std::size_t>(k));
        std::partial_sort(options.begin(), options.begin() + static_cast<std::ptrdiff_t>(keep), options.end());
        std::size_t at = options[static_cast<std::size_t>(rng.index(keep))].second;
        tour.insert(tour.begin() + static_cast<std::ptrdiff_t>(at) + 1, v);
    }
    return GiantTour{std::vector<NodeId>(tour.begin() + 1, tour.end() - 1)};
}

Hga::Hga(const Instance& inst, const HgaParams& params, Objective obj, std::uint64_t seed)
    : inst_(inst), params_(params), obj_(obj), rng_(seed) {
    params_.validate();
    cfg_.omega = params_.omega0;
    cfg_.relax = params_.effective_relax();
    cfg_.wait_fees = params_.wait_fees;
    neighbors_ = build_granular_neighbors(inst_, params_.h);
}

Individual Hga::finish(TspDSolution sol, const GiantTour& fallback_chromosome) {
    Individual ind;
    Evaluation ev = evaluate(sol, inst_, cfg_, obj_);
    ind.objective = ev.objective;
    ind.violation = ev.violation;
    ind.feasible = ev.feasible;
    ind.refresh_phi(cfg_.omega);
    ind.chromosome = params_.no_restore ? fallback_chromosome : restore(sol, rng_.next());
    ind.decoded = std::move(sol);
    return ind;
}

Individual Hga::make_individual(const GiantTour& chromosome) {
    TspDSolution sol = split(chromosome, inst_, cfg_, obj_);
    sol = educate(std::move(sol), inst_, cfg_, obj_, neighbors_, rng_.next());
    return finish(std::move(sol), chromosome);
}

Individual Hga::repair(const Individual& child) {
    TspDSolution sol = child.decoded;
    for (double factor : {10.0, 100.0}) {
        PenaltyConfig strict = cfg_;
        strict.omega = cfg_.omega * factor;
        sol = educate(std::move(sol), inst_, strict, obj_, neighbors_, rng_.next());
        if (is_feasible(sol, inst_)) break;
    }
    return finish(std::move(sol), child.chromosome);
}

bool Hga::record(const Individual& ind) {
    if (ind.feasible) {
        bool better = !best_feasible_ || ind.objective < best_feasible_->objective - kImprovementTolerance;
        if (!best_feasible_ || ind.objective < best_feasible_->objective) best_feasible_ = ind;
        return better;
    }
    bool better = !best_infeasible_ || ind.phi < best_infeasible_->phi - kImprovementTolerance;
    if (!best_infeasible_ || ind.phi < best_infeasible_->phi) best_infeasible_ = ind;
    return better && !best_feasible_;
}

void Hga::trim(Subpopulation& subpop) {
    auto cap = static_cast<std::size_t>(params_.mu + params_.lambda);
    if (subpop.size() >= cap) select_survivors(subpop, subpop.size() - static_cast<std::size_t>(params_.mu), params_);
}

bool Hga::add(Subpopulation& subpop, Individual ind) {
    bool improved = record(ind);
    subpop.push_back(std::move(ind));
    trim(subpop);
    return improved;
}

bool Hga::route(Individual ind) {
    if (ind.feasible) return add(feasible_, std::move(ind));
    bool improved = false;
    bool try_repair = !params_.no_repair && rng_.chance(params_.p_rep);
    if (try_repair) {
        ++stats_.repairs_attempted;
        Individual fixed = repair(ind);
        if (fixed.feasible) {
            ++stats_.repairs_succeeded;
            improved |= add(feasible_, std::move(fixed));
        }
    }
    if (!params_.no_inf) improved |= add(infeasible_, std::move(ind));
    return improved;
}

void Hga::initialize() {
    for (int i = 0; i < 4 * params_.mu; ++i) {
        GiantTour gt = randomized_cheapest_insertion(inst_, obj_, params_.init_k, rng_);
        route(make_individual(gt));
    }
}

bool Hga::diversify() {
    auto keep = static_cast<std::size_t>(std::ceil(params_.mu / 3.0));
    for (Subpopulation* subpop : {&feasible_, &infeasible_}) {
        if (subpop->size() <= keep) continue;
        update_biased_fitness(*subpop, params_);
        auto best_phi = std::min_element(subpop->begin(), subpop->end(), [](const auto& a, const auto& b) {
                            return a.phi < b.phi;
                        }) - subpop->begin();
        std::vector<std::size_t> order(subpop->size());
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(),
                         [&](std::size_t a, std::size_t b) { return (*subpop)[a].bf < (*subpop)[b].bf; });
        order.resize(keep);
        // The best member survives even when its bf rank is poor.
        if (std::find(order.begin(), order.end(), static_cast<std::size_t>(best_phi)) == order.end()) {
            order.back() = static_cast<std::size_t>(best_phi);
        }
        Subpopulation kept;
        for (std::size_t i : order) kept.push_back(std::move((*subpop)[i]));
        *subpop = std::move(kept);
    }
    ++stats_.diversifications;
    bool improved = false;
    for (int i = 0; i < 4 * params_.mu; ++i) {
        GiantTour gt = randomized_cheapest_insertion(inst_, obj_, params_.init_k, rng_);
        improved |= route(make_individual(gt));
    }
    return improved;
}

void Hga::apply_penalty_adjustment() {
    if (feasibility_window_.empty()) return;
    auto natural = std::count(feasibility_window_.begin(), feasibility_window_.end(), true);
    double fraction = static_cast<double>(natural) / static_cast<double>(feasibility_window_.size());
    double omega = adjust_penalty(cfg_.omega, fraction, params_.xi_ref);
    stats_.feasibility_trace.push_back(fraction);
    stats_.omega_trace.push_back(omega);
    if (omega == cfg_.omega) return;
    cfg_.omega = omega;
    for (Subpopulation* subpop : {&feasible_, &infeasible_}) {
        for (auto& ind : *subpop) ind.refresh_phi(omega);
    }
    if (best_infeasible_) best_infeasible_->refresh_phi(omega);
}

bool Hga::iterate() {
    ++stats_.iterations;
    update_biased_fitness(feasible_, params_);
    update_biased_fitness(infeasible_, params_);
    auto [p1, p2] = select_parents(feasible_, infeasible_, rng_);
    GiantTour child = crossover(params_.crossover, p1->chromosome, p2->chromosome, p1->decoded, rng_);
    Individual ind = make_individual(child);

    feasibility_window_.push_back(ind.feasible);
    if (feasibility_window_.size() > kFeasibilityWindow) feasibility_window_.erase(feasibility_window_.begin());
    bool improved = route(std::move(ind));

    if (stats_.iterations % kPenaltyPeriod == 0) apply_penalty_adjustment();
    stats_.best_trace.push_back(best_feasible_ ? best_feasible_->objective
                                               : std::numeric_limits<double>::infinity());
    return improved;
}

HgaResult Hga::run() {
    using Clock = std::chrono::steady_clock;
    auto start = Clock::now();
    auto elapsed = [&]() { return std::chrono::duration<double>(Clock::now() - start).count(); };

    initialize();
    long stale = 0;
    long since_div = 0;
    while (!feasible_.empty() || !infeasible_.empty()) {
        if (params_.max_iterations > 0 && stats_.iterations >= params_.max_iterations) break;
        if (params_.time_limit > 0.0 && elapsed() >= params_.time_limit) break;
        if (iterate()) {
            stale = 0;
            since_div = 0;
        } else {
            ++stale;
            ++since_div;
        }
        if (stale >= params_.iter_ni) break;
        if (since_div >= params_.iter_div()) {
            if (diversify()) stale = 0;
            since_div = 0;
        }
    }
    stats_.wall_seconds = elapsed();

    HgaResult result;
    const std::optional<Individual>& best = best_feasible_ ? best_feasible_ : best_infeasible_;
    result.status = best_feasible_ ? RunStatus::Feasible : RunStatus::NoFeasibleFound;
    if (best) {
        result.best = best->decoded;
        result.evaluation = evaluate(result.best, inst_, cfg_, obj_);
        result.value = result.evaluation.objective;
    }
    result.stats = stats_;
    return result;
}

HgaResult run_hga(const Instance& inst, const HgaParams& params, Objective obj, std::uint64_t seed) {
    Hga hga(inst, params, obj, seed);
    return hga.run();
}

}  // namespace tspd
