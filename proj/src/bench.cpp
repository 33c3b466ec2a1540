#include "tspd/bench.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <istream>
#include <limits>
#include <mutex>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <thread>
#include <tuple>

#include "tspd/io.hpp"

namespace tspd {

namespace {

std::string csv_escape(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + '"';
}

std::string ablation_names(const HgaParams& p) {
    std::string out;
    auto add = [&](bool on, const char* name) {
        if (!on) return;
        if (!out.empty()) out += '+';
        out += name;
    };
    add(p.no_inf, "no-inf");
    add(p.no_div, "no-div");
    add(p.no_repair, "no-repair");
    add(p.no_restore, "no-restore");
    return out.empty() ? "-" : out;
}

std::string number_or_empty(double v) { return std::isfinite(v) ? format_double(v) : std::string(); }

struct Job {
    std::size_t instance;
    std::size_t objective;
    std::size_t config;
    std::size_t seed;
};

}  // namespace

int default_worker_count() {
    if (const char* env = std::getenv("TSPD_WORKERS"); env && *env) {
        char* end = nullptr;
        long v = std::strtol(env, &end, 10);
        if (end && *end == '\0' && v >= 1) return static_cast<int>(v);
    }
    unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

BenchConfig ablation_config(const std::string& name, const HgaParams& base) {
    BenchConfig c{name, base};
    auto& p = c.params;
    if (name == "standard") {
    } else if (name == "no-inf") {
        p.no_inf = true;
    } else if (name == "no-div") {
        p.no_div = true;
    } else if (name == "no-repair") {
        p.no_repair = true;
    } else if (name == "no-restore") {
        p.no_restore = true;
    } else if (name == "no-all") {
        p.no_inf = p.no_div = p.no_repair = p.no_restore = true;
    } else if (name == "relax-truck") {
        p.relax = RelaxMode::Truck;
    } else if (name == "relax-drone") {
        p.relax = RelaxMode::Drone;
    } else if (name == "relax-none") {
        p.relax = RelaxMode::None;
    } else {
        throw std::invalid_argument("unknown configuration '" + name + "'");
    }
    return c;
}

std::vector<RunRecord> run_bench(const BenchPlan& plan, const std::function<void(const RunRecord&)>& sink) {
    std::vector<Job> jobs;
    for (std::size_t i = 0; i < plan.instances.size(); ++i) {
        for (std::size_t o = 0; o < plan.objectives.size(); ++o) {
            for (std::size_t c = 0; c < plan.configs.size(); ++c) {
                for (std::size_t s = 0; s < plan.seeds.size(); ++s) jobs.push_back({i, o, c, s});
            }
        }
    }
    std::vector<RunRecord> records(jobs.size());
    std::atomic<std::size_t> next{0};
    std::mutex sink_mutex;

    auto worker = [&]() {
        for (std::size_t k = next++; k < jobs.size(); k = next++) {
            const Job& job = jobs[k];
            const Instance& inst = plan.instances[job.instance];
            const BenchConfig& config = plan.configs[job.config];
            RunRecord& r = records[k];
            r.instance = inst.name;
            r.objective = plan.objectives[job.objective];
            r.config = config.label;
            r.crossover = to_string(config.params.crossover);
            r.relax = to_string(config.params.effective_relax());
            r.ablations = ablation_names(config.params);
            r.seed = plan.seeds[job.seed];
            try {
                HgaResult result = run_hga(inst, config.params, r.objective, r.seed);
                r.status = result.status == RunStatus::Feasible ? "feasible" : "infeasible";
                r.value = result.value;
                r.wall_seconds = result.stats.wall_seconds;
                r.iterations = result.stats.iterations;
                r.best_trace = std::move(result.stats.best_trace);
            } catch (const std::exception& e) {
                r.status = "error";
                r.error = e.what();
                r.value = std::numeric_limits<double>::quiet_NaN();
            }
            if (sink) {
                std::lock_guard lock(sink_mutex);
                sink(r);
            }
        }
    };

    int workers = std::max(1, std::min<int>(plan.workers, static_cast<int>(jobs.size())));
    if (workers == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }
    return records;
}

double gap_percent(double value, double best_known) {
    if (best_known == 0.0) return value == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
    return 100.0 * (value - best_known) / best_known;
}

ReferenceValues best_known_values(const std::vector<RunRecord>& records) {
    ReferenceValues best;
    for (const auto& r : records) {
        if (r.status != "feasible") continue;
        auto key = std::make_pair(r.instance, r.objective);
        auto it = best.find(key);
        if (it == best.end() || r.value < it->second) best[key] = r.value;
    }
    return best;
}

std::vector<Aggregate> aggregate(const std::vector<RunRecord>& records, const ReferenceValues& reference) {
    ReferenceValues grid = best_known_values(records);
    std::vector<Aggregate> out;
    std::map<std::tuple<std::string, Objective, std::string>, std::size_t> slot;
    std::vector<std::vector<double>> values;
    std::vector<double> wall;
    for (const auto& r : records) {
        auto key = std::make_tuple(r.instance, r.objective, r.config);
        auto [it, fresh] = slot.emplace(key, out.size());
        if (fresh) {
            Aggregate a;
            a.instance = r.instance;
            a.objective = r.objective;
            a.config = r.config;
            out.push_back(a);
            values.emplace_back();
            wall.push_back(0.0);
        }
        std::size_t k = it->second;
        wall[k] += r.wall_seconds;
        if (r.status == "feasible") {
            values[k].push_back(r.value);
        } else {
            ++out[k].failed;
        }
    }
    for (std::size_t k = 0; k < out.size(); ++k) {
        Aggregate& a = out[k];
        const auto& v = values[k];
        a.runs = static_cast<int>(v.size());
        int total = a.runs + a.failed;
        a.mean_wall_seconds = total ? wall[k] / total : 0.0;
        auto key = std::make_pair(a.instance, a.objective);
        auto ref = reference.find(key);
        auto own = grid.find(key);
        a.best_known = ref != reference.end()   ? ref->second
                       : own != grid.end()      ? own->second
                                                : std::numeric_limits<double>::quiet_NaN();
        if (v.empty()) {
            a.best = a.mean = a.sd = a.gap_best = a.gap_mean = std::numeric_limits<double>::quiet_NaN();
            continue;
        }
        a.best = *std::min_element(v.begin(), v.end());
        double sum = 0.0;
        for (double x : v) sum += x;
        a.mean = sum / static_cast<double>(v.size());
        double sq = 0.0;
        for (double x : v) sq += (x - a.mean) * (x - a.mean);
        a.sd = v.size() > 1 ? std::sqrt(sq / static_cast<double>(v.size() - 1)) : 0.0;
        a.gap_best = gap_percent(a.best, a.best_known);
        a.gap_mean = gap_percent(a.mean, a.best_known);
    }
    return out;
}

void write_bench_csv_header(std::ostream& out, bool with_trace) {
    out << "kind,instance,objective,config,crossover,relax,ablations,seed,status,value,gap,wall_seconds,"
           "iterations,runs,best,mean,sd,best_known,error";
    if (with_trace) out << ",trace";
    out << '\n';
}

void write_run_row(std::ostream& out, const RunRecord& r, double best_known, bool with_trace) {
    bool ok = r.status == "feasible";
    out << "run," << csv_escape(r.instance) << ',' << to_string(r.objective) << ',' << csv_escape(r.config) << ','
        << r.crossover << ',' << r.relax << ',' << r.ablations << ',' << r.seed << ',' << r.status << ','
        << (ok ? format_double(r.value) : std::string()) << ','
        << (ok ? number_or_empty(gap_percent(r.value, best_known)) : std::string()) << ','
        << format_double(r.wall_seconds) << ',' << r.iterations << ",,,,," << number_or_empty(best_known) << ','
        << csv_escape(r.error);
    if (with_trace) {
        out << ',';
        for (std::size_t i = 0; i < r.best_trace.size(); ++i) {
            out << (i ? ";" : "") << (std::isfinite(r.best_trace[i]) ? format_double(r.best_trace[i]) : "inf");
        }
    }
    out << '\n';
}

void write_aggregate_row(std::ostream& out, const Aggregate& a, bool with_trace) {
    out << "aggregate," << csv_escape(a.instance) << ',' << to_string(a.objective) << ',' << csv_escape(a.config)
        << ",,,,," << (a.failed ? "partial" : "feasible") << ',' << number_or_empty(a.mean) << ','
        << number_or_empty(a.gap_mean) << ',' << format_double(a.mean_wall_seconds) << ",," << a.runs << ','
        << number_or_empty(a.best) << ',' << number_or_empty(a.mean) << ',' << number_or_empty(a.sd) << ','
        << number_or_empty(a.best_known) << ',';
    if (with_trace) out << ',';
    out << '\n';
}

ReferenceValues read_reference_csv(std::istream& in) {
    ReferenceValues out;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line[0] == '#') continue;
        std::vector<std::string> cells;
        std::stringstream ss(line);
        for (std::string c; std::getline(ss, c, ',');) cells.push_back(c);
        if (cells.size() != 3) throw ParseError("<reference>", line_no, "row", "expected instance,objective,value");
        if (line_no == 1 && cells[0] == "instance") continue;
        Objective obj;
        try {
            obj = parse_objective(cells[1]);
        } catch (const std::invalid_argument& e) {
            throw ParseError("<reference>", line_no, "objective", e.what());
        }
        double v = 0.0;
        try {
            std::size_t used = 0;
            v = std::stod(cells[2], &used);
            if (used != cells[2].size()) throw std::invalid_argument("trailing text");
        } catch (const std::exception&) {
            throw ParseError("<reference>", line_no, "value", "expected a number, got '" + cells[2] + "'");
        }
        out[{cells[0], obj}] = v;
    }
    return out;
}

}  // namespace tspd
