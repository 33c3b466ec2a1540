// Command-line front end: solve, generate, bench, verify.

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "tspd/bench.hpp"
#include "tspd/genetic.hpp"
#include "tspd/io.hpp"
#include "tspd/verify.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitNoFeasible = 2;
constexpr int kExitVerifyFailed = 3;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Flags shared by solve and bench.
struct SearchOptions {
    std::string params_file;
    std::vector<std::string> overrides;
    std::string crossover;
    std::string relax;
    bool no_div = false;
    bool no_repair = false;
    bool no_restore = false;
    bool no_inf = false;

    void add_to(CLI::App& cmd, bool single_crossover) {
        cmd.add_option("--params", params_file, "File of 'key = value' search parameters");
        cmd.add_option("--set", overrides, "Override one parameter, key=value (repeatable)");
        if (single_crossover) {
            cmd.add_option("--crossover", crossover, "Crossover operator")
                ->check(CLI::IsMember({"dx", "ox", "pmx", "obx", "pbx"}));
        }
        cmd.add_option("--relax", relax, "Endurance violations admitted in penalized solutions")
            ->check(CLI::IsMember({"all", "truck", "drone", "none"}));
        cmd.add_flag("--no-div", no_div, "Disable the diversity term of the biased fitness");
        cmd.add_flag("--no-repair", no_repair, "Disable repair of infeasible offspring");
        cmd.add_flag("--no-restore", no_restore, "Re-encode offspring by concatenation instead of restore");
        cmd.add_flag("--no-inf", no_inf, "Keep no infeasible subpopulation");
    }

    tspd::HgaParams build() const {
        tspd::HgaParams p;
        if (!params_file.empty()) tspd::read_params_file(params_file, p);
        for (const auto& kv : overrides) {
            auto eq = kv.find('=');
            if (eq == std::string::npos) throw UsageError("--set expects key=value, got '" + kv + "'");
            p.set(kv.substr(0, eq), kv.substr(eq + 1));
        }
        if (!crossover.empty()) p.crossover = tspd::parse_crossover(crossover);
        if (!relax.empty()) p.relax = tspd::parse_relax(relax);
        p.no_div = p.no_div || no_div;
        p.no_repair = p.no_repair || no_repair;
        p.no_restore = p.no_restore || no_restore;
        p.no_inf = p.no_inf || no_inf;
        p.validate();
        return p;
    }
};

struct InstanceOptions {
    std::string format = "native";
    double endurance = 20.0;

    void add_to(CLI::App& cmd) {
        cmd.add_option("--format", format, "Instance format")->check(CLI::IsMember({"native", "murray"}));
        cmd.add_option("--endurance", endurance, "Drone endurance in minutes (murray format)");
    }

    tspd::Instance load(const std::string& path) const {
        tspd::MurrayOptions murray;
        murray.endurance = endurance;
        tspd::Instance inst = tspd::read_instance(path, tspd::parse_instance_format(format), murray);
        if (inst.name.empty()) inst.name = std::filesystem::path(path).stem().string();
        return inst;
    }
};

std::vector<std::uint64_t> parse_seeds(const std::string& text) {
    std::vector<std::uint64_t> seeds;
    std::stringstream ss(text);
    for (std::string item; std::getline(ss, item, ',');) {
        auto dash = item.find('-');
        try {
            if (dash == std::string::npos) {
                seeds.push_back(std::stoull(item));
            } else {
                auto lo = std::stoull(item.substr(0, dash));
                auto hi = std::stoull(item.substr(dash + 1));
                if (hi < lo) throw UsageError("empty seed range '" + item + "'");
                for (auto s = lo; s <= hi; ++s) seeds.push_back(s);
            }
        } catch (const std::logic_error&) {
            throw UsageError("bad seed list '" + text + "'");
        }
    }
    if (seeds.empty()) throw UsageError("no seeds given");
    return seeds;
}

std::vector<std::string> split_list(const std::vector<std::string>& items) {
    std::vector<std::string> out;
    for (const auto& item : items) {
        std::stringstream ss(item);
        for (std::string part; std::getline(ss, part, ',');) {
            if (!part.empty()) out.push_back(part);
        }
    }
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Hybrid genetic search for the traveling salesman problem with drone"};
    app.require_subcommand(1);

    // solve
    auto* solve = app.add_subcommand("solve", "Solve one instance");
    std::string instance_path;
    std::string objective = "cost";
    std::uint64_t seed = 1;
    bool record_only = false;
    std::string record_path;
    SearchOptions solve_search;
    InstanceOptions solve_instance;
    solve->add_option("--instance", instance_path, "Instance file (or directory for murray format)")->required();
    solve->add_option("--objective", objective, "Objective")->check(CLI::IsMember({"cost", "time"}));
    solve->add_option("--seed", seed, "Random seed");
    solve->add_flag("--record-only", record_only, "Print only the machine-readable record");
    solve->add_option("--record", record_path, "Also write the machine-readable record to this file");
    solve_search.add_to(*solve, true);
    solve_instance.add_to(*solve);

    // generate
    auto* generate = app.add_subcommand("generate", "Write a random instance in the native format");
    int gen_n = 10;
    std::uint64_t gen_seed = 1;
    std::string gen_out;
    tspd::GeneratorParams gen;
    generate->add_option("-n,--customers", gen_n, "Number of customers")->check(CLI::PositiveNumber);
    generate->add_option("--seed", gen_seed, "Random seed");
    generate->add_option("--area", gen.area, "Side of the square area (km)");
    generate->add_option("--eligible", gen.drone_eligible_frac, "Share of drone-eligible customers")
        ->check(CLI::Range(0.0, 1.0));
    generate->add_option("--endurance", gen.endurance, "Drone endurance (min)");
    generate->add_option("--launch-time", gen.launch_time, "Launch service time (min)");
    generate->add_option("--retrieve-time", gen.retrieve_time, "Retrieval service time (min)");
    generate->add_option("--truck-cost", gen.truck_cost, "Truck cost per distance unit");
    generate->add_option("--drone-cost", gen.drone_cost, "Drone cost per distance unit");
    generate->add_option("--truck-wait-fee", gen.truck_wait_fee, "Waiting fee alpha");
    generate->add_option("--drone-wait-fee", gen.drone_wait_fee, "Waiting fee beta");
    generate->add_option("-o,--out", gen_out, "Output file (default: stdout)");

    // bench
    auto* bench = app.add_subcommand("bench", "Run a grid of instances, configurations and seeds; write CSV");
    std::vector<std::string> bench_instances;
    std::vector<std::string> bench_generated;
    std::vector<std::string> bench_objectives{"cost"};
    std::vector<std::string> bench_crossovers{"dx"};
    std::vector<std::string> bench_configs{"standard"};
    std::string bench_seeds = "1-10";
    int bench_workers = tspd::default_worker_count();
    std::string bench_reference;
    std::string bench_out;
    bool bench_trace = false;
    SearchOptions bench_search;
    InstanceOptions bench_instance;
    bench->add_option("--instance", bench_instances, "Instance files (repeatable)");
    bench->add_option("--generate", bench_generated, "Generated instances, N:COUNT[:FIRST_SEED] (repeatable)");
    bench->add_option("--objective", bench_objectives, "Objectives, e.g. cost,time");
    bench->add_option("--crossover", bench_crossovers, "Crossover operators, e.g. dx,pmx,obx");
    bench->add_option("--config", bench_configs,
                      "Configurations: standard, no-inf, no-div, no-repair, no-restore, no-all, relax-truck, "
                      "relax-drone, relax-none");
    bench->add_option("--seeds", bench_seeds, "Seeds, e.g. 1-10 or 1,5,9");
    bench->add_option("--workers", bench_workers, "Worker threads (default: TSPD_WORKERS or core count)")
        ->check(CLI::PositiveNumber);
    bench->add_option("--reference", bench_reference, "CSV of instance,objective,best_known values");
    bench->add_option("-o,--out", bench_out, "Output CSV (default: stdout)");
    bench->add_flag("--trace", bench_trace, "Include the per-iteration best trace column");
    bench_search.add_to(*bench, false);
    bench_instance.add_to(*bench);

    // verify
    auto* verify = app.add_subcommand("verify", "Run the oracle cross-checks");
    std::uint64_t verify_seed = 1;
    int verify_scale = 1;
    verify->add_option("--seed", verify_seed, "Random seed");
    verify->add_option("--scale", verify_scale, "Multiply the sample sizes")->check(CLI::PositiveNumber);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (*solve) {
            tspd::HgaParams params = solve_search.build();
            tspd::Instance inst = solve_instance.load(instance_path);
            tspd::SolveReport report;
            report.instance = inst.name;
            report.objective = tspd::parse_objective(objective);
            report.seed = seed;
            report.params = params;
            report.result = tspd::run_hga(inst, params, report.objective, seed);
            std::string record = tspd::format_record(report);
            if (!record_only) std::cout << tspd::format_human(report, inst) << '\n';
            std::cout << record << '\n';
            if (!record_path.empty()) {
                std::ofstream out(record_path);
                if (!out) throw std::runtime_error("cannot write " + record_path);
                out << record << '\n';
            }
            return report.result.status == tspd::RunStatus::Feasible ? kExitOk : kExitNoFeasible;
        }

        if (*generate) {
            tspd::Instance inst = tspd::generate_instance(gen_n, gen_seed, gen);
            if (gen_out.empty()) {
                tspd::write_native(std::cout, inst);
            } else {
                tspd::write_native_file(gen_out, inst);
            }
            return kExitOk;
        }

        if (*bench) {
            tspd::HgaParams base = bench_search.build();
            tspd::BenchPlan plan;
            plan.workers = bench_workers;
            plan.seeds = parse_seeds(bench_seeds);
            for (const auto& path : bench_instances) plan.instances.push_back(bench_instance.load(path));
            for (const auto& spec : split_list(bench_generated)) {
                int n = 0;
                int count = 0;
                unsigned long long first = 1;
                int fields = std::sscanf(spec.c_str(), "%d:%d:%llu", &n, &count, &first);
                if (fields < 2 || n < 1 || count < 1) throw UsageError("--generate expects N:COUNT[:FIRST_SEED]");
                for (int k = 0; k < count; ++k) plan.instances.push_back(tspd::generate_instance(n, first + k));
            }
            if (plan.instances.empty()) throw UsageError("bench needs --instance or --generate");
            for (const auto& o : split_list(bench_objectives)) plan.objectives.push_back(tspd::parse_objective(o));
            auto crossovers = split_list(bench_crossovers);
            for (const auto& c : split_list(bench_configs)) {
                for (const auto& x : crossovers) {
                    tspd::BenchConfig config = tspd::ablation_config(c, base);
                    config.params.crossover = tspd::parse_crossover(x);
                    if (crossovers.size() > 1) config.label += ":" + x;
                    plan.configs.push_back(config);
                }
            }
            tspd::ReferenceValues reference;
            if (!bench_reference.empty()) {
                std::ifstream in(bench_reference);
                if (!in) throw UsageError("cannot open " + bench_reference);
                reference = tspd::read_reference_csv(in);
            }

            std::size_t total = plan.instances.size() * plan.objectives.size() * plan.configs.size() * plan.seeds.size();
            std::size_t finished = 0;
            auto records = tspd::run_bench(plan, [&](const tspd::RunRecord& r) {
                ++finished;
                std::cerr << "[" << finished << "/" << total << "] " << r.instance << ' ' << tspd::to_string(r.objective)
                          << ' ' << r.config << " seed=" << r.seed << ' ' << r.status << ' '
                          << (r.status == "feasible" ? tspd::format_double(r.value) : r.error) << '\n';
            });

            auto aggregates = tspd::aggregate(records, reference);
            std::ofstream file;
            if (!bench_out.empty()) {
                file.open(bench_out);
                if (!file) throw std::runtime_error("cannot write " + bench_out);
            }
            std::ostream& out = bench_out.empty() ? std::cout : file;
            tspd::write_bench_csv_header(out, bench_trace);
            auto known = tspd::best_known_values(records);
            for (const auto& [key, value] : reference) known[key] = value;
            for (const auto& r : records) {
                auto it = known.find({r.instance, r.objective});
                tspd::write_run_row(out, r, it == known.end() ? std::nan("") : it->second, bench_trace);
            }
            for (const auto& a : aggregates) tspd::write_aggregate_row(out, a, bench_trace);
            return kExitOk;
        }

        if (*verify) {
            int k = verify_scale;
            std::vector<tspd::CheckResult> checks;
            checks.push_back(tspd::check_split(40 * k, verify_seed));
            checks.push_back(tspd::check_timeline(6 * k, 2000 * k, verify_seed));
            checks.push_back(tspd::check_move_deltas(2000L * k, verify_seed));
            checks.push_back(tspd::check_structure(20000L * k, verify_seed));
            tspd::HgaParams params;
            params.iter_ni = 300;
            for (auto obj : {tspd::Objective::MinCost, tspd::Objective::MinTime}) {
                auto cmp = tspd::compare_with_exact(4 * k, 4, 6, verify_seed, 3, obj, params);
                tspd::CheckResult c;
                c.name = "hga vs exact (" + tspd::to_string(obj) + ")";
                c.passed = cmp.matched + cmp.within == cmp.instances;
                c.detail = std::to_string(cmp.matched) + "/" + std::to_string(cmp.instances) +
                           " optimal, worst gap " + tspd::format_double(cmp.worst_gap) + "%";
                checks.push_back(c);
            }
            bool all = true;
            for (const auto& c : checks) {
                all = all && c.passed;
                std::cout << (c.passed ? "PASS " : "FAIL ") << c.name << ": " << c.detail << '\n';
            }
            return all ? kExitOk : kExitVerifyFailed;
        }
    } catch (const std::exception& e) {
        // Usage, parse and validation errors all end here.
        std::cerr << "tspd: " << e.what() << '\n';
        return kExitUsage;
    }
    return kExitUsage;
}
