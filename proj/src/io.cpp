#include "tspd/io.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>

namespace tspd {

namespace {

std::string describe(const std::string& source, int line, const std::string& field, const std::string& what) {
    std::string out = source;
    if (line > 0) out += ":" + std::to_string(line);
    if (!field.empty()) out += ": " + field;
    return out + ": " + what;
}

std::string trim(const std::string& s) {
    auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::string strip_comment(const std::string& s, char marker) {
    auto pos = s.find(marker);
    return trim(pos == std::string::npos ? s : s.substr(0, pos));
}

std::vector<std::string> tokens(const std::string& s) {
    std::istringstream in(s);
    std::vector<std::string> out;
    for (std::string t; in >> t;) out.push_back(t);
    return out;
}

std::vector<std::string> split_csv(const std::string& s) {
    std::vector<std::string> out;
    std::string cell;
    std::istringstream in(s);
    while (std::getline(in, cell, ',')) out.push_back(trim(cell));
    return out;
}

std::optional<double> to_double(const std::string& text) {
    double v = 0.0;
    const char* end = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(text.data(), end, v);
    if (ec != std::errc() || ptr != end) return std::nullopt;
    return v;
}

// Line-oriented reader that tracks positions for error messages.
class LineReader {
  public:
    LineReader(std::istream& in, std::string source) : in_(in), source_(std::move(source)) {}

    /// Next non-empty line with comments removed.
    bool next(std::string& line) {
        std::string raw;
        while (std::getline(in_, raw)) {
            ++line_no_;
            line = strip_comment(raw, '#');
            if (!line.empty()) return true;
        }
        return false;
    }

    [[noreturn]] void fail(const std::string& field, const std::string& what) const {
        throw ParseError(source_, line_no_, field, what);
    }

    double number(const std::string& text, const std::string& field) const {
        auto v = to_double(text);
        if (!v) fail(field, "expected a number, got '" + text + "'");
        return *v;
    }

    int integer(const std::string& text, const std::string& field) const {
        int v = 0;
        const char* end = text.data() + text.size();
        auto [ptr, ec] = std::from_chars(text.data(), end, v);
        if (ec != std::errc() || ptr != end) fail(field, "expected an integer, got '" + text + "'");
        return v;
    }

    const std::string& source() const { return source_; }
    int line_no() const { return line_no_; }

  private:
    std::istream& in_;
    std::string source_;
    int line_no_ = 0;
};

struct ScalarField {
    const char* key;
    double Instance::*member;
};

constexpr std::array<ScalarField, 9> kScalars{{
    {"endurance", &Instance::endurance},
    {"launch_time", &Instance::launch_time},
    {"retrieve_time", &Instance::retrieve_time},
    {"truck_cost", &Instance::truck_cost},
    {"drone_cost", &Instance::drone_cost},
    {"truck_wait_fee", &Instance::truck_wait_fee},
    {"drone_wait_fee", &Instance::drone_wait_fee},
    {"truck_speed", &Instance::truck_speed},
    {"drone_speed", &Instance::drone_speed},
}};

struct MatrixField {
    const char* block;
    Matrix Instance::*member;
};

constexpr std::array<MatrixField, 4> kMatrices{{
    {"TRUCK_DIST", &Instance::truck_dist},
    {"TRUCK_TIME", &Instance::truck_time},
    {"DRONE_DIST", &Instance::drone_dist},
    {"DRONE_TIME", &Instance::drone_time},
}};

Matrix read_matrix(LineReader& reader, std::size_t size, const std::string& block) {
    Matrix m(size);
    std::string line;
    for (std::size_t i = 0; i < size; ++i) {
        if (!reader.next(line)) reader.fail(block, "missing row " + std::to_string(i));
        auto cells = tokens(line);
        if (cells.size() != size) {
            reader.fail(block, "row " + std::to_string(i) + " has " + std::to_string(cells.size()) +
                                   " values, expected " + std::to_string(size));
        }
        for (std::size_t j = 0; j < size; ++j) {
            m(static_cast<NodeId>(i), static_cast<NodeId>(j)) =
                reader.number(cells[j], block + "[" + std::to_string(i) + "][" + std::to_string(j) + "]");
        }
    }
    return m;
}

Matrix read_csv_matrix(const std::filesystem::path& path, double scale) {
    std::ifstream in(path);
    if (!in) throw ParseError(path.string(), 0, "", "cannot open file");
    std::vector<std::vector<double>> rows;
    std::string raw;
    int line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        std::string line = strip_comment(raw, '%');
        if (line.empty()) continue;
        std::vector<double> row;
        for (const auto& cell : split_csv(line)) {
            auto v = to_double(cell);
            if (!v) throw ParseError(path.string(), line_no, "column " + std::to_string(row.size()), "expected a number, got '" + cell + "'");
            row.push_back(*v * scale);
        }
        rows.push_back(std::move(row));
    }
    Matrix m(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].size() != rows.size()) {
            throw ParseError(path.string(), 0, "row " + std::to_string(i), "matrix is not square");
        }
        for (std::size_t j = 0; j < rows.size(); ++j) m(static_cast<NodeId>(i), static_cast<NodeId>(j)) = rows[i][j];
    }
    return m;
}

/// Appends a depot copy row and column when the matrix covers nodes 0..n only.
Matrix with_depot_copy(const Matrix& m, std::size_t size) {
    if (m.size() == size) return m;
    Matrix out(size);
    auto src = [&](std::size_t i) { return static_cast<NodeId>(i + 1 == size ? 0 : i); };
    for (std::size_t i = 0; i < size; ++i) {
        for (std::size_t j = 0; j < size; ++j) {
            out(static_cast<NodeId>(i), static_cast<NodeId>(j)) = m(src(i), src(j));
        }
    }
    return out;
}

const char* flag_names(const HgaParams& p, std::string& buffer) {
    buffer.clear();
    auto add = [&](bool on, const char* name) {
        if (!on) return;
        if (!buffer.empty()) buffer += ',';
        buffer += name;
    };
    add(p.no_inf, "no-inf");
    add(p.no_div, "no-div");
    add(p.no_repair, "no-repair");
    add(p.no_restore, "no-restore");
    if (buffer.empty()) buffer = "-";
    return buffer.c_str();
}

}  // namespace

ParseError::ParseError(const std::string& source, int line, const std::string& field, const std::string& what)
    : InstanceError(describe(source, line, field, what)), source_(source), line_(line), field_(field) {}

InstanceFormat parse_instance_format(const std::string& name) {
    if (name == "native") return InstanceFormat::Native;
    if (name == "murray") return InstanceFormat::Murray;
    throw std::invalid_argument("unknown instance format '" + name + "'");
}

std::string format_double(double value) {
    std::array<char, 64> buf{};
    auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
    return std::string(buf.data(), ptr);
}

Instance read_native(std::istream& in, const std::string& source) {
    LineReader reader(in, source);
    std::string line;
    if (!reader.next(line)) reader.fail("header", "empty input");
    auto head = tokens(line);
    if (head.size() != 2 || head[0] != kNativeMagic) {
        reader.fail("header", std::string("expected '") + kNativeMagic + " <version>'");
    }
    if (reader.integer(head[1], "version") != kNativeVersion) {
        reader.fail("version", "unsupported version " + head[1]);
    }

    Instance params;
    std::optional<int> n;
    std::string name;
    bool saw_nodes = false;
    std::vector<bool> eligible;
    std::vector<Point> coords;
    std::map<std::string, Matrix> matrices;
    bool ended = false;

    while (reader.next(line)) {
        auto cells = tokens(line);
        const std::string& key = cells[0];
        if (key == "END") {
            ended = true;
            break;
        }
        if (key == "name") {
            name = trim(line.substr(4));
            continue;
        }
        if (key == "n") {
            if (cells.size() != 2) reader.fail("n", "expected 'n <customers>'");
            n = reader.integer(cells[1], "n");
            if (*n < 0) reader.fail("n", "must be >= 0");
            continue;
        }
        if (key == "NODES") {
            if (!n) reader.fail("NODES", "'n' must precede the node block");
            saw_nodes = true;
            auto count = static_cast<std::size_t>(*n) + 1;
            eligible.assign(count, false);
            std::vector<bool> seen(count, false);
            std::size_t with_coords = 0;
            coords.assign(count, Point{});
            for (std::size_t row = 0; row < count; ++row) {
                if (!reader.next(line)) reader.fail("NODES", "missing node rows");
                auto c = tokens(line);
                if (c.size() != 2 && c.size() != 4) reader.fail("NODES", "expected '<id> <eligible> [<x> <y>]'");
                int id = reader.integer(c[0], "node id");
                if (id < 0 || id > *n) reader.fail("node id", "out of range 0.." + std::to_string(*n));
                auto u = static_cast<std::size_t>(id);
                if (seen[u]) reader.fail("node id", "duplicate node " + c[0]);
                seen[u] = true;
                int flag = reader.integer(c[1], "eligible");
                if (flag != 0 && flag != 1) reader.fail("eligible", "expected 0 or 1");
                if (id == 0 && flag == 1) reader.fail("eligible", "the depot cannot be drone eligible");
                eligible[u] = flag == 1;
                if (c.size() == 4) {
                    coords[u] = {reader.number(c[2], "x"), reader.number(c[3], "y")};
                    ++with_coords;
                }
            }
            if (with_coords != 0 && with_coords != count) reader.fail("NODES", "coordinates must be given for all nodes or none");
            if (with_coords == 0) coords.clear();
            continue;
        }
        auto matrix = std::find_if(kMatrices.begin(), kMatrices.end(),
                                   [&](const MatrixField& f) { return key == f.block; });
        if (matrix != kMatrices.end()) {
            if (!n) reader.fail(key, "'n' must precede matrix blocks");
            if (matrices.count(key)) reader.fail(key, "block given twice");
            matrices[key] = read_matrix(reader, static_cast<std::size_t>(*n) + 2, key);
            continue;
        }
        auto scalar = std::find_if(kScalars.begin(), kScalars.end(),
                                   [&](const ScalarField& f) { return key == f.key; });
        if (scalar == kScalars.end()) reader.fail(key, "unknown field");
        if (cells.size() != 2) reader.fail(key, "expected '" + key + " <value>'");
        params.*(scalar->member) = reader.number(cells[1], key);
    }
    if (!ended) reader.fail("END", "missing END");
    if (!n) reader.fail("n", "missing customer count");
    if (!saw_nodes) reader.fail("NODES", "missing node block");

    Instance inst;
    if (!coords.empty()) {
        inst = make_euclidean_instance(coords, eligible, params);
    } else {
        if (matrices.size() != kMatrices.size()) {
            reader.fail("NODES", "without coordinates all four matrix blocks are required");
        }
        inst = params;
        inst.n = *n;
        inst.drone_eligible = eligible;
        inst.drone_eligible.push_back(false);
    }
    for (const auto& f : kMatrices) {
        if (auto it = matrices.find(f.block); it != matrices.end()) inst.*(f.member) = it->second;
    }
    inst.name = name;
    try {
        inst.validate();
    } catch (const InstanceError& e) {
        throw ParseError(source, 0, "", e.what());
    }
    return inst;
}

Instance read_native_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ParseError(path.string(), 0, "", "cannot open file");
    return read_native(in, path.string());
}

void write_native(std::ostream& out, const Instance& inst) {
    out << kNativeMagic << ' ' << kNativeVersion << '\n';
    if (!inst.name.empty()) out << "name " << inst.name << '\n';
    out << "n " << inst.n << '\n';
    for (const auto& f : kScalars) out << f.key << ' ' << format_double(inst.*(f.member)) << '\n';
    out << "NODES\n";
    for (NodeId v = 0; v <= inst.n; ++v) {
        out << v << ' ' << (inst.drone_eligible[static_cast<std::size_t>(v)] ? 1 : 0);
        if (!inst.coords.empty()) {
            const auto& p = inst.coords[static_cast<std::size_t>(v)];
            out << ' ' << format_double(p.x) << ' ' << format_double(p.y);
        }
        out << '\n';
    }
    std::optional<Instance> derived;
    if (!inst.coords.empty()) {
        std::vector<Point> base(inst.coords.begin(), inst.coords.end() - 1);
        derived = make_euclidean_instance(base, inst.drone_eligible, inst);
    }
    for (const auto& f : kMatrices) {
        const Matrix& m = inst.*(f.member);
        if (derived && (*derived).*(f.member) == m) continue;
        out << f.block << '\n';
        for (NodeId i = 0; i < inst.node_count(); ++i) {
            for (NodeId j = 0; j < inst.node_count(); ++j) out << (j ? " " : "") << format_double(m(i, j));
            out << '\n';
        }
    }
    out << "END\n";
}

void write_native_file(const std::filesystem::path& path, const Instance& inst) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    write_native(out, inst);
}

Instance read_murray(const std::filesystem::path& dir, const MurrayOptions& opts) {
    auto customers_path = dir / "Customers.csv";
    std::ifstream in(customers_path);
    if (!in) throw ParseError(customers_path.string(), 0, "", "cannot open file");

    struct Row {
        int id;
        Point p;
        double weight;
    };
    std::vector<Row> rows;
    std::string raw;
    int line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        std::string line = strip_comment(raw, '%');
        if (line.empty()) continue;
        auto cells = split_csv(line);
        if (cells.size() < 3) throw ParseError(customers_path.string(), line_no, "row", "expected 'id,x,y[,weight]'");
        auto field = [&](std::size_t k, const char* name) {
            auto v = to_double(cells[k]);
            if (!v) throw ParseError(customers_path.string(), line_no, name, "expected a number, got '" + cells[k] + "'");
            return *v;
        };
        rows.push_back({static_cast<int>(field(0, "id")), {field(1, "x"), field(2, "y")},
                        cells.size() > 3 ? field(3, "weight") : 0.0});
    }
    if (rows.empty() || rows.front().id != 0) throw ParseError(customers_path.string(), 0, "id", "the depot (id 0) must come first");
    // Some files list the depot copy as a final row at the depot's location.
    if (rows.size() > 1 && rows.back().p == rows.front().p && rows.back().id == static_cast<int>(rows.size()) - 1) {
        rows.pop_back();
    }
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].id != static_cast<int>(i)) {
            throw ParseError(customers_path.string(), 0, "id", "ids must run 0.." + std::to_string(rows.size() - 1) + " in order");
        }
    }

    Instance params;
    params.endurance = opts.endurance;
    params.truck_speed = opts.truck_speed;
    params.drone_speed = opts.drone_speed;
    std::vector<Point> coords;
    std::vector<bool> eligible;
    for (const auto& r : rows) {
        coords.push_back(r.p);
        eligible.push_back(r.id != 0 && r.weight <= opts.max_parcel_weight);
    }
    Instance inst = make_euclidean_instance(coords, eligible, params);
    inst.name = dir.filename().string();
    if (inst.name.empty()) inst.name = dir.parent_path().filename().string();

    auto size = static_cast<std::size_t>(inst.node_count());
    const double minutes = 1.0 / 60.0;
    Matrix tau = read_csv_matrix(dir / "tau.csv", minutes);
    Matrix tau_prime = read_csv_matrix(dir / "tauprime.csv", minutes);
    for (auto* m : {&tau, &tau_prime}) {
        if (m->size() != size && m->size() + 1 != size) {
            throw ParseError(dir.string(), 0, "matrix", "expected " + std::to_string(size) + " rows to match Customers.csv");
        }
    }
    inst.truck_time = with_depot_copy(tau, size);
    inst.drone_time = with_depot_copy(tau_prime, size);
    for (NodeId i = 0; i < inst.node_count(); ++i) {
        for (NodeId j = 0; j < inst.node_count(); ++j) {
            inst.truck_dist(i, j) = inst.truck_time(i, j) * inst.truck_speed;
            inst.drone_dist(i, j) = inst.drone_time(i, j) * inst.drone_speed;
        }
    }
    try {
        inst.validate();
    } catch (const InstanceError& e) {
        throw ParseError(dir.string(), 0, "", e.what());
    }
    return inst;
}

Instance read_instance(const std::filesystem::path& path, InstanceFormat format, const MurrayOptions& murray) {
    return format == InstanceFormat::Native ? read_native_file(path) : read_murray(path, murray);
}

Instance generate_instance(int n, std::uint64_t seed, const GeneratorParams& params) {
    if (n < 1) throw std::invalid_argument("generate_instance: n must be >= 1");
    if (!(params.area > 0.0)) throw std::invalid_argument("generate_instance: area must be > 0");
    if (!(params.drone_eligible_frac >= 0.0 && params.drone_eligible_frac <= 1.0)) {
        throw std::invalid_argument("generate_instance: drone_eligible_frac must lie in [0, 1]");
    }
    Rng rng(seed);
    std::vector<Point> coords;
    for (int i = 0; i <= n; ++i) {
        double x = rng.uniform() * params.area;
        double y = rng.uniform() * params.area;
        coords.push_back({x, y});
    }
    std::vector<NodeId> customers(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) customers[static_cast<std::size_t>(i)] = i + 1;
    rng.shuffle(customers);
    auto count = static_cast<std::size_t>(std::ceil(params.drone_eligible_frac * n - 1e-9));
    std::vector<bool> eligible(static_cast<std::size_t>(n) + 1, false);
    for (std::size_t i = 0; i < count; ++i) eligible[static_cast<std::size_t>(customers[i])] = true;

    Instance p;
    p.endurance = params.endurance;
    p.launch_time = params.launch_time;
    p.retrieve_time = params.retrieve_time;
    p.truck_cost = params.truck_cost;
    p.drone_cost = params.drone_cost;
    p.truck_wait_fee = params.truck_wait_fee;
    p.drone_wait_fee = params.drone_wait_fee;
    p.truck_speed = params.truck_speed;
    p.drone_speed = params.drone_speed;
    Instance inst = make_euclidean_instance(std::move(coords), std::move(eligible), p);
    inst.name = "gen-n" + std::to_string(n) + "-s" + std::to_string(seed);
    inst.validate();
    return inst;
}

void read_params(std::istream& in, HgaParams& params, const std::string& source) {
    std::string raw;
    int line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        std::string line = strip_comment(raw, '#');
        if (line.empty()) continue;
        auto eq = line.find('=');
        if (eq == std::string::npos) throw ParseError(source, line_no, line, "expected 'key = value'");
        std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        if (value.size() >= 2 && value.front() == '"' && value.back() == '"') value = value.substr(1, value.size() - 2);
        try {
            params.set(key, value);
        } catch (const std::invalid_argument& e) {
            throw ParseError(source, line_no, key, e.what());
        }
    }
}

void read_params_file(const std::filesystem::path& path, HgaParams& params) {
    std::ifstream in(path);
    if (!in) throw ParseError(path.string(), 0, "", "cannot open file");
    read_params(in, params, path.string());
}

Objective parse_objective(const std::string& name) {
    if (name == "cost") return Objective::MinCost;
    if (name == "time") return Objective::MinTime;
    throw std::invalid_argument("unknown objective '" + name + "' (expected cost or time)");
}

std::string format_human(const SolveReport& report, const Instance& inst) {
    const auto& r = report.result;
    std::ostringstream out;
    out << "instance   " << (report.instance.empty() ? "-" : report.instance) << " (n=" << inst.n << ")\n";
    out << "objective  " << (report.objective == Objective::MinCost ? "min-cost" : "min-time") << '\n';
    out << "status     " << (r.status == RunStatus::Feasible ? "feasible" : "no feasible solution found") << '\n';
    out << "value      " << format_double(r.value) << '\n';
    if (r.status != RunStatus::Feasible) {
        out << "violation  truck " << format_double(r.evaluation.truck_excess) << " min, drone "
            << format_double(r.evaluation.drone_excess) << " min\n";
    }
    out << "truck      ";
    for (std::size_t i = 0; i < r.best.truck_tour.size(); ++i) out << (i ? " " : "") << r.best.truck_tour[i];
    out << "\ndrone      ";
    if (r.best.drone_deliveries.empty()) out << "-";
    for (std::size_t i = 0; i < r.best.drone_deliveries.size(); ++i) {
        const auto& d = r.best.drone_deliveries[i];
        out << (i ? " " : "") << '<' << d.launch << ',' << d.drone << ',' << d.rendezvous << '>';
    }
    out << "\niterations " << r.stats.iterations << '\n';
    out << "time       " << format_double(std::round(r.stats.wall_seconds * 1000.0) / 1000.0) << " s\n";
    return out.str();
}

std::string format_record(const SolveReport& report) {
    const auto& r = report.result;
    std::string flags;
    std::ostringstream out;
    out << "TSPD-RESULT 1 instance=" << (report.instance.empty() ? "-" : report.instance)
        << " objective=" << to_string(report.objective) << " seed=" << report.seed
        << " crossover=" << to_string(report.params.crossover)
        << " relax=" << to_string(report.params.effective_relax())
        << " flags=" << flag_names(report.params, flags)
        << " status=" << (r.status == RunStatus::Feasible ? "feasible" : "infeasible")
        << " value=" << format_double(r.value) << " iterations=" << r.stats.iterations << " TD=";
    for (std::size_t i = 0; i < r.best.truck_tour.size(); ++i) out << (i ? "," : "") << r.best.truck_tour[i];
    out << " DD=";
    if (r.best.drone_deliveries.empty()) out << '-';
    for (std::size_t i = 0; i < r.best.drone_deliveries.size(); ++i) {
        const auto& d = r.best.drone_deliveries[i];
        out << (i ? ";" : "") << d.launch << ':' << d.drone << ':' << d.rendezvous;
    }
    return out.str();
}

}  // namespace tspd
