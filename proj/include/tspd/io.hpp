#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>

#include "tspd/evaluation.hpp"
#include "tspd/genetic.hpp"
#include "tspd/model.hpp"

namespace tspd {

/// Malformed instance or parameter text. `line` is 1-based, 0 when unknown.
class ParseError : public InstanceError {
  public:
    ParseError(const std::string& source, int line, const std::string& field, const std::string& what);

    const std::string& source() const { return source_; }
    int line() const { return line_; }
    const std::string& field() const { return field_; }

  private:
    std::string source_;
    int line_;
    std::string field_;
};

enum class InstanceFormat { Native, Murray };

InstanceFormat parse_instance_format(const std::string& name);

/// Header line of the native format; the trailing number is the version.
inline constexpr const char* kNativeMagic = "TSPD-INSTANCE";
inline constexpr int kNativeVersion = 1;

/// Native text format:
///
///     TSPD-INSTANCE 1
///     name <token>               (optional)
///     n <customers>
///     <parameter> <value>        (endurance, launch_time, ...; defaults apply)
///     NODES
///     <id> <eligible 0|1> [<x> <y>]   one row per node 0..n
///     [TRUCK_DIST | TRUCK_TIME | DRONE_DIST | DRONE_TIME
///      n+2 rows of n+2 values]   (optional overrides; required without coordinates)
///     END
///
/// '#' starts a comment. Missing matrices are derived from coordinates.
Instance read_native(std::istream& in, const std::string& source = "<input>");
Instance read_native_file(const std::filesystem::path& path);

/// Writes shortest round-trip decimal forms, so reading back gives an
/// identical Instance. Matrices are written only when they differ from the
/// coordinate-derived ones.
void write_native(std::ostream& out, const Instance& inst);
void write_native_file(const std::filesystem::path& path, const Instance& inst);

struct MurrayOptions {
    double endurance = 20.0;
    /// Customers heavier than this are not drone eligible.
    double max_parcel_weight = 5.0;
    double truck_speed = 2.0 / 3.0;
    double drone_speed = 2.0 / 3.0;
};

/// Murray-Chu layout: a directory holding Customers.csv ("id,x,y,weight"
/// rows, '%' comments, depot first) and tau.csv / tauprime.csv with travel
/// times in seconds. Times become minutes and distances are time x speed.
Instance read_murray(const std::filesystem::path& dir, const MurrayOptions& opts = {});

Instance read_instance(const std::filesystem::path& path, InstanceFormat format,
                       const MurrayOptions& murray = {});

struct GeneratorParams {
    double area = 20.0;
    double drone_eligible_frac = 0.8;
    double endurance = 20.0;
    double launch_time = 1.0;
    double retrieve_time = 1.0;
    double truck_cost = 25.0;
    double drone_cost = 1.0;
    double truck_wait_fee = 1.0;
    double drone_wait_fee = 1.0;
    double truck_speed = 2.0 / 3.0;
    double drone_speed = 2.0 / 3.0;
};

/// Uniform points in [0, area]^2 with ceil(frac * n) eligible customers
/// chosen uniformly. Deterministic in (n, seed, params).
Instance generate_instance(int n, std::uint64_t seed, const GeneratorParams& params = {});

/// Reads "key = value" lines into params ('#' comments, blank lines allowed).
void read_params(std::istream& in, HgaParams& params, const std::string& source = "<params>");
void read_params_file(const std::filesystem::path& path, HgaParams& params);

Objective parse_objective(const std::string& name);

/// Shortest decimal text that parses back to the same double.
std::string format_double(double value);

struct SolveReport {
    std::string instance;
    Objective objective = Objective::MinCost;
    std::uint64_t seed = 0;
    HgaParams params;
    HgaResult result;
};

/// Multi-line description for people.
std::string format_human(const SolveReport& report, const Instance& inst);

/// Single line, no timing fields, stable across runs:
///   TSPD-RESULT 1 instance=<name> objective=<cost|time> seed=<s> crossover=<x>
///   relax=<r> flags=<list|-> status=<feasible|infeasible> value=<v>
///   iterations=<k> TD=<a,b,...> DD=<i:j:k;...|->
std::string format_record(const SolveReport& report);

}  // namespace tspd
