#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "ilshade/bench.hpp"
#include "ilshade/engine.hpp"
#include "ilshade/stats.hpp"

namespace ilshade::experiment {

class PlanError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class CsvError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// key = value files with [section] or [section name] headers; '#' and ';'
// start comments.

struct IniSection {
    std::string kind;
    std::string name;
    std::vector<std::pair<std::string, std::string>> entries;
    std::size_t line = 0;
};

std::vector<IniSection> parse_ini(std::string_view text);

// ---------------------------------------------------------------------------

enum class AlgorithmType { IlshadeRsp, LshadeRsp, ClassicDe };

std::vector<std::string> algorithm_types();
AlgorithmType parse_algorithm_type(std::string_view name);
std::string_view to_string(AlgorithmType type);

struct AlgorithmSpec {
    std::string id;
    AlgorithmType type = AlgorithmType::IlshadeRsp;
    RunConfig config;
    ClassicDeOptions de;
};

// Defaults per type: lshade-rsp pins jumping_rate = 0; classic-de uses
// NP = 100, F = 0.5, CR = 0.9.
AlgorithmSpec make_algorithm(std::string id, AlgorithmType type);
// Applies one RunConfig / DE option by key; throws PlanError on unknown keys.
void apply_override(AlgorithmSpec& spec, std::string_view key, std::string_view value);

RunRecord run_algorithm(const AlgorithmSpec& spec, const ObjectiveFunction& obj,
                        std::uint64_t seed, std::uint64_t budget, std::size_t trace_points);

// ---------------------------------------------------------------------------

struct ExperimentPlan {
    std::vector<AlgorithmSpec> algorithms;
    // Registered problem names, or "file:<path>" for a problem data file.
    std::vector<std::string> problems;
    std::vector<std::size_t> dimensions;
    std::vector<std::uint64_t> seeds;
    // Evaluation budget per run; 10000 * D when unset.
    std::optional<std::uint64_t> budget;
    std::filesystem::path output_dir;
    std::size_t trace_points = 100;
    // Worker threads; 0 picks the hardware concurrency.
    std::size_t threads = 0;

    // Throws PlanError; checks every problem resolves before anything runs.
    void validate() const;
};

// seeds such as "1-5, 9, 12"
std::vector<std::uint64_t> parse_seed_list(std::string_view text);

// Relative "file:" paths resolve against base_dir.
ExperimentPlan parse_plan(std::string_view text, const std::filesystem::path& base_dir = {});
ExperimentPlan load_plan(const std::filesystem::path& path);

// Name of the environment variable holding the default output directory.
inline constexpr const char* kOutputDirEnv = "ILSHADE_OUTPUT_DIR";

struct ProblemInstance {
    bench::ProblemSpec spec;
    ObjectiveFunction objective;
};

ProblemInstance resolve_problem(std::string_view ref, std::size_t dimension);
// Dimensions a problem reference runs at: the plan's list, or the file's own.
std::vector<std::size_t> problem_dimensions(const ExperimentPlan& plan, std::string_view ref);

// ---------------------------------------------------------------------------

struct ResultRow {
    std::string algorithm;
    std::string problem;
    std::size_t dimension = 0;
    std::uint64_t seed = 0;
    std::uint64_t nfe_used = 0;
    double best_f = 0.0;
    double fev = 0.0;

    friend bool operator==(const ResultRow&, const ResultRow&) = default;
};

// Shortest decimal text that parses back to the same double.
std::string format_number(double v);
double parse_number(std::string_view text);

inline constexpr std::string_view kResultsHeader = "algorithm,problem,D,seed,nfe_used,best_f,fev";

std::string format_results_csv(const std::vector<ResultRow>& rows);
std::vector<ResultRow> parse_results_csv(std::string_view text);
std::vector<ResultRow> load_results_csv(const std::filesystem::path& path);

struct TraceTable {
    std::vector<std::uint64_t> nfe;
    std::vector<std::string> columns;
    // values[row][column]
    std::vector<std::vector<double>> values;

    friend bool operator==(const TraceTable&, const TraceTable&) = default;
};

std::string format_trace_csv(const TraceTable& table);
TraceTable parse_trace_csv(std::string_view text);

// Linear-interpolation quantile of an unsorted sample.
double quantile(std::vector<double> sample, double q);

// nfe, then <alg>_median, <alg>_q1, <alg>_q3 per algorithm (in given order).
TraceTable build_trace_table(const std::vector<std::string>& algorithms,
                             const std::vector<std::vector<const RunRecord*>>& runs);

std::string trace_file_name(std::string_view problem, std::size_t dimension);

struct ExperimentOutput {
    std::filesystem::path results_csv;
    std::vector<std::filesystem::path> trace_csvs;
    std::vector<ResultRow> rows;
};

ExperimentOutput run_experiment(const ExperimentPlan& plan);

// ---------------------------------------------------------------------------

struct ComparisonCell {
    std::string problem;
    std::size_t dimension = 0;
    // Verdict of each non-control algorithm against the control.
    std::vector<stats::Verdict> verdicts;
    std::vector<double> p_values;
};

struct Tally {
    std::size_t better = 0;
    std::size_t equal = 0;
    std::size_t worse = 0;
};

struct ComparisonTable {
    std::string control;
    double alpha = 0.05;
    std::vector<std::string> algorithms;  // every algorithm, control included
    std::vector<std::string> challengers; // algorithms minus the control
    std::vector<ComparisonCell> cells;
    std::vector<Tally> tallies;           // per challenger
    std::optional<stats::FriedmanResult> friedman;
    std::vector<stats::PostHocRow> post_hoc;  // indices into algorithms
};

ComparisonTable compare(const std::vector<ResultRow>& rows, std::string_view control,
                        double alpha = 0.05);
std::string format_comparison(const ComparisonTable& table);

}  // namespace ilshade::experiment
