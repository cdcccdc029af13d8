#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "ilshade/experiment.hpp"

namespace ex = ilshade::experiment;

namespace {

struct RunOptions {
    std::string plan_file;
    // Algorithm-level overrides, applied to every algorithm in the plan.
    std::vector<std::pair<std::string, std::string>> overrides;
    std::optional<std::uint64_t> budget;
    std::optional<std::size_t> trace_points;
    std::optional<std::string> seeds;
    std::optional<std::size_t> threads;
    std::optional<std::string> output;
    bool quiet = false;
};

void add_override(CLI::App* cmd, RunOptions& opts, const std::string& flag,
                  const std::string& key, const std::string& help)
{
    cmd->add_option_function<std::string>(
        flag, [&opts, key](const std::string& v) { opts.overrides.emplace_back(key, v); }, help);
}

int do_run(const RunOptions& opts)
{
    ex::ExperimentPlan plan = ex::load_plan(opts.plan_file);
    for (auto& alg : plan.algorithms) {
        for (const auto& [key, value] : opts.overrides) {
            if (key == "jumping_rate" && alg.type == ex::AlgorithmType::LshadeRsp) continue;
            ex::apply_override(alg, key, value);
        }
    }
    if (opts.budget) plan.budget = *opts.budget;
    if (opts.trace_points) plan.trace_points = *opts.trace_points;
    if (opts.seeds) plan.seeds = ex::parse_seed_list(*opts.seeds);
    if (opts.threads) plan.threads = *opts.threads;
    if (opts.output) plan.output_dir = *opts.output;

    const auto out = ex::run_experiment(plan);
    if (!opts.quiet) {
        std::cout << "runs: " << out.rows.size() << '\n';
        std::cout << "results: " << out.results_csv.string() << '\n';
        for (const auto& t : out.trace_csvs) std::cout << "trace: " << t.string() << '\n';
    }
    return 0;
}

int do_compare(const std::vector<std::string>& files, double alpha, const std::string& control,
               const std::string& output)
{
    std::vector<ex::ResultRow> rows;
    for (const auto& f : files) {
        auto part = ex::load_results_csv(f);
        rows.insert(rows.end(), part.begin(), part.end());
    }
    const std::string text = ex::format_comparison(ex::compare(rows, control, alpha));
    if (output.empty()) {
        std::cout << text;
    } else {
        std::ofstream out(output, std::ios::binary);
        if (!out || !(out << text)) {
            std::cerr << "error: cannot write " << output << '\n';
            return 1;
        }
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"iLSHADE-RSP experiment runner"};
    app.require_subcommand(1);

    RunOptions run_opts;
    auto* run = app.add_subcommand("run", "Execute an experiment plan");
    run->add_option("plan", run_opts.plan_file, "Plan file")->required()->check(CLI::ExistingFile);
    add_override(run, run_opts, "--np-init", "np_init", "Initial population size");
    add_override(run, run_opts, "--np-fin", "np_fin", "Final population size");
    add_override(run, run_opts, "--jumping-rate", "jumping_rate", "Jumping rate p_j");
    add_override(run, run_opts, "--rank-greediness", "rank_greediness", "Rank greediness k");
    add_override(run, run_opts, "--memory-size", "memory_size", "Historical memory size H");
    add_override(run, run_opts, "--archive-factor", "archive_factor", "Archive size factor");
    add_override(run, run_opts, "--perturbation", "perturbation", "cauchy | stable:<alpha>");
    add_override(run, run_opts, "--perturbation-scale", "perturbation_scale",
                 "Scale of the perturbation draws");
    add_override(run, run_opts, "--target-tolerance", "target_tolerance",
                 "Stop a run once FEV falls to this value");
    add_override(run, run_opts, "--de-f", "F", "Classic DE scale factor");
    add_override(run, run_opts, "--de-cr", "CR", "Classic DE crossover rate");
    add_override(run, run_opts, "--mutation", "mutation", "Classic DE mutation strategy");
    add_override(run, run_opts, "--crossover", "crossover", "Classic DE crossover (bin|exp)");
    run->add_option("--budget", run_opts.budget, "Evaluations per run (default 10000*D)");
    run->add_option("--trace-points", run_opts.trace_points, "Trace checkpoints per run");
    run->add_option("--seeds", run_opts.seeds, "Seed list, e.g. 1-51");
    run->add_option("--threads", run_opts.threads, "Worker threads (0 = all cores)");
    run->add_option("--output", run_opts.output,
                    std::string("Output directory (default $") + ex::kOutputDirEnv + ")");
    run->add_flag("-q,--quiet", run_opts.quiet, "Print nothing on success");

    std::vector<std::string> result_files;
    double alpha = 0.05;
    std::string control;
    std::string compare_out;
    auto* cmp = app.add_subcommand("compare", "Statistical comparison of result CSV files");
    cmp->add_option("results", result_files, "Result CSV files")->required()->check(CLI::ExistingFile);
    cmp->add_option("--alpha", alpha, "Significance level")->check(CLI::Range(0.0, 1.0));
    cmp->add_option("--control", control, "Control algorithm id")->required();
    cmp->add_option("-o,--output", compare_out, "Write the table to a file");

    auto* list_problems = app.add_subcommand("list-problems", "Print built-in problem ids");
    auto* list_algorithms = app.add_subcommand("list-algorithms", "Print algorithm types");

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) return do_run(run_opts);
        if (cmp->parsed()) return do_compare(result_files, alpha, control, compare_out);
        if (list_problems->parsed()) {
            for (const auto& p : ilshade::bench::registered_problems()) std::cout << p << '\n';
        }
        if (list_algorithms->parsed()) {
            for (const auto& a : ex::algorithm_types()) std::cout << a << '\n';
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
