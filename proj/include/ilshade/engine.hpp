#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ilshade/adapt.hpp"
#include "ilshade/core.hpp"
#include "ilshade/rng.hpp"
#include "ilshade/strategy.hpp"

namespace ilshade {

// round(sqrt(D) * ln(D) * 25), never below kMinPopulation.
std::size_t default_initial_population(std::size_t dimension);
// 10000 * D
std::uint64_t default_budget(std::size_t dimension);

struct RunConfig {
    std::size_t np_init = 0;  // 0: default_initial_population(D)
    std::size_t np_fin = kMinPopulation;
    std::uint64_t nfe_max = 0;  // 0: default_budget(D)
    double jumping_rate = 0.2;
    double rank_greediness = 3.0;
    std::size_t memory_size = 5;
    double archive_factor = 1.0;
    Perturbation perturbation = Perturbation::cauchy(0.1);
    // Stop once FEV <= tolerance (requires a known optimum).
    std::optional<double> target_tolerance;
    std::size_t trace_points = 100;
    std::uint64_t seed = 0;

    // Defaults filled in for the given dimension and invariants checked.
    RunConfig resolved(std::size_t dimension) const;

    friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

struct TracePoint {
    std::uint64_t nfe = 0;
    double best_fev = 0.0;

    friend bool operator==(const TracePoint&, const TracePoint&) = default;
};

struct RunRecord {
    std::string algorithm;
    std::string problem;
    std::size_t dimension = 0;
    double best_f = 0.0;
    double fev = 0.0;
    // True when the problem has no known optimum and fev == best_f.
    bool fev_is_absolute = false;
    std::uint64_t nfe_used = 0;
    std::size_t generations = 0;
    // Trial vectors built with the perturbed recombination.
    std::uint64_t perturbed_trials = 0;
    std::vector<TracePoint> trace;
    Vector best_x;
    std::uint64_t seed = 0;
    RunConfig config;

    friend bool operator==(const RunRecord&, const RunRecord&) = default;
};

double compute_fev(double best_f, double optimum);

std::size_t lpsr_next_size(std::size_t np_init, std::size_t np_fin, std::uint64_t nfe,
                           std::uint64_t nfe_max);

// Counts evaluations against the budget, tracks the best point, and records
// trace checkpoints at ceil(k * nfe_max / trace_points), k = 1..trace_points.
class BudgetedEvaluator {
public:
    BudgetedEvaluator(const ObjectiveFunction& obj, std::uint64_t nfe_max,
                      std::size_t trace_points);

    double evaluate(std::span<const double> x);

    std::uint64_t nfe() const { return nfe_; }
    std::uint64_t nfe_max() const { return nfe_max_; }
    bool exhausted() const { return nfe_ >= nfe_max_; }
    double best_f() const { return best_f_; }
    const Vector& best_x() const { return best_x_; }
    double best_fev() const;
    // Fills any checkpoints not yet reached with the current best FEV.
    std::vector<TracePoint> finished_trace() const;

private:
    const ObjectiveFunction& obj_;
    std::uint64_t nfe_ = 0;
    std::uint64_t nfe_max_;
    double best_f_;
    Vector best_x_;
    std::vector<std::uint64_t> checkpoints_;
    std::vector<TracePoint> trace_;
};

// The iLSHADE-RSP driver, advanced one generation at a time.
//
// Per generation the population is sorted best-first; then for each member
// i, in order, (F, CR) are assigned, the jump gate u is drawn and the trial
// is built with the perturbed recombination when u < jumping_rate, otherwise
// with the original one. All trials are repaired, then evaluated in order;
// a trial replaces its parent when f(trial) <= f(parent), the parent enters
// the archive and a strict improvement enters the success set. LPSR then
// drops the worst members, the archive is cut to capacity by random
// swap-removal, and the memory is updated.
class IlshadeRsp {
public:
    IlshadeRsp(const RunConfig& cfg, const ObjectiveFunction& obj, RandomSource& rng);

    bool finished() const;
    void step();
    RunRecord run();

    const RunConfig& config() const { return cfg_; }
    const Population& population() const { return pop_; }
    const HistoricalMemory& memory() const { return memory_; }
    // Successes of the last completed generation.
    const SuccessSet& successes() const { return successes_; }
    std::uint64_t perturbed_trials() const { return perturbed_; }
    std::size_t archive_capacity() const;

    RunRecord record() const;

private:
    RunConfig cfg_;
    const ObjectiveFunction& obj_;
    RandomSource& rng_;
    BudgetedEvaluator eval_;
    Population pop_;
    HistoricalMemory memory_;
    SuccessSet successes_;
    std::uint64_t perturbed_ = 0;
};

RunRecord run_ilshade_rsp(const RunConfig& cfg, const ObjectiveFunction& obj, RandomSource& rng);
// Seeds an RngStream from cfg.seed.
RunRecord run_ilshade_rsp(const RunConfig& cfg, const ObjectiveFunction& obj);

struct ClassicDeOptions {
    double F = 0.5;
    double CR = 0.9;
    MutationKind mutation = MutationKind::Rand1;
    bool exponential_crossover = false;
};

// Fixed-parameter DE with population cfg.np_init (no LPSR, no archive).
RunRecord run_classic_de(const RunConfig& cfg, const ObjectiveFunction& obj, RandomSource& rng,
                         const ClassicDeOptions& opts = {});
RunRecord run_classic_de(const RunConfig& cfg, const ObjectiveFunction& obj,
                         const ClassicDeOptions& opts = {});

}  // namespace ilshade
