#include "ilshade/engine.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "ilshade/sampling.hpp"

namespace ilshade {

std::size_t default_initial_population(std::size_t dimension)
{
    const double d = static_cast<double>(dimension);
    const auto np = static_cast<std::size_t>(std::round(std::sqrt(d) * std::log(d) * 25.0));
    return std::max(np, kMinPopulation);
}

std::uint64_t default_budget(std::size_t dimension) { return 10000ULL * dimension; }

RunConfig RunConfig::resolved(std::size_t dimension) const
{
    if (dimension == 0) {
        throw std::invalid_argument("RunConfig: dimension must be positive");
    }
    RunConfig cfg = *this;
    if (cfg.np_init == 0) cfg.np_init = default_initial_population(dimension);
    if (cfg.nfe_max == 0) cfg.nfe_max = default_budget(dimension);

    if (cfg.np_fin < kMinPopulation) {
        throw std::invalid_argument("RunConfig: final population must be at least 4");
    }
    if (cfg.np_init < cfg.np_fin) {
        throw std::invalid_argument("RunConfig: initial population below final population");
    }
    if (cfg.nfe_max < cfg.np_init) {
        throw std::invalid_argument("RunConfig: budget smaller than initial population");
    }
    if (!(cfg.jumping_rate >= 0.0 && cfg.jumping_rate <= 1.0)) {
        throw std::invalid_argument("RunConfig: jumping rate must lie in [0, 1]");
    }
    if (!(cfg.rank_greediness > 0.0)) {
        throw std::invalid_argument("RunConfig: rank greediness must be positive");
    }
    if (cfg.memory_size < 2) {
        throw std::invalid_argument("RunConfig: memory size must be at least 2");
    }
    if (!(cfg.archive_factor >= 0.0)) {
        throw std::invalid_argument("RunConfig: archive factor must be nonnegative");
    }
    if (cfg.trace_points == 0) {
        throw std::invalid_argument("RunConfig: need at least one trace point");
    }
    if (cfg.perturbation.kind != Perturbation::Kind::None && !(cfg.perturbation.scale > 0.0)) {
        throw std::invalid_argument("RunConfig: perturbation scale must be positive");
    }
    if (cfg.perturbation.kind == Perturbation::Kind::Stable) {
        validate(StableParams{cfg.perturbation.alpha, 0.0, cfg.perturbation.scale, 0.0});
    }
    return cfg;
}

double compute_fev(double best_f, double optimum) { return best_f - optimum; }

std::size_t lpsr_next_size(std::size_t np_init, std::size_t np_fin, std::uint64_t nfe,
                           std::uint64_t nfe_max)
{
    if (nfe_max == 0) {
        throw std::invalid_argument("lpsr_next_size: empty budget");
    }
    nfe = std::min(nfe, nfe_max);
    const double ratio = static_cast<double>(nfe) / static_cast<double>(nfe_max);
    const double size = static_cast<double>(np_init) -
                        ratio * (static_cast<double>(np_init) - static_cast<double>(np_fin));
    return std::max(np_fin, static_cast<std::size_t>(std::round(size)));
}

// ---------------------------------------------------------------------------

BudgetedEvaluator::BudgetedEvaluator(const ObjectiveFunction& obj, std::uint64_t nfe_max,
                                     std::size_t trace_points)
    : obj_(obj), nfe_max_(nfe_max), best_f_(std::numeric_limits<double>::infinity())
{
    checkpoints_.reserve(trace_points);
    for (std::size_t k = 1; k <= trace_points; ++k) {
        // ceil(k * nfe_max / points) in integer arithmetic
        const std::uint64_t at = (k * nfe_max_ + trace_points - 1) / trace_points;
        if (checkpoints_.empty() || at > checkpoints_.back()) {
            checkpoints_.push_back(at);
        }
    }
    trace_.reserve(checkpoints_.size());
}

double BudgetedEvaluator::evaluate(std::span<const double> x)
{
    if (exhausted()) {
        throw std::logic_error("BudgetedEvaluator: budget exhausted");
    }
    const double f = obj_.evaluate(x);
    ++nfe_;
    if (f < best_f_) {
        best_f_ = f;
        best_x_.assign(x.begin(), x.end());
    }
    while (trace_.size() < checkpoints_.size() && nfe_ >= checkpoints_[trace_.size()]) {
        trace_.push_back({checkpoints_[trace_.size()], best_fev()});
    }
    return f;
}

double BudgetedEvaluator::best_fev() const
{
    const auto& opt = obj_.optimum_value();
    return opt ? compute_fev(best_f_, *opt) : best_f_;
}

std::vector<TracePoint> BudgetedEvaluator::finished_trace() const
{
    std::vector<TracePoint> trace = trace_;
    for (std::size_t k = trace.size(); k < checkpoints_.size(); ++k) {
        trace.push_back({checkpoints_[k], best_fev()});
    }
    return trace;
}

// ---------------------------------------------------------------------------

namespace {

bool target_reached(const RunConfig& cfg, const ObjectiveFunction& obj,
                    const BudgetedEvaluator& eval)
{
    return cfg.target_tolerance && obj.optimum_value() && eval.nfe() > 0 &&
           eval.best_fev() <= *cfg.target_tolerance;
}

RunRecord make_record(std::string algorithm, const RunConfig& cfg, const ObjectiveFunction& obj,
                      const BudgetedEvaluator& eval, std::size_t generations)
{
    RunRecord rec;
    rec.algorithm = std::move(algorithm);
    rec.problem = obj.name();
    rec.dimension = obj.dimension();
    rec.best_f = eval.best_f();
    rec.fev = eval.best_fev();
    rec.fev_is_absolute = !obj.optimum_value().has_value();
    rec.nfe_used = eval.nfe();
    rec.generations = generations;
    rec.trace = eval.finished_trace();
    rec.best_x = eval.best_x();
    rec.seed = cfg.seed;
    rec.config = cfg;
    return rec;
}

Population evaluate_initial(std::size_t np, const ObjectiveFunction& obj, RandomSource& rng,
                            BudgetedEvaluator& eval)
{
    if (np < kMinPopulation) {
        throw std::invalid_argument("population must hold at least 4 members");
    }
    Population pop;
    pop.nfe_max = eval.nfe_max();
    pop.members = sample_members(np, obj.bounds(), rng);
    for (auto& ind : pop.members) {
        ind.f = eval.evaluate(ind.x);
    }
    pop.nfe = eval.nfe();
    return pop;
}

}  // namespace

IlshadeRsp::IlshadeRsp(const RunConfig& cfg, const ObjectiveFunction& obj, RandomSource& rng)
    : cfg_(cfg.resolved(obj.dimension())), obj_(obj), rng_(rng),
      eval_(obj, cfg_.nfe_max, cfg_.trace_points), memory_(cfg_.memory_size)
{
    pop_ = evaluate_initial(cfg_.np_init, obj_, rng_, eval_);
}

bool IlshadeRsp::finished() const
{
    return eval_.exhausted() || target_reached(cfg_, obj_, eval_);
}

std::size_t IlshadeRsp::archive_capacity() const
{
    return static_cast<std::size_t>(
        std::round(cfg_.archive_factor * static_cast<double>(pop_.size())));
}

void IlshadeRsp::step()
{
    if (finished()) {
        return;
    }
    pop_.sort_by_fitness();
    const std::size_t np = pop_.size();
    const std::uint64_t nfe0 = eval_.nfe();
    const RankSelector ranks(np, cfg_.rank_greediness);

    std::vector<Vector> trials(np);
    for (std::size_t i = 0; i < np; ++i) {
        const Parameters params = assign_parameters(memory_, nfe0, cfg_.nfe_max, rng_);
        pop_.members[i].F = params.F;
        pop_.members[i].CR = params.CR;

        const MutationContext ctx =
            MutationContext::scheduled(pop_.members, pop_.archive, ranks, params.F, nfe0,
                                       cfg_.nfe_max);
        const bool jump = rng_.uniform() < cfg_.jumping_rate;
        Vector trial;
        if (jump) {
            ++perturbed_;
            trial = recombine(i, ctx, params.CR, cfg_.perturbation, rng_);
        } else {
            trial = recombine_original(i, ctx, params.CR, rng_);
        }
        trials[i] = repair_bounds(std::move(trial), pop_.members[i].x, obj_.bounds());
    }

    successes_.clear();
    for (std::size_t i = 0; i < np && !eval_.exhausted(); ++i) {
        const double f_trial = eval_.evaluate(trials[i]);
        Individual& parent = pop_.members[i];
        if (f_trial <= parent.f) {
            pop_.archive.push_back({parent.x, parent.f});
            successes_.add(parent.F, parent.CR, parent.f - f_trial);
            parent.x = std::move(trials[i]);
            parent.f = f_trial;
        }
    }
    pop_.nfe = eval_.nfe();

    const std::size_t next = lpsr_next_size(cfg_.np_init, cfg_.np_fin, pop_.nfe, cfg_.nfe_max);
    if (next < np) {
        pop_.sort_by_fitness();
        pop_.members.resize(next);
    }

    const std::size_t cap = archive_capacity();
    while (pop_.archive.size() > cap) {
        const std::size_t k = rng_.index(pop_.archive.size());
        std::swap(pop_.archive[k], pop_.archive.back());
        pop_.archive.pop_back();
    }

    memory_ = update_memory(std::move(memory_), successes_);
    ++pop_.generation;
}

RunRecord IlshadeRsp::record() const
{
    const char* name = cfg_.jumping_rate == 0.0 ? "lshade-rsp" : "ilshade-rsp";
    RunRecord rec = make_record(name, cfg_, obj_, eval_, pop_.generation);
    rec.perturbed_trials = perturbed_;
    return rec;
}

RunRecord IlshadeRsp::run()
{
    while (!finished()) {
        step();
    }
    return record();
}

RunRecord run_ilshade_rsp(const RunConfig& cfg, const ObjectiveFunction& obj, RandomSource& rng)
{
    return IlshadeRsp(cfg, obj, rng).run();
}

RunRecord run_ilshade_rsp(const RunConfig& cfg, const ObjectiveFunction& obj)
{
    RngStream rng(cfg.seed);
    return run_ilshade_rsp(cfg, obj, rng);
}

// ---------------------------------------------------------------------------

RunRecord run_classic_de(const RunConfig& cfg_in, const ObjectiveFunction& obj, RandomSource& rng,
                         const ClassicDeOptions& opts)
{
    if (!(opts.F > 0.0 && opts.F <= 1.0)) {
        throw std::invalid_argument("classic DE: F must lie in (0, 1]");
    }
    if (!(opts.CR >= 0.0 && opts.CR <= 1.0)) {
        throw std::invalid_argument("classic DE: CR must lie in [0, 1]");
    }
    RunConfig cfg = cfg_in;
    if (cfg.np_init != 0 && cfg.np_init < required_donors(opts.mutation) + 1) {
        throw IndexSelectionError("classic DE: population of " + std::to_string(cfg.np_init) +
                                  " too small for DE/" + std::string(to_string(opts.mutation)));
    }
    cfg.np_fin = kMinPopulation;
    cfg = cfg.resolved(obj.dimension());

    BudgetedEvaluator eval(obj, cfg.nfe_max, cfg.trace_points);
    Population pop = evaluate_initial(cfg.np_init, obj, rng, eval);
    const std::size_t np = pop.size();

    std::vector<Vector> trials(np);
    while (!eval.exhausted() && !target_reached(cfg, obj, eval)) {
        for (std::size_t i = 0; i < np; ++i) {
            const Vector mutant = classical_mutation(opts.mutation, i, pop.members, opts.F, rng);
            Vector trial = opts.exponential_crossover
                               ? exponential_crossover(pop.members[i].x, mutant, opts.CR, rng)
                               : binomial_crossover(pop.members[i].x, mutant, opts.CR, rng);
            trials[i] = repair_bounds(std::move(trial), pop.members[i].x, obj.bounds());
        }
        for (std::size_t i = 0; i < np && !eval.exhausted(); ++i) {
            const double f_trial = eval.evaluate(trials[i]);
            if (f_trial <= pop.members[i].f) {
                pop.members[i].x = trials[i];
                pop.members[i].f = f_trial;
            }
        }
        ++pop.generation;
    }
    pop.nfe = eval.nfe();

    RunRecord rec = make_record("classic-de", cfg, obj, eval, pop.generation);
    return rec;
}

RunRecord run_classic_de(const RunConfig& cfg, const ObjectiveFunction& obj,
                         const ClassicDeOptions& opts)
{
    RngStream rng(cfg.seed);
    return run_classic_de(cfg, obj, rng, opts);
}

}  // namespace ilshade
