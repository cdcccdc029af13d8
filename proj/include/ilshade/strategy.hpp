#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string_view>
#include <vector>

#include "ilshade/core.hpp"
#include "ilshade/rng.hpp"

namespace ilshade {

class IndexSelectionError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class MutationKind { Rand1, Rand2, Best1, Best2, CurrentToBest1, CurrentToRand1 };

MutationKind parse_mutation_kind(std::string_view name);
std::string_view to_string(MutationKind kind);
// Number of distinct indices (excluding i) the strategy needs.
std::size_t required_donors(MutationKind kind);

// Classical DE mutations over an unsorted population. Donors r1..r5 are drawn
// in order by rejection (distinct from each other and from i); the best
// member is located by objective value. CurrentToRand1 draws K after donors.
Vector classical_mutation(MutationKind kind, std::size_t i, std::span<const Individual> members,
                          double F, RandomSource& rng);

// Rank_i = k (np - i) + 1 for 1-based i, normalized. Index 0 is the best.
std::vector<double> rank_probabilities(std::size_t np, double k);

// Roulette over a best-first population with rank weights, optionally
// extended by archive slots of weight 1 (the smallest population rank).
class RankSelector {
public:
    RankSelector(std::size_t np, double k);

    std::size_t population_size() const { return np_; }
    std::span<const double> probabilities() const { return probabilities_; }

    // Population index in [0, np).
    std::size_t select(RandomSource& rng) const;
    // Index in [0, np + archive_size); values >= np address the archive.
    std::size_t select_with_archive(std::size_t archive_size, RandomSource& rng) const;

private:
    std::size_t np_;
    std::vector<double> cumulative_;
    std::vector<double> probabilities_;
};

// Population-size fraction that forms the pbest pool.
double pbest_fraction(std::uint64_t nfe, std::uint64_t nfe_max);
// max(2, ceil(p * np)), capped at np.
std::size_t pbest_pool_size(double p, std::size_t np);
// Three-phase weight on the pbest difference: 0.7F, 0.8F, then 1.2F.
double pbest_weight(double F, std::uint64_t nfe, std::uint64_t nfe_max);

struct MutationContext {
    std::span<const Individual> sorted;  // best first
    std::span<const ArchiveEntry> archive;
    const RankSelector* ranks = nullptr;
    double p = 0.085;
    double F = 0.5;
    double F_w = 0.35;
    std::uint64_t nfe = 0;
    std::uint64_t nfe_max = 1;

    // Fills p and F_w from the schedules for the given F.
    static MutationContext scheduled(std::span<const Individual> sorted,
                                     std::span<const ArchiveEntry> archive,
                                     const RankSelector& ranks, double F, std::uint64_t nfe,
                                     std::uint64_t nfe_max);
};

struct Donors {
    std::size_t pbest = 0;
    std::size_t pr1 = 0;
    // Index into the population, or into the archive when from_archive.
    std::size_t pr2 = 0;
    bool from_archive = false;
};

// Draw order: pbest, pr1, pr2, each by rejection against the exclusion rules
// (pbest != i, pr1 != i, pr2 != i, pr2 != pr1).
Donors draw_donors(std::size_t i, const MutationContext& ctx, RandomSource& rng);

// Mutant component j for fixed donors.
double pbest_r_component(std::size_t i, std::size_t j, const MutationContext& ctx,
                         const Donors& d);

// DE/current-to-pbest/r full mutant vector.
Vector current_to_pbest_r(std::size_t i, const MutationContext& ctx, RandomSource& rng);

// Draws j_rand, then one uniform per component.
Vector binomial_crossover(std::span<const double> target, std::span<const double> mutant,
                          double CR, RandomSource& rng);

// Draws start n, then the run length L by do-while.
Vector exponential_crossover(std::span<const double> target, std::span<const double> mutant,
                             double CR, RandomSource& rng);

// How non-crossover components of the trial are produced.
struct Perturbation {
    enum class Kind { None, Cauchy, Stable };
    Kind kind = Kind::None;
    double scale = 0.1;
    double alpha = 1.0;

    static Perturbation none() { return {}; }
    static Perturbation cauchy(double scale = 0.1) { return {Kind::Cauchy, scale, 1.0}; }
    static Perturbation stable(double alpha, double scale = 0.1)
    {
        return {Kind::Stable, scale, alpha};
    }

    friend bool operator==(const Perturbation&, const Perturbation&) = default;
};

// Fused DE/current-to-pbest/r mutation and binomial crossover. Draw order:
// j_rand, then per component the crossover uniform followed (for a
// non-crossover component under an active perturbation) by its perturbation
// draw, then donors.
Vector recombine(std::size_t i, const MutationContext& ctx, double CR,
                 const Perturbation& perturbation, RandomSource& rng);

// Non-crossover components copy the target.
Vector recombine_original(std::size_t i, const MutationContext& ctx, double CR,
                          RandomSource& rng);

// Non-crossover components are Cauchy draws centred on the target, scale 0.1.
Vector recombine_cauchy(std::size_t i, const MutationContext& ctx, double CR, RandomSource& rng);

}  // namespace ilshade
