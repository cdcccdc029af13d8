#include "ilshade/strategy.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

#include "ilshade/sampling.hpp"

namespace ilshade {

namespace {

std::size_t attempt_cap(std::size_t np) { return 100 * std::max<std::size_t>(np, 1); }

template <typename Draw, typename Reject>
std::size_t draw_until(std::size_t np, Draw draw, Reject reject, const char* what)
{
    const std::size_t cap = attempt_cap(np);
    for (std::size_t attempt = 0; attempt < cap; ++attempt) {
        const std::size_t k = draw();
        if (!reject(k)) {
            return k;
        }
    }
    throw IndexSelectionError(std::string("could not draw a distinct ") + what + " index");
}

}  // namespace

MutationKind parse_mutation_kind(std::string_view name)
{
    if (name == "rand/1") return MutationKind::Rand1;
    if (name == "rand/2") return MutationKind::Rand2;
    if (name == "best/1") return MutationKind::Best1;
    if (name == "best/2") return MutationKind::Best2;
    if (name == "current-to-best/1") return MutationKind::CurrentToBest1;
    if (name == "current-to-rand/1") return MutationKind::CurrentToRand1;
    throw std::invalid_argument("unknown mutation strategy: " + std::string(name));
}

std::string_view to_string(MutationKind kind)
{
    switch (kind) {
    case MutationKind::Rand1: return "rand/1";
    case MutationKind::Rand2: return "rand/2";
    case MutationKind::Best1: return "best/1";
    case MutationKind::Best2: return "best/2";
    case MutationKind::CurrentToBest1: return "current-to-best/1";
    case MutationKind::CurrentToRand1: return "current-to-rand/1";
    }
    return "?";
}

std::size_t required_donors(MutationKind kind)
{
    switch (kind) {
    case MutationKind::Rand1: return 3;
    case MutationKind::Rand2: return 5;
    case MutationKind::Best1: return 2;
    case MutationKind::Best2: return 4;
    case MutationKind::CurrentToBest1: return 2;
    case MutationKind::CurrentToRand1: return 3;
    }
    return 0;
}

Vector classical_mutation(MutationKind kind, std::size_t i, std::span<const Individual> members,
                          double F, RandomSource& rng)
{
    const std::size_t np = members.size();
    const std::size_t need = required_donors(kind);
    if (i >= np) {
        throw std::out_of_range("classical_mutation: target index out of range");
    }
    if (np < need + 1) {
        throw IndexSelectionError("population of " + std::to_string(np) + " is too small for DE/" +
                                  std::string(to_string(kind)));
    }

    std::array<std::size_t, 5> r{};
    for (std::size_t n = 0; n < need; ++n) {
        r[n] = draw_until(
            np, [&] { return rng.index(np); },
            [&](std::size_t k) {
                return k == i || std::find(r.begin(), r.begin() + n, k) != r.begin() + n;
            },
            "donor");
    }

    const auto& xi = members[i].x;
    const std::size_t dim = xi.size();
    std::size_t best = 0;
    for (std::size_t k = 1; k < np; ++k) {
        if (members[k].f < members[best].f) best = k;
    }
    const auto& xb = members[best].x;
    auto x = [&](std::size_t n) -> const Vector& { return members[r[n]].x; };

    Vector v(dim);
    switch (kind) {
    case MutationKind::Rand1:
        for (std::size_t j = 0; j < dim; ++j) v[j] = x(0)[j] + F * (x(1)[j] - x(2)[j]);
        break;
    case MutationKind::Rand2:
        for (std::size_t j = 0; j < dim; ++j)
            v[j] = x(0)[j] + F * (x(1)[j] - x(2)[j]) + F * (x(3)[j] - x(4)[j]);
        break;
    case MutationKind::Best1:
        for (std::size_t j = 0; j < dim; ++j) v[j] = xb[j] + F * (x(0)[j] - x(1)[j]);
        break;
    case MutationKind::Best2:
        for (std::size_t j = 0; j < dim; ++j)
            v[j] = xb[j] + F * (x(0)[j] - x(1)[j]) + F * (x(2)[j] - x(3)[j]);
        break;
    case MutationKind::CurrentToBest1:
        for (std::size_t j = 0; j < dim; ++j)
            v[j] = xi[j] + F * (xb[j] - xi[j]) + F * (x(0)[j] - x(1)[j]);
        break;
    case MutationKind::CurrentToRand1: {
        const double K = rng.uniform();
        for (std::size_t j = 0; j < dim; ++j)
            v[j] = xi[j] + K * (x(0)[j] - xi[j]) + F * (x(1)[j] - x(2)[j]);
        break;
    }
    }
    return v;
}

std::vector<double> rank_probabilities(std::size_t np, double k)
{
    if (np == 0) {
        throw std::invalid_argument("rank_probabilities: np must be positive");
    }
    if (!(k > 0.0)) {
        throw std::invalid_argument("rank_probabilities: greediness must be positive");
    }
    std::vector<double> rank(np);
    double total = 0.0;
    for (std::size_t i = 0; i < np; ++i) {
        rank[i] = k * static_cast<double>(np - 1 - i) + 1.0;
        total += rank[i];
    }
    for (auto& r : rank) r /= total;
    return rank;
}

RankSelector::RankSelector(std::size_t np, double k)
    : np_(np), probabilities_(rank_probabilities(np, k))
{
    // Cumulative raw ranks so that each archive slot can be appended with weight 1.
    cumulative_.resize(np);
    double running = 0.0;
    for (std::size_t i = 0; i < np; ++i) {
        running += k * static_cast<double>(np - 1 - i) + 1.0;
        cumulative_[i] = running;
    }
}

std::size_t RankSelector::select(RandomSource& rng) const
{
    return select_with_archive(0, rng);
}

std::size_t RankSelector::select_with_archive(std::size_t archive_size, RandomSource& rng) const
{
    const double pop_total = cumulative_.back();
    const double total = pop_total + static_cast<double>(archive_size);
    const double target = rng.uniform() * total;
    if (target < pop_total) {
        auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), target);
        return std::min<std::size_t>(static_cast<std::size_t>(it - cumulative_.begin()), np_ - 1);
    }
    const auto slot = static_cast<std::size_t>(target - pop_total);
    return np_ + std::min(slot, archive_size - 1);
}

double pbest_fraction(std::uint64_t nfe, std::uint64_t nfe_max)
{
    return 0.085 * (1.0 + static_cast<double>(nfe) / static_cast<double>(nfe_max));
}

std::size_t pbest_pool_size(double p, std::size_t np)
{
    const auto pool = static_cast<std::size_t>(std::ceil(p * static_cast<double>(np)));
    return std::min(np, std::max<std::size_t>(2, pool));
}

double pbest_weight(double F, std::uint64_t nfe, std::uint64_t nfe_max)
{
    const double frac = static_cast<double>(nfe) / static_cast<double>(nfe_max);
    if (frac < 0.2) return 0.7 * F;
    if (frac < 0.4) return 0.8 * F;
    return 1.2 * F;
}

MutationContext MutationContext::scheduled(std::span<const Individual> sorted,
                                           std::span<const ArchiveEntry> archive,
                                           const RankSelector& ranks, double F, std::uint64_t nfe,
                                           std::uint64_t nfe_max)
{
    MutationContext ctx;
    ctx.sorted = sorted;
    ctx.archive = archive;
    ctx.ranks = &ranks;
    ctx.p = pbest_fraction(nfe, nfe_max);
    ctx.F = F;
    ctx.F_w = pbest_weight(F, nfe, nfe_max);
    ctx.nfe = nfe;
    ctx.nfe_max = nfe_max;
    return ctx;
}

Donors draw_donors(std::size_t i, const MutationContext& ctx, RandomSource& rng)
{
    const std::size_t np = ctx.sorted.size();
    if (ctx.ranks == nullptr || ctx.ranks->population_size() != np) {
        throw std::invalid_argument("draw_donors: rank selector does not match population");
    }
    if (np < 3) {
        throw IndexSelectionError("draw_donors: need at least 3 members");
    }
    const std::size_t pool = pbest_pool_size(ctx.p, np);
    const std::size_t archive_size = ctx.archive.size();

    Donors d;
    d.pbest = draw_until(
        np, [&] { return rng.index(pool); }, [&](std::size_t k) { return k == i; }, "pbest");
    d.pr1 = draw_until(
        np, [&] { return ctx.ranks->select(rng); }, [&](std::size_t k) { return k == i; }, "pr1");
    const std::size_t pr2 = draw_until(
        np + archive_size, [&] { return ctx.ranks->select_with_archive(archive_size, rng); },
        [&](std::size_t k) { return k == i || k == d.pr1; }, "pr2");
    d.from_archive = pr2 >= np;
    d.pr2 = d.from_archive ? pr2 - np : pr2;
    return d;
}

double pbest_r_component(std::size_t i, std::size_t j, const MutationContext& ctx,
                         const Donors& d)
{
    const double xi = ctx.sorted[i].x[j];
    const double xp = ctx.sorted[d.pbest].x[j];
    const double x1 = ctx.sorted[d.pr1].x[j];
    const double x2 = d.from_archive ? ctx.archive[d.pr2].x[j] : ctx.sorted[d.pr2].x[j];
    return xi + ctx.F_w * (xp - xi) + ctx.F * (x1 - x2);
}

Vector current_to_pbest_r(std::size_t i, const MutationContext& ctx, RandomSource& rng)
{
    const Donors d = draw_donors(i, ctx, rng);
    const std::size_t dim = ctx.sorted[i].x.size();
    Vector v(dim);
    for (std::size_t j = 0; j < dim; ++j) {
        v[j] = pbest_r_component(i, j, ctx, d);
    }
    return v;
}

Vector binomial_crossover(std::span<const double> target, std::span<const double> mutant,
                          double CR, RandomSource& rng)
{
    if (target.size() != mutant.size() || target.empty()) {
        throw std::invalid_argument("binomial_crossover: length mismatch");
    }
    const std::size_t dim = target.size();
    const std::size_t j_rand = rng.index(dim);
    Vector trial(target.begin(), target.end());
    for (std::size_t j = 0; j < dim; ++j) {
        if (rng.uniform() < CR || j == j_rand) {
            trial[j] = mutant[j];
        }
    }
    return trial;
}

Vector exponential_crossover(std::span<const double> target, std::span<const double> mutant,
                             double CR, RandomSource& rng)
{
    if (target.size() != mutant.size() || target.empty()) {
        throw std::invalid_argument("exponential_crossover: length mismatch");
    }
    const std::size_t dim = target.size();
    const std::size_t start = rng.index(dim);
    std::size_t length = 0;
    do {
        ++length;
    } while (rng.uniform() < CR && length < dim);

    Vector trial(target.begin(), target.end());
    for (std::size_t n = 0; n < length; ++n) {
        const std::size_t j = (start + n) % dim;
        trial[j] = mutant[j];
    }
    return trial;
}

Vector recombine(std::size_t i, const MutationContext& ctx, double CR,
                 const Perturbation& perturbation, RandomSource& rng)
{
    const auto& xi = ctx.sorted[i].x;
    const std::size_t dim = xi.size();
    const std::size_t j_rand = rng.index(dim);

    Vector trial(xi);
    std::vector<char> crossed(dim, 0);
    for (std::size_t j = 0; j < dim; ++j) {
        if (rng.uniform() < CR || j == j_rand) {
            crossed[j] = 1;
            continue;
        }
        switch (perturbation.kind) {
        case Perturbation::Kind::None:
            break;
        case Perturbation::Kind::Cauchy:
            trial[j] = cauchy_sample({xi[j], perturbation.scale}, rng);
            break;
        case Perturbation::Kind::Stable:
            trial[j] = stable_sample({perturbation.alpha, 0.0, perturbation.scale, xi[j]}, rng);
            break;
        }
    }

    const Donors d = draw_donors(i, ctx, rng);
    for (std::size_t j = 0; j < dim; ++j) {
        if (crossed[j]) {
            trial[j] = pbest_r_component(i, j, ctx, d);
        }
    }
    return trial;
}

Vector recombine_original(std::size_t i, const MutationContext& ctx, double CR,
                          RandomSource& rng)
{
    return recombine(i, ctx, CR, Perturbation::none(), rng);
}

Vector recombine_cauchy(std::size_t i, const MutationContext& ctx, double CR, RandomSource& rng)
{
    return recombine(i, ctx, CR, Perturbation::cauchy(0.1), rng);
}

}  // namespace ilshade
