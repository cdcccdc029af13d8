#include "ilshade/core.hpp"

#include <algorithm>
#include <cmath>

namespace ilshade {

Bounds::Bounds(Vector lower, Vector upper) : lower_(std::move(lower)), upper_(std::move(upper))
{
    if (lower_.empty()) {
        throw std::invalid_argument("Bounds: dimension must be at least 1");
    }
    if (lower_.size() != upper_.size()) {
        throw std::invalid_argument("Bounds: lower/upper length mismatch");
    }
    for (std::size_t j = 0; j < lower_.size(); ++j) {
        if (!(lower_[j] < upper_[j])) {
            throw std::invalid_argument("Bounds: lower must be strictly below upper at index " +
                                        std::to_string(j));
        }
    }
}

Bounds Bounds::uniform(std::size_t dim, double lo, double hi)
{
    return Bounds(Vector(dim, lo), Vector(dim, hi));
}

bool Bounds::contains(std::span<const double> x) const
{
    if (x.size() != dimension()) {
        return false;
    }
    for (std::size_t j = 0; j < x.size(); ++j) {
        if (!(x[j] >= lower_[j] && x[j] <= upper_[j])) {
            return false;
        }
    }
    return true;
}

std::size_t Population::best_index() const
{
    std::size_t best = 0;
    for (std::size_t i = 1; i < members.size(); ++i) {
        if (members[i].f < members[best].f) {
            best = i;
        }
    }
    return best;
}

void Population::sort_by_fitness()
{
    std::stable_sort(members.begin(), members.end(),
                     [](const Individual& a, const Individual& b) { return a.f < b.f; });
}

ObjectiveFunction::ObjectiveFunction(std::string name, Bounds bounds, Fn fn,
                                     std::optional<double> optimum_value)
    : name_(std::move(name)), bounds_(std::move(bounds)), fn_(std::move(fn)),
      optimum_(optimum_value)
{
    if (!fn_) {
        throw std::invalid_argument("ObjectiveFunction: empty evaluator");
    }
}

double ObjectiveFunction::evaluate(std::span<const double> x) const
{
    if (x.size() != dimension()) {
        throw EvaluationError(name_ + ": expected dimension " + std::to_string(dimension()) +
                              ", got " + std::to_string(x.size()));
    }
    const double value = fn_(x);
    if (std::isnan(value)) {
        throw EvaluationError(name_ + ": objective returned NaN");
    }
    return value;
}

std::vector<Individual> sample_members(std::size_t np, const Bounds& b, RandomSource& rng)
{
    std::vector<Individual> members(np);
    for (auto& ind : members) {
        ind.x.resize(b.dimension());
        for (std::size_t j = 0; j < b.dimension(); ++j) {
            ind.x[j] = b.lower(j) + rng.uniform() * (b.upper(j) - b.lower(j));
        }
    }
    return members;
}

Population initialize_population(std::size_t np, std::uint64_t nfe_max,
                                 const ObjectiveFunction& obj, RandomSource& rng)
{
    if (np < kMinPopulation) {
        throw std::invalid_argument("initialize_population: need at least 4 members");
    }
    if (nfe_max < np) {
        throw std::invalid_argument("initialize_population: budget smaller than population");
    }
    Population pop;
    pop.nfe_max = nfe_max;
    pop.members = sample_members(np, obj.bounds(), rng);
    for (auto& ind : pop.members) {
        ind.f = obj.evaluate(ind.x);
        ++pop.nfe;
    }
    return pop;
}

Vector repair_bounds(Vector x, std::span<const double> parent, const Bounds& b)
{
    for (std::size_t j = 0; j < x.size(); ++j) {
        if (x[j] < b.lower(j)) {
            x[j] = (b.lower(j) + parent[j]) / 2.0;
        } else if (x[j] > b.upper(j)) {
            x[j] = (b.upper(j) + parent[j]) / 2.0;
        }
    }
    return x;
}

}  // namespace ilshade
