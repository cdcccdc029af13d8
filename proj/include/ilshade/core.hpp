#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "ilshade/rng.hpp"

namespace ilshade {

using Vector = std::vector<double>;

// Smallest population any driver may run with; LPSR ends here.
inline constexpr std::size_t kMinPopulation = 4;

class EvaluationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Box constraints of a D-dimensional search space.
class Bounds {
public:
    Bounds(Vector lower, Vector upper);

    // [lo, hi]^dim
    static Bounds uniform(std::size_t dim, double lo, double hi);

    std::size_t dimension() const { return lower_.size(); }
    const Vector& lower() const { return lower_; }
    const Vector& upper() const { return upper_; }
    double lower(std::size_t j) const { return lower_[j]; }
    double upper(std::size_t j) const { return upper_[j]; }

    bool contains(std::span<const double> x) const;

private:
    Vector lower_;
    Vector upper_;
};

struct Individual {
    Vector x;
    double f = std::numeric_limits<double>::quiet_NaN();
    double F = 0.5;
    double CR = 0.5;

    bool evaluated() const { return f == f; }
};

struct ArchiveEntry {
    Vector x;
    double f = 0.0;

    friend bool operator==(const ArchiveEntry&, const ArchiveEntry&) = default;
};

struct Population {
    std::vector<Individual> members;
    std::vector<ArchiveEntry> archive;
    std::size_t generation = 0;
    std::uint64_t nfe = 0;
    std::uint64_t nfe_max = 0;

    std::size_t size() const { return members.size(); }
    // Index of the member with the lowest objective value (first on ties).
    std::size_t best_index() const;
    // Stable ascending sort by objective value.
    void sort_by_fitness();
};

// A bounded minimization problem. evaluate must be deterministic and safe to
// call concurrently from independent runs.
class ObjectiveFunction {
public:
    using Fn = std::function<double(std::span<const double>)>;

    ObjectiveFunction(std::string name, Bounds bounds, Fn fn,
                      std::optional<double> optimum_value = std::nullopt);

    const std::string& name() const { return name_; }
    std::size_t dimension() const { return bounds_.dimension(); }
    const Bounds& bounds() const { return bounds_; }
    const std::optional<double>& optimum_value() const { return optimum_; }

    // Throws EvaluationError on dimension mismatch or a NaN result.
    double evaluate(std::span<const double> x) const;

private:
    std::string name_;
    Bounds bounds_;
    Fn fn_;
    std::optional<double> optimum_;
};

// Uniform random points inside the bounds, one uniform per component in
// member-major order. Members are left unevaluated.
std::vector<Individual> sample_members(std::size_t np, const Bounds& b, RandomSource& rng);

// sample_members followed by evaluation of every member in order.
Population initialize_population(std::size_t np, std::uint64_t nfe_max,
                                 const ObjectiveFunction& obj, RandomSource& rng);

// Midpoint repair toward the (feasible) parent for each violated component.
Vector repair_bounds(Vector x, std::span<const double> parent, const Bounds& b);

}  // namespace ilshade
