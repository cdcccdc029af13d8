#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "ilshade/core.hpp"

namespace ilshade::bench {

class ProblemDataError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class BaseFunction {
    Sphere,
    Ellipsoid,   // high-conditioned elliptic, 10^6 condition
    Schwefel12,  // rotated hyper-ellipsoid: sum of squared prefix sums
    Rastrigin,
    Rosenbrock,
    Ackley,
    Griewank,
};

std::span<const BaseFunction> all_base_functions();
std::string_view to_string(BaseFunction id);
BaseFunction parse_base_function(std::string_view name);

// Point where the base function attains its minimum value 0.
Vector canonical_optimum(BaseFunction id, std::size_t dim);

double evaluate_base(BaseFunction id, std::span<const double> z);

// Row-major dim x dim matrix.
struct Matrix {
    std::size_t dim = 0;
    std::vector<double> data;

    static Matrix identity(std::size_t dim);
    double operator()(std::size_t r, std::size_t c) const { return data[r * dim + c]; }
    double& operator()(std::size_t r, std::size_t c) { return data[r * dim + c]; }
    Vector apply(std::span<const double> x) const;
    Vector apply_transposed(std::span<const double> x) const;
    // max |M^T M - I| entry
    double orthogonality_error() const;

    friend bool operator==(const Matrix&, const Matrix&) = default;
};

// Random orthogonal matrix by Gram-Schmidt on Gaussian columns.
Matrix random_rotation(std::size_t dim, std::uint64_t seed);

// f(x) = base(M (x - o)) + bias
struct ProblemSpec {
    std::string name;
    BaseFunction base = BaseFunction::Sphere;
    std::size_t dimension = 0;
    double lower = -100.0;
    double upper = 100.0;
    double bias = 0.0;
    std::optional<Vector> shift;
    std::optional<Matrix> rotation;

    double optimum_value() const { return bias; }
    // o + M^T z*, with z* the base function's canonical optimum.
    Vector optimizer() const;
    // Throws ProblemDataError on a malformed spec.
    void validate() const;
    ObjectiveFunction objective() const;
};

inline constexpr double kOrthogonalityTolerance = 1e-9;

double evaluate_transformed(const ProblemSpec& spec, std::span<const double> x);

// Line-oriented text file:
//   name <string>
//   id <base-id>
//   dim <D>
//   bias <real>
//   <D shift values>
//   <D rows of D rotation values>
ProblemSpec parse_problem_data(std::string_view text);
ProblemSpec load_problem_data(const std::filesystem::path& path);
std::string format_problem_data(const ProblemSpec& spec);

// Built-in problems: every base function by its own name, plus a
// "shifted-rotated-<base>" variant with a fixed-seed shift and rotation.
std::vector<std::string> registered_problems();
bool is_registered(std::string_view name);
ProblemSpec make_problem(std::string_view name, std::size_t dimension);

}  // namespace ilshade::bench
