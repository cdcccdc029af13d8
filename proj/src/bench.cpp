#include "ilshade/bench.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include "ilshade/rng.hpp"

namespace ilshade::bench {

namespace {

constexpr std::array kBaseFunctions = {
    BaseFunction::Sphere,    BaseFunction::Ellipsoid, BaseFunction::Schwefel12,
    BaseFunction::Rastrigin, BaseFunction::Rosenbrock, BaseFunction::Ackley,
    BaseFunction::Griewank,
};

constexpr std::string_view kShiftedPrefix = "shifted-rotated-";
constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Fixed seed for the built-in shifted-rotated instances; mixed with D and the
// function id so every (function, D) pair gets its own transform.
constexpr std::uint64_t kSuiteSeed = 0x5eed2021ULL;

}  // namespace

std::span<const BaseFunction> all_base_functions() { return kBaseFunctions; }

std::string_view to_string(BaseFunction id)
{
    switch (id) {
    case BaseFunction::Sphere: return "sphere";
    case BaseFunction::Ellipsoid: return "ellipsoid";
    case BaseFunction::Schwefel12: return "schwefel-1.2";
    case BaseFunction::Rastrigin: return "rastrigin";
    case BaseFunction::Rosenbrock: return "rosenbrock";
    case BaseFunction::Ackley: return "ackley";
    case BaseFunction::Griewank: return "griewank";
    }
    return "?";
}

BaseFunction parse_base_function(std::string_view name)
{
    for (BaseFunction id : kBaseFunctions) {
        if (to_string(id) == name) {
            return id;
        }
    }
    throw std::invalid_argument("unknown base function: " + std::string(name));
}

Vector canonical_optimum(BaseFunction id, std::size_t dim)
{
    return Vector(dim, id == BaseFunction::Rosenbrock ? 1.0 : 0.0);
}

double evaluate_base(BaseFunction id, std::span<const double> z)
{
    const std::size_t dim = z.size();
    if (dim == 0) {
        throw std::invalid_argument("evaluate_base: empty point");
    }
    double sum = 0.0;
    switch (id) {
    case BaseFunction::Sphere:
        for (double v : z) sum += v * v;
        return sum;

    case BaseFunction::Ellipsoid:
        for (std::size_t j = 0; j < dim; ++j) {
            const double expo = dim == 1 ? 0.0 : 6.0 * static_cast<double>(j) / (dim - 1.0);
            sum += std::pow(10.0, expo) * z[j] * z[j];
        }
        return sum;

    case BaseFunction::Schwefel12: {
        double prefix = 0.0;
        for (double v : z) {
            prefix += v;
            sum += prefix * prefix;
        }
        return sum;
    }

    case BaseFunction::Rastrigin:
        for (double v : z) sum += v * v - 10.0 * std::cos(kTwoPi * v) + 10.0;
        return sum;

    case BaseFunction::Rosenbrock:
        if (dim == 1) {
            return (z[0] - 1.0) * (z[0] - 1.0);
        }
        for (std::size_t j = 0; j + 1 < dim; ++j) {
            const double a = z[j + 1] - z[j] * z[j];
            const double b = z[j] - 1.0;
            sum += 100.0 * a * a + b * b;
        }
        return sum;

    case BaseFunction::Ackley: {
        double sq = 0.0;
        double cs = 0.0;
        for (double v : z) {
            sq += v * v;
            cs += std::cos(kTwoPi * v);
        }
        const double n = static_cast<double>(dim);
        return -20.0 * std::exp(-0.2 * std::sqrt(sq / n)) - std::exp(cs / n) + 20.0 +
               std::numbers::e;
    }

    case BaseFunction::Griewank: {
        double prod = 1.0;
        for (std::size_t j = 0; j < dim; ++j) {
            sum += z[j] * z[j];
            prod *= std::cos(z[j] / std::sqrt(j + 1.0));
        }
        return sum / 4000.0 - prod + 1.0;
    }
    }
    throw std::invalid_argument("evaluate_base: unknown function id");
}

// ---------------------------------------------------------------------------

Matrix Matrix::identity(std::size_t dim)
{
    Matrix m{dim, std::vector<double>(dim * dim, 0.0)};
    for (std::size_t k = 0; k < dim; ++k) m(k, k) = 1.0;
    return m;
}

Vector Matrix::apply(std::span<const double> x) const
{
    Vector y(dim, 0.0);
    for (std::size_t r = 0; r < dim; ++r) {
        double acc = 0.0;
        for (std::size_t c = 0; c < dim; ++c) acc += (*this)(r, c) * x[c];
        y[r] = acc;
    }
    return y;
}

Vector Matrix::apply_transposed(std::span<const double> x) const
{
    Vector y(dim, 0.0);
    for (std::size_t r = 0; r < dim; ++r) {
        for (std::size_t c = 0; c < dim; ++c) y[c] += (*this)(r, c) * x[r];
    }
    return y;
}

double Matrix::orthogonality_error() const
{
    double worst = 0.0;
    for (std::size_t a = 0; a < dim; ++a) {
        for (std::size_t b = 0; b < dim; ++b) {
            double dot = 0.0;
            for (std::size_t r = 0; r < dim; ++r) dot += (*this)(r, a) * (*this)(r, b);
            worst = std::max(worst, std::abs(dot - (a == b ? 1.0 : 0.0)));
        }
    }
    return worst;
}

Matrix random_rotation(std::size_t dim, std::uint64_t seed)
{
    RngStream rng(seed);
    Matrix m{dim, std::vector<double>(dim * dim)};
    for (auto& v : m.data) v = rng.normal();

    // Modified Gram-Schmidt over columns.
    for (std::size_t c = 0; c < dim; ++c) {
        for (std::size_t prev = 0; prev < c; ++prev) {
            double dot = 0.0;
            for (std::size_t r = 0; r < dim; ++r) dot += m(r, c) * m(r, prev);
            for (std::size_t r = 0; r < dim; ++r) m(r, c) -= dot * m(r, prev);
        }
        double norm = 0.0;
        for (std::size_t r = 0; r < dim; ++r) norm += m(r, c) * m(r, c);
        norm = std::sqrt(norm);
        for (std::size_t r = 0; r < dim; ++r) m(r, c) /= norm;
    }
    return m;
}

// ---------------------------------------------------------------------------

Vector ProblemSpec::optimizer() const
{
    Vector z = canonical_optimum(base, dimension);
    Vector x = rotation ? rotation->apply_transposed(z) : z;
    if (shift) {
        for (std::size_t j = 0; j < dimension; ++j) x[j] += (*shift)[j];
    }
    return x;
}

void ProblemSpec::validate() const
{
    if (dimension == 0) {
        throw ProblemDataError(name + ": dimension must be positive");
    }
    if (!(lower < upper)) {
        throw ProblemDataError(name + ": empty bounds");
    }
    if (shift) {
        if (shift->size() != dimension) {
            throw ProblemDataError(name + ": shift length does not match dimension");
        }
        for (double v : *shift) {
            if (!(v >= lower && v <= upper)) {
                throw ProblemDataError(name + ": shift lies outside the bounds");
            }
        }
    }
    if (rotation) {
        if (rotation->dim != dimension || rotation->data.size() != dimension * dimension) {
            throw ProblemDataError(name + ": rotation size does not match dimension");
        }
        if (!(rotation->orthogonality_error() <= kOrthogonalityTolerance)) {
            throw ProblemDataError(name + ": rotation matrix is not orthogonal");
        }
    }
    for (double v : optimizer()) {
        if (!(v >= lower && v <= upper)) {
            throw ProblemDataError(name + ": optimizer lies outside the bounds");
        }
    }
}

double evaluate_transformed(const ProblemSpec& spec, std::span<const double> x)
{
    if (x.size() != spec.dimension) {
        throw std::invalid_argument(spec.name + ": dimension mismatch");
    }
    Vector z(x.begin(), x.end());
    if (spec.shift) {
        for (std::size_t j = 0; j < z.size(); ++j) z[j] -= (*spec.shift)[j];
    }
    if (spec.rotation) {
        z = spec.rotation->apply(z);
    }
    return evaluate_base(spec.base, z) + spec.bias;
}

ObjectiveFunction ProblemSpec::objective() const
{
    validate();
    return ObjectiveFunction(
        name, Bounds::uniform(dimension, lower, upper),
        [spec = *this](std::span<const double> x) { return evaluate_transformed(spec, x); },
        optimum_value());
}

// ---------------------------------------------------------------------------

namespace {

struct LineReader {
    std::vector<std::string> lines;
    std::size_t next = 0;

    explicit LineReader(std::string_view text)
    {
        std::size_t start = 0;
        while (start <= text.size()) {
            std::size_t end = text.find('\n', start);
            if (end == std::string_view::npos) end = text.size();
            std::string line(text.substr(start, end - start));
            if (!line.empty() && line.back() == '\r') line.pop_back();
            lines.push_back(std::move(line));
            start = end + 1;
        }
        while (!lines.empty() && lines.back().find_first_not_of(" \t") == std::string::npos) {
            lines.pop_back();
        }
    }

    std::size_t line_number() const { return next; }

    struct Line {
        const std::string& text;
        std::size_t number;
    };

    Line take(const char* what)
    {
        if (next >= lines.size()) {
            throw ProblemDataError("line " + std::to_string(next + 1) + ": missing " + what);
        }
        ++next;
        return {lines[next - 1], next};
    }
};

std::vector<std::string_view> split_fields(std::string_view line)
{
    std::vector<std::string_view> fields;
    std::size_t pos = 0;
    while (pos < line.size()) {
        pos = line.find_first_not_of(" \t", pos);
        if (pos == std::string_view::npos) break;
        std::size_t end = line.find_first_of(" \t", pos);
        if (end == std::string_view::npos) end = line.size();
        fields.push_back(line.substr(pos, end - pos));
        pos = end;
    }
    return fields;
}

double parse_real(std::string_view token, std::size_t line)
{
    std::string_view body = token;
    if (!body.empty() && body.front() == '+') body.remove_prefix(1);
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(body.data(), body.data() + body.size(), value);
    if (ec != std::errc() || ptr != body.data() + body.size() || body.empty()) {
        throw ProblemDataError("line " + std::to_string(line) + ": invalid number '" +
                               std::string(token) + "'");
    }
    return value;
}

std::string_view keyed_value(const std::string& line, std::string_view key, std::size_t number)
{
    auto fields = split_fields(line);
    if (fields.size() < 2 || fields[0] != key) {
        throw ProblemDataError("line " + std::to_string(number) + ": expected '" +
                               std::string(key) + " <value>'");
    }
    // The name may contain spaces; take everything after the key.
    const std::size_t at = line.find(fields[1]);
    std::string_view rest(line);
    rest = rest.substr(at);
    while (!rest.empty() && (rest.back() == ' ' || rest.back() == '\t')) rest.remove_suffix(1);
    return rest;
}

Vector parse_row(const std::string& line, std::size_t dim, std::size_t number)
{
    const auto fields = split_fields(line);
    if (fields.size() != dim) {
        throw ProblemDataError("line " + std::to_string(number) + ": expected " +
                               std::to_string(dim) + " values, found " +
                               std::to_string(fields.size()));
    }
    Vector row(dim);
    for (std::size_t k = 0; k < dim; ++k) row[k] = parse_real(fields[k], number);
    return row;
}

std::string format_real(double v)
{
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, ptr);
}

}  // namespace

ProblemSpec parse_problem_data(std::string_view text)
{
    LineReader in(text);
    ProblemSpec spec;

    const auto name_line = in.take("name");
    spec.name = std::string(keyed_value(name_line.text, "name", name_line.number));
    const auto id_line = in.take("id");
    const std::string id(keyed_value(id_line.text, "id", id_line.number));
    try {
        spec.base = parse_base_function(id);
    } catch (const std::invalid_argument&) {
        throw ProblemDataError("line " + std::to_string(in.line_number()) +
                               ": unknown base function '" + id + "'");
    }

    const auto dim_line = in.take("dim");
    const std::string_view dim_text = keyed_value(dim_line.text, "dim", dim_line.number);
    std::size_t dim = 0;
    const auto [ptr, ec] = std::from_chars(dim_text.data(), dim_text.data() + dim_text.size(), dim);
    if (ec != std::errc() || ptr != dim_text.data() + dim_text.size() || dim == 0) {
        throw ProblemDataError("line " + std::to_string(in.line_number()) +
                               ": invalid dimension '" + std::string(dim_text) + "'");
    }
    spec.dimension = dim;

    const auto bias_line = in.take("bias");
    spec.bias = parse_real(keyed_value(bias_line.text, "bias", bias_line.number), bias_line.number);

    const auto shift_line = in.take("shift vector");
    spec.shift = parse_row(shift_line.text, dim, shift_line.number);

    Matrix m{dim, std::vector<double>(dim * dim)};
    for (std::size_t r = 0; r < dim; ++r) {
        const auto row_line = in.take("rotation row");
        const Vector row = parse_row(row_line.text, dim, row_line.number);
        std::copy(row.begin(), row.end(), m.data.begin() + static_cast<std::ptrdiff_t>(r * dim));
    }
    spec.rotation = std::move(m);

    if (in.next < in.lines.size()) {
        throw ProblemDataError("line " + std::to_string(in.next + 1) + ": unexpected trailing data");
    }
    spec.validate();
    return spec;
}

ProblemSpec load_problem_data(const std::filesystem::path& path)
{
    std::ifstream file(path, std::ios::binary);
    if (!file) {
        throw ProblemDataError("cannot open problem file " + path.string());
    }
    std::ostringstream buf;
    buf << file.rdbuf();
    try {
        return parse_problem_data(buf.str());
    } catch (const ProblemDataError& e) {
        throw ProblemDataError(path.string() + ": " + e.what());
    }
}

std::string format_problem_data(const ProblemSpec& spec)
{
    std::string out;
    out += "name " + spec.name + "\n";
    out += "id " + std::string(to_string(spec.base)) + "\n";
    out += "dim " + std::to_string(spec.dimension) + "\n";
    out += "bias " + format_real(spec.bias) + "\n";
    const Vector shift = spec.shift.value_or(Vector(spec.dimension, 0.0));
    for (std::size_t j = 0; j < spec.dimension; ++j) {
        out += (j ? " " : "") + format_real(shift[j]);
    }
    out += "\n";
    const Matrix m = spec.rotation.value_or(Matrix::identity(spec.dimension));
    for (std::size_t r = 0; r < spec.dimension; ++r) {
        for (std::size_t c = 0; c < spec.dimension; ++c) {
            out += (c ? " " : "") + format_real(m(r, c));
        }
        out += "\n";
    }
    return out;
}

// ---------------------------------------------------------------------------

std::vector<std::string> registered_problems()
{
    std::vector<std::string> names;
    for (BaseFunction id : kBaseFunctions) names.emplace_back(to_string(id));
    for (BaseFunction id : kBaseFunctions) {
        names.push_back(std::string(kShiftedPrefix) + std::string(to_string(id)));
    }
    return names;
}

bool is_registered(std::string_view name)
{
    const auto names = registered_problems();
    return std::find(names.begin(), names.end(), name) != names.end();
}

ProblemSpec make_problem(std::string_view name, std::size_t dimension)
{
    if (dimension == 0) {
        throw std::invalid_argument("make_problem: dimension must be positive");
    }
    ProblemSpec spec;
    spec.name = std::string(name);
    spec.dimension = dimension;

    if (name.starts_with(kShiftedPrefix)) {
        spec.base = parse_base_function(name.substr(kShiftedPrefix.size()));
        const std::uint64_t seed =
            kSuiteSeed ^ (static_cast<std::uint64_t>(dimension) << 8) ^
            static_cast<std::uint64_t>(spec.base);
        RngStream rng(seed);
        Vector shift(dimension);
        for (auto& v : shift) v = -80.0 + 160.0 * rng.uniform();
        spec.shift = std::move(shift);
        spec.rotation = random_rotation(dimension, seed + 1);
    } else {
        spec.base = parse_base_function(name);
    }
    spec.validate();
    return spec;
}

}  // namespace ilshade::bench
