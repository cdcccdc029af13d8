#include <doctest.h>

#include <cmath>
#include <numbers>

#include "ilshade/bench.hpp"
#include "ilshade/rng.hpp"

using namespace ilshade;
using namespace ilshade::bench;

TEST_CASE("base functions vanish at their canonical optimum")
{
    for (BaseFunction id : all_base_functions()) {
        for (std::size_t d : {1u, 2u, 10u, 30u}) {
            CAPTURE(to_string(id));
            CHECK(std::abs(evaluate_base(id, canonical_optimum(id, d))) <= 1e-12);
        }
    }
    CHECK(evaluate_base(BaseFunction::Sphere, Vector(5, 0.0)) == 0.0);
    CHECK(evaluate_base(BaseFunction::Rastrigin, Vector(5, 0.0)) == 0.0);
    CHECK(evaluate_base(BaseFunction::Rosenbrock, Vector(5, 1.0)) == 0.0);
}

TEST_CASE("base function spot values")
{
    CHECK(evaluate_base(BaseFunction::Sphere, Vector{1, 2, 3}) == 14.0);
    CHECK(evaluate_base(BaseFunction::Schwefel12, Vector{1, 2, 3}) == 1.0 + 9.0 + 36.0);
    CHECK(evaluate_base(BaseFunction::Ellipsoid, Vector{1, 1}) == 1.0 + 1e6);
    CHECK(evaluate_base(BaseFunction::Rastrigin, Vector{1.0}) == doctest::Approx(1.0));
    CHECK(evaluate_base(BaseFunction::Rosenbrock, Vector{0, 0}) == 1.0);
    CHECK(evaluate_base(BaseFunction::Griewank, Vector{0, 0}) == 0.0);
    CHECK(evaluate_base(BaseFunction::Ackley, Vector{0, 0}) == doctest::Approx(0.0).scale(1));
    CHECK(evaluate_base(BaseFunction::Ackley, Vector{1.0}) > 0.0);
    CHECK_THROWS_AS(evaluate_base(BaseFunction::Sphere, Vector{}), std::invalid_argument);
}

TEST_CASE("function ids round-trip and unknown ids fail")
{
    for (BaseFunction id : all_base_functions()) CHECK(parse_base_function(to_string(id)) == id);
    CHECK_THROWS_AS(parse_base_function("schwefel-2.13"), std::invalid_argument);
}

TEST_CASE("random rotations are orthogonal and seed-determined")
{
    for (std::size_t d : {1u, 2u, 5u, 30u}) {
        const Matrix m = random_rotation(d, 17);
        CHECK(m.orthogonality_error() < kOrthogonalityTolerance);
        CHECK(m == random_rotation(d, 17));
    }
    CHECK_FALSE(random_rotation(4, 1) == random_rotation(4, 2));
}

TEST_CASE("transform identity, shift cancellation and rotation invariance")
{
    ProblemSpec spec;
    spec.name = "t";
    spec.base = BaseFunction::Rastrigin;
    spec.dimension = 4;
    const Vector x{1.5, -2.0, 0.25, 3.0};
    CHECK(evaluate_transformed(spec, x) == evaluate_base(BaseFunction::Rastrigin, x));

    spec.shift = Vector{10, -20, 30, 5};
    spec.rotation = random_rotation(4, 3);
    CHECK(evaluate_transformed(spec, *spec.shift) == doctest::Approx(0.0).scale(1));

    ProblemSpec sph = spec;
    sph.base = BaseFunction::Sphere;
    sph.shift.reset();
    CHECK(evaluate_transformed(sph, x) == doctest::Approx(evaluate_base(BaseFunction::Sphere, x)));

    spec.bias = 300.0;
    CHECK(spec.optimum_value() == 300.0);
    CHECK(evaluate_transformed(spec, spec.optimizer()) == doctest::Approx(300.0));
    CHECK_THROWS_AS(evaluate_transformed(spec, Vector{1.0}), std::invalid_argument);
}

TEST_CASE("spec validation")
{
    ProblemSpec spec;
    spec.name = "v";
    spec.dimension = 2;
    CHECK_NOTHROW(spec.validate());
    spec.shift = Vector{150, 0};
    CHECK_THROWS_AS(spec.validate(), ProblemDataError);
    spec.shift = Vector{1};
    CHECK_THROWS_AS(spec.validate(), ProblemDataError);
    spec.shift.reset();
    spec.rotation = Matrix{2, {1, 1, 0, 1}};
    CHECK_THROWS_AS(spec.validate(), ProblemDataError);
    spec.rotation = Matrix::identity(3);
    CHECK_THROWS_AS(spec.validate(), ProblemDataError);
}

TEST_CASE("problem file with identity rotation and zero shift")
{
    const std::string text =
        "name plain\nid sphere\ndim 3\nbias 0\n0 0 0\n1 0 0\n0 1 0\n0 0 1\n";
    const ProblemSpec spec = parse_problem_data(text);
    CHECK(spec.name == "plain");
    CHECK(spec.dimension == 3);
    const auto obj = spec.objective();
    const Vector x{1, -2, 3};
    CHECK(obj.evaluate(x) == evaluate_base(BaseFunction::Sphere, x));
    CHECK(obj.optimum_value() == 0.0);
}

TEST_CASE("2-D file with a 90 degree rotation")
{
    const std::string text = "name rot\nid rastrigin\ndim 2\nbias 1.5e2\n1 0\n0 -1\n1 0\n";
    const ProblemSpec spec = parse_problem_data(text);
    CHECK(spec.bias == 150.0);
    CHECK(evaluate_transformed(spec, Vector{1, 0}) == 150.0);
    // M (x - o) for x = (1, 1): M (0, 1) = (-1, 0)
    CHECK(evaluate_transformed(spec, Vector{1, 1}) ==
          doctest::Approx(150.0 + evaluate_base(BaseFunction::Rastrigin, Vector{-1, 0})));
}

TEST_CASE("problem file errors name the line")
{
    const auto message = [](const std::string& text) {
        try {
            parse_problem_data(text);
        } catch (const ProblemDataError& e) {
            return std::string(e.what());
        }
        return std::string("no error");
    };
    CHECK(message("name a\nid sphere\ndim 2\nbias 0\n0 0\n1 0\n").find("line 7") !=
          std::string::npos);
    CHECK(message("name a\nid sphere\ndim 2\nbias 0\n0 0\n1 0\n0 x\n").find("line 7") !=
          std::string::npos);
    CHECK(message("name a\nid cube\ndim 2\nbias 0\n0 0\n1 0\n0 1\n").find("line 2") !=
          std::string::npos);
    CHECK(message("name a\nid sphere\ndim 2\nbias 0\n0 0 0\n1 0\n0 1\n").find("line 5") !=
          std::string::npos);
    CHECK(message("name a\nid sphere\ndimension 2\n").find("line 3") != std::string::npos);
    CHECK(message("name a\nid sphere\ndim 2\nbias 0\n0 0\n1 1\n0 1\n").find("orthogonal") !=
          std::string::npos);
    CHECK(message("name a\nid sphere\ndim 2\nbias 0\n500 0\n1 0\n0 1\n").find("outside") !=
          std::string::npos);
}

TEST_CASE("problem file round trip")
{
    const ProblemSpec spec = make_problem("shifted-rotated-ackley", 6);
    const ProblemSpec back = parse_problem_data(format_problem_data(spec));
    CHECK(back.name == spec.name);
    CHECK(back.base == spec.base);
    CHECK(back.bias == spec.bias);
    CHECK(*back.shift == *spec.shift);
    CHECK(*back.rotation == *spec.rotation);
}

TEST_CASE("load_problem_data reports missing files")
{
    CHECK_THROWS_AS(load_problem_data("/nonexistent/problem.txt"), ProblemDataError);
}

TEST_CASE("registry")
{
    const auto names = registered_problems();
    CHECK(names.size() == 2 * all_base_functions().size());
    CHECK(is_registered("rastrigin"));
    CHECK(is_registered("shifted-rotated-rosenbrock"));
    CHECK_FALSE(is_registered("cec2017-f1"));
    CHECK_THROWS(make_problem("cec2017-f1", 10));
    CHECK_THROWS(make_problem("sphere", 0));
    for (const auto& name : names) {
        for (std::size_t d : {2u, 10u, 30u}) {
            CAPTURE(name);
            const ProblemSpec spec = make_problem(name, d);
            const auto obj = spec.objective();
            CHECK(obj.bounds().contains(spec.optimizer()));
            CHECK(std::abs(obj.evaluate(spec.optimizer()) - spec.optimum_value()) < 1e-10);
        }
    }
    CHECK(make_problem("shifted-rotated-sphere", 10).shift ==
          make_problem("shifted-rotated-sphere", 10).shift);
}

TEST_CASE("evaluations are finite inside the bounds")
{
    RngStream rng(1);
    for (const auto& name : registered_problems()) {
        const auto obj = make_problem(name, 10).objective();
        for (int t = 0; t < 200; ++t) {
            Vector x(10);
            for (auto& v : x) v = -100 + 200 * rng.uniform();
            REQUIRE(std::isfinite(obj.evaluate(x)));
        }
    }
}
