#include "layered/benchmarks.hpp"
#include "layered/rng.hpp"

#include <doctest.h>

#include <cmath>
#include <set>
#include <stdexcept>

using namespace layered;

TEST_CASE("problem names") {
    CHECK(parse_problem("triangle") == ProblemName::Triangle);
    CHECK(parse_problem("summed-quadratic") == ProblemName::SummedQuadratic);
    CHECK(parse_problem("quadratic") == ProblemName::SummedQuadratic);
    CHECK(to_string(ProblemName::Supersphere) == "supersphere");
    CHECK_THROWS_AS(parse_problem("zdt1"), std::invalid_argument);
}

TEST_CASE("problem specs") {
    const auto t = ProblemSpec::triangle();
    CHECK(t.objective_map().is_identity());
    CHECK(t.decision_region.kind == RegionKind::TriangleSumLE1);
    const auto q = ProblemSpec::summed_quadratic();
    CHECK(q.decision_region.kind == RegionKind::Box);
    CHECK(q.objective_map()(PointSet{{1, 1}}) == PointSet{{1, 0}});
    const auto s = ProblemSpec::supersphere(0.5, FeasibleRegion::cube(3, -2, 2));
    CHECK(s.objective_dim == 3);
    CHECK_THROWS_AS(ProblemSpec::supersphere(0.0), std::invalid_argument);
    CHECK_THROWS_AS(ProblemSpec::supersphere(1.0, FeasibleRegion::cube(2, 0, 1)), std::invalid_argument);
}

TEST_CASE("summed quadratic map and front") {
    const double a[] = {1, 1}, b[] = {0, 0}, c[] = {0.5, 0.5};
    CHECK(quadratic_map(a) == std::array<double, 2>{1, 0});
    CHECK(quadratic_map(b) == std::array<double, 2>{0, 1});
    CHECK(quadratic_map(c) == std::array<double, 2>{0.75, 0.75});
    CHECK(quadratic_front(0) == std::array<double, 2>{0, 1});
    CHECK(quadratic_front(1) == std::array<double, 2>{1, 0});
    CHECK(quadratic_front(0.5) == std::array<double, 2>{0.75, 0.75});
    CHECK_THROWS_AS(quadratic_front(1.01), std::invalid_argument);
    CHECK_THROWS_AS(quadratic_front(-0.01), std::invalid_argument);

    Rng rng(10);
    for (int i = 0; i < 100; ++i) {
        const double t = rng.uniform();
        const double x[] = {t, t};
        const auto m = quadratic_map(x);
        const auto f = quadratic_front(t);
        CHECK(std::abs(m[0] - f[0]) <= 1e-14);
        CHECK(std::abs(m[1] - f[1]) <= 1e-14);
        CHECK(distance_to_quadratic_front(f) <= 1e-9);
    }
}

TEST_CASE("the diagonal average dominates off-diagonal points") {
    Rng rng(20);
    for (int i = 0; i < 500; ++i) {
        const double x[] = {rng.uniform(), rng.uniform()};
        if (x[0] == x[1]) continue;
        const double m = 0.5 * (x[0] + x[1]);
        const double d[] = {m, m};
        const auto fx = quadratic_map(x);
        const auto fd = quadratic_map(d);
        CHECK(strictly_dominates(fd, fx));
    }
}

TEST_CASE("distance to the quadratic front") {
    const double far[] = {0, 0};
    // Nearest front point to the origin: minimize (2t-t^2)^2 + (1-t^2)^2.
    double best = INFINITY;
    for (int s = 0; s <= 100000; ++s) {
        const auto p = quadratic_front(s / 100000.0);
        best = std::min(best, std::hypot(p[0], p[1]));
    }
    CHECK(distance_to_quadratic_front(far) == doctest::Approx(best).epsilon(1e-9));
}

TEST_CASE("supersphere map") {
    for (double g : {0.25, 0.5, 1.0, 2.0}) {
        for (int i = 0; i < 3; ++i) {
            double e[3] = {0, 0, 0};
            e[i] = 1;
            const auto f = supersphere_map(e, g);
            for (int k = 0; k < 3; ++k) CHECK(f[k] == (k == i ? 1.0 : 0.0));
        }
        const double c[] = {1.0 / 3, 1.0 / 3, 1.0 / 3};
        const auto f = supersphere_map(c, g);
        for (double v : f) CHECK(std::abs(v - (1 - std::pow(3.0, -g))) <= 1e-14);
    }
    const double c[] = {1.0 / 3, 1.0 / 3, 1.0 / 3};
    CHECK(supersphere_map(c, 0.5)[0] == doctest::Approx(0.42265).epsilon(1e-5));
    CHECK_THROWS_AS(supersphere_map(c, -1.0), std::invalid_argument);
    // Off the simplex the raw values drop below zero.
    const double out[] = {-0.4, -0.4, -0.4};
    CHECK(supersphere_map(out, 1.0)[0] < 0.0);

    Rng rng(30);
    const auto simplex = FeasibleRegion::simplex();
    for (int i = 0; i < 300; ++i) {
        double x[3] = {rng.uniform(), rng.uniform(), rng.uniform()};
        simplex.project_point(x);
        for (double v : supersphere_map(x, rng.uniform(0.2, 2.0))) {
            CHECK(v >= -1e-15);
            CHECK(v <= 1.0 + 1e-15);
        }
    }
}

TEST_CASE("supersphere front parameterization") {
    CHECK(supersphere_front(1, 0.3, 1) == std::array<double, 3>{1, 0, 0});
    CHECK(supersphere_front(0, 1, 1) == std::array<double, 3>{0, 1, 0});
    const auto c = supersphere_front(1.0 / 3, 0.5, 1);
    for (double v : c) CHECK(v == doctest::Approx(2.0 / 3));
    CHECK_THROWS_AS(supersphere_front(1.5, 0, 1), std::invalid_argument);
    CHECK_THROWS_AS(supersphere_front(0, -0.5, 1), std::invalid_argument);

    for (double g : {0.5, 1.0}) {
        const auto archive = reference_archive(ProblemSpec::supersphere(g), 20);
        for (std::size_t a = 0; a < archive.size(); ++a)
            for (std::size_t b = 0; b < archive.size(); ++b)
                if (a != b) CHECK_FALSE(strictly_dominates(archive[a], archive[b]));
    }
}

TEST_CASE("Das-Dennis lattice") {
    const auto three = das_dennis(3, 0.0, 0);
    CHECK(three.size() == 10);
    std::set<std::vector<double>> rows;
    for (std::size_t i = 0; i < three.size(); ++i) {
        rows.insert({three[i].begin(), three[i].end()});
        double s = 0.0;
        for (double v : three[i]) {
            CHECK(v >= 0.0);
            s += v;
        }
        CHECK(s == doctest::Approx(1.0).epsilon(1e-15));
    }
    CHECK(rows.size() == 10);
    CHECK(rows.count({1, 0, 0}));
    CHECK(rows.count({0, 1, 0}));
    CHECK(rows.count({0, 0, 1}));
    CHECK(das_dennis(2, 0.0, 0).size() == 6);
    CHECK(das_dennis(1, 0.0, 0) == PointSet{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}});
    CHECK(das_dennis(4, 0.0, 0).size() == 15);

    const auto noisy = das_dennis(3, 0.01, 8);
    CHECK(noisy == das_dennis(3, 0.01, 8));
    CHECK_FALSE(noisy == das_dennis(3, 0.01, 9));
    for (std::size_t i = 0; i < noisy.size(); ++i) CHECK(FeasibleRegion::simplex().contains(noisy[i], 1e-12));
    CHECK_THROWS_AS(das_dennis(0, 0.0, 0), std::invalid_argument);
}

TEST_CASE("reference archives") {
    CHECK(reference_archive(ProblemSpec::triangle(), 2) == PointSet{{0, 1}, {0.5, 0.5}, {1, 0}});
    CHECK(reference_archive(ProblemSpec::summed_quadratic(), 2) == PointSet{{0, 1}, {0.75, 0.75}, {1, 0}});
    const auto corners = reference_archive(ProblemSpec::supersphere(1.0), 1);
    CHECK(corners.size() == 3);
    const auto dense = reference_archive(ProblemSpec::supersphere(1.0), 30);
    // u = 1 collapses a whole row onto e1.
    CHECK(dense.size() == 31 * 31 - 30);
    CHECK_THROWS_AS(reference_archive(ProblemSpec::triangle(), 0), std::invalid_argument);
}

TEST_CASE("named starting sets") {
    const auto line = triangle_line_start();
    REQUIRE(line.size() == 10);
    for (std::size_t i = 0; i < 10; ++i) {
        CHECK(line(i, 0) + line(i, 1) == doctest::Approx(0.7));
        CHECK(line(i, 0) > 0.0);
        CHECK(line(i, 1) > 0.0);
    }
    CHECK(nondominated_sort(line).profile() == "10");

    const auto nested = triangle_nested_start();
    REQUIRE(nested.size() == 10);
    CHECK(nondominated_sort(nested).profile() == "4+3+2+1");
    for (std::size_t i = 0; i < 10; ++i) CHECK(nested(i, 0) + nested(i, 1) <= 0.5 + 1e-15);

    const auto quad = quadratic_perturbed_start();
    CHECK(quad.size() == 10);
    CHECK(quad(0, 0) == 0.10);
    CHECK(quad(9, 1) == 0.08);

    const auto region = FeasibleRegion::cube(3, -0.4, 1.4);
    const auto box = layered_box_start(15, kLayeredBoxSeed, region);
    CHECK(box == layered_box_start(15, kLayeredBoxSeed, region));
    for (std::size_t i = 0; i < box.size(); ++i) {
        CHECK(region.contains(box[i]));
        for (double v : box[i]) {
            CHECK(v >= -0.25);
            CHECK(v < 1.25);
        }
    }
    const auto Y = ProblemSpec::supersphere(1.0, region).objective_map()(box);
    CHECK(nondominated_sort(Y).profile() == "8+5+2");
    CHECK_THROWS_AS(layered_box_start(5, 0, FeasibleRegion::cube(2, 0, 1)), std::invalid_argument);
}
