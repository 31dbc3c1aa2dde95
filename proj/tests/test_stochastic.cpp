#include "layered/stochastic.hpp"

#include <doctest.h>

#include <cmath>
#include <stdexcept>

using namespace layered;

namespace {

Surrogate triangle_surrogate() {
    SurrogateConfig c;
    c.tau = 1e-2;
    c.sigma = 0.06;
    return Surrogate{c, ObjectiveMap::identity(2)};
}

PointSet line_start() {
    PointSet p(2);
    for (int i = 0; i < 10; ++i) {
        const double x = 0.7 * (i + 1) / 11.0;
        p.push_back({x, 0.7 - x});
    }
    return p;
}

}  // namespace

TEST_CASE("hillclimber config") {
    HillclimbConfig c;
    CHECK(c.alpha0 == 0.05);
    CHECK(c.rho == 0.5);
    CHECK(c.alpha_min == 1e-4);
    CHECK(c.retries == 10);
    CHECK_FALSE(c.recovery.has_value());
    c.rho = 1.0;
    CHECK_THROWS_AS(c.validate(), std::invalid_argument);
    c.rho = 0.5;
    c.alpha_min = 0.1;
    CHECK_THROWS_AS(c.validate(), std::invalid_argument);
}

TEST_CASE("a stub direction toward a better set is accepted") {
    HillclimbConfig c;
    c.k_max = 5;
    TrialProposal toward_front = [](Rng&, const PointSet&) { return TrialMove{0, {M_SQRT1_2, M_SQRT1_2}}; };
    const auto r = hillclimb(PointSet{{0.2, 0.2}}, FeasibleRegion::triangle(), triangle_surrogate(), c, toward_front);
    CHECK(r.run.accepted == 5);
    for (std::size_t k = 1; k < r.run.trace.size(); ++k) {
        CHECK(r.run.trace[k].kind == StepKind::Accepted);
        CHECK(r.run.trace[k].value > r.run.trace[k - 1].value);
    }
    CHECK(r.run.final_state(0, 0) == doctest::Approx(0.2 + 5 * 0.05 * M_SQRT1_2));
}

TEST_CASE("total failure leaves the state and the step unchanged") {
    HillclimbConfig c;
    c.alpha0 = 1.0;
    c.alpha_min = 0.9;
    c.k_max = 4;
    // From the middle of the front every move stays on or falls off the
    // front and lowers J.
    TrialProposal inward = [](Rng&, const PointSet&) { return TrialMove{0, {-M_SQRT1_2, -M_SQRT1_2}}; };
    const PointSet X0{{0.5, 0.5}};
    const auto r = hillclimb(X0, FeasibleRegion::triangle(), triangle_surrogate(), c, inward);
    CHECK(r.run.accepted == 0);
    CHECK(r.run.final_state == X0);
    for (double a : r.step_sizes) CHECK(a == 1.0);
    for (std::size_t k = 1; k < r.run.trace.size(); ++k) CHECK(r.run.trace[k].kind == StepKind::Rejected);
}

TEST_CASE("step size shrinks to the floor and never grows") {
    HillclimbConfig c;
    c.k_max = 300;
    c.alpha_min = 1e-3;
    const auto r = hillclimb(line_start(), FeasibleRegion::triangle(), triangle_surrogate(), c);
    REQUIRE(r.step_sizes.size() == c.k_max);
    double prev = c.alpha0;
    for (double a : r.step_sizes) {
        CHECK(a >= c.alpha_min);
        CHECK(a <= prev);
        prev = a;
    }
}

TEST_CASE("accepted values never decrease and iterates stay feasible") {
    HillclimbConfig c;
    c.k_max = 1000;
    c.seed = 9;
    const auto r = hillclimb(line_start(), FeasibleRegion::triangle(), triangle_surrogate(), c);
    for (std::size_t k = 1; k < r.run.trace.size(); ++k) {
        CHECK(r.run.trace[k].value >= r.run.trace[k - 1].value);
        for (std::size_t i = 0; i < 10; ++i) CHECK(FeasibleRegion::triangle().contains(r.run.trace[k].points[i]));
    }
}

TEST_CASE("fixed seeds reproduce the trace") {
    HillclimbConfig c;
    c.k_max = 200;
    c.seed = 123;
    const auto a = hillclimb(line_start(), FeasibleRegion::triangle(), triangle_surrogate(), c);
    const auto b = hillclimb(line_start(), FeasibleRegion::triangle(), triangle_surrogate(), c);
    REQUIRE(a.run.trace.size() == b.run.trace.size());
    for (std::size_t k = 0; k < a.run.trace.size(); ++k) {
        CHECK(a.run.trace[k].points == b.run.trace[k].points);
        CHECK(a.run.trace[k].value == b.run.trace[k].value);
    }
    c.seed = 124;
    const auto d = hillclimb(line_start(), FeasibleRegion::triangle(), triangle_surrogate(), c);
    CHECK_FALSE(d.run.final_state == a.run.final_state);
}

TEST_CASE("reference settings reach the triangle front") {
    HillclimbConfig c;
    c.alpha_min = 2e-3;
    c.k_max = 2000;
    for (std::uint64_t seed : {0u, 1u, 2u}) {
        c.seed = seed;
        const auto r = hillclimb(line_start(), FeasibleRegion::triangle(), triangle_surrogate(), c);
        const auto b = layered_breakdown(r.run.final_objectives, triangle_surrogate().config);
        const double hv = hv_2d(r.run.final_objectives.subset(b.partition.layers[0]), Anchor::origin(2));
        CHECK(hv >= 0.42);
    }
}

TEST_CASE("optional recovery hook perturbs and resets the step") {
    HillclimbConfig c;
    c.k_max = 200;
    RecoveryConfig rc;
    rc.min_growth = 1.0;  // always stagnating
    rc.window = 20;
    c.recovery = rc;
    const auto r = hillclimb(line_start(), FeasibleRegion::triangle(), triangle_surrogate(), c);
    CHECK(r.run.perturbations > 0);
    for (std::size_t k = 1; k < r.run.trace.size(); ++k)
        if (r.run.trace[k].kind == StepKind::Perturbation) {
            CHECK(r.step_sizes[k - 1] == c.alpha0);
            CHECK(k - 1 + rc.freeze_tail < c.k_max);
        }
}

TEST_CASE("malformed proposals are rejected") {
    HillclimbConfig c;
    c.k_max = 1;
    TrialProposal bad = [](Rng&, const PointSet&) { return TrialMove{5, {1, 0}}; };
    CHECK_THROWS_AS(hillclimb(PointSet{{0.2, 0.2}}, FeasibleRegion::triangle(), triangle_surrogate(), c, bad),
                    std::invalid_argument);
}
