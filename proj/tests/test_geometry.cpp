#include "layered/geometry.hpp"
#include "layered/rng.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>

using namespace layered;

namespace {

const Anchor O2 = Anchor::origin(2);
const Anchor O3 = Anchor::origin(3);

PointSet fig1() { return PointSet{{1, 8}, {5, 4}, {7, 3}, {1, 7}, {3, 4}, {6, 2}, {1, 4}, {4, 1}}; }

PointSet random_set(Rng& rng, std::size_t n, std::size_t d, double lo = 0.0, double hi = 1.0) {
    PointSet p(d);
    std::vector<double> row(d);
    for (std::size_t i = 0; i < n; ++i) {
        for (double& c : row) c = rng.uniform(lo, hi);
        p.push_back(row);
    }
    return p;
}

// Reference peel: repeatedly take every remaining point no remaining point
// strictly dominates.
std::vector<std::vector<std::size_t>> brute_peel(const PointSet& P) {
    std::vector<std::size_t> left(P.size());
    for (std::size_t i = 0; i < P.size(); ++i) left[i] = i;
    std::vector<std::vector<std::size_t>> layers;
    while (!left.empty()) {
        std::vector<std::size_t> layer, rest;
        for (std::size_t i : left) {
            bool dominated = false;
            for (std::size_t j : left)
                if (strictly_dominates(P[j], P[i])) dominated = true;
            (dominated ? rest : layer).push_back(i);
        }
        layers.push_back(layer);
        left = rest;
    }
    return layers;
}

double fd(const std::function<double(const PointSet&)>& f, PointSet P, std::size_t i, std::size_t k, double h) {
    P(i, k) += h;
    const double up = f(P);
    P(i, k) -= 2 * h;
    return (up - f(P)) / (2 * h);
}

}  // namespace

TEST_CASE("dominance on the integer example") {
    const double a[] = {1, 8}, b[] = {1, 7}, c[] = {5, 4}, d[] = {1, 4};
    CHECK(weakly_dominates(a, b));
    CHECK(weakly_dominates(a, a));
    CHECK_FALSE(weakly_dominates(c, a));
    CHECK(strictly_dominates(a, b));
    CHECK_FALSE(strictly_dominates(a, a));
    CHECK_FALSE(strictly_dominates(d, b));
    const double e[] = {1, 2, 3};
    CHECK_THROWS_AS(weakly_dominates(a, e), std::invalid_argument);
    CHECK_THROWS_AS(strictly_dominates(a, e), std::invalid_argument);
}

TEST_CASE("nondominated sort of the integer example") {
    const auto part = nondominated_sort(fig1());
    REQUIRE(part.count() == 3);
    CHECK(part.profile() == "3+3+2");
    CHECK(part.layers[0] == std::vector<std::size_t>{0, 1, 2});
    CHECK(part.layers[1] == std::vector<std::size_t>{3, 4, 5});
    CHECK(part.layers[2] == std::vector<std::size_t>{6, 7});
    CHECK(part.rank[7] == 2);

    CHECK(nondominated_sort(PointSet{{0.3, 0.2}}).profile() == "1");
    CHECK(nondominated_sort(PointSet{{1, 0}, {0, 1}, {0.5, 0.5}}).profile() == "3");
}

TEST_CASE("nondominated sort matches a brute-force peel and ranks monotonically") {
    Rng rng(11);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t d = 2 + trial % 2;
        const std::size_t n = 1 + rng.index(50);
        auto P = random_set(rng, n, d);
        // Grid snapping produces ties and duplicates.
        if (trial % 3 == 0)
            for (double& c : P.flat()) c = std::round(c * 4) / 4;
        const auto part = nondominated_sort(P);
        CHECK(part.layers == brute_peel(P));
        for (std::size_t a = 0; a < n; ++a)
            for (std::size_t b = 0; b < n; ++b)
                if (strictly_dominates(P[a], P[b])) CHECK(part.rank[a] < part.rank[b]);
        std::size_t total = 0;
        for (const auto& l : part.layers) {
            CHECK_FALSE(l.empty());
            total += l.size();
        }
        CHECK(total == n);
    }
}

TEST_CASE("one-dimensional extent") {
    CHECK(hv_1d(PointSet{{7}, {3}, {5}}, Anchor::origin(1)) == 7.0);
    CHECK(hv_1d(PointSet{{2.5}}, Anchor{{2.5}}) == 0.0);
    CHECK(hv_1d(PointSet{{-1}}, Anchor::origin(1)) == 0.0);
    CHECK(hv_1d(PointSet(1), Anchor::origin(1)) == 0.0);
}

TEST_CASE("two-dimensional hypervolume") {
    CHECK(hv_2d(PointSet{{1, 8}, {5, 4}, {7, 3}}, O2) == 30.0);
    CHECK(hv_2d(PointSet{{1, 7}, {3, 4}, {6, 2}}, O2) == 21.0);
    CHECK(hv_2d(PointSet{{1, 4}, {4, 1}}, O2) == 7.0);
    CHECK(hv_2d(PointSet{{1, 1}}, O2) == 1.0);
    CHECK(hv_2d(PointSet(2), O2) == 0.0);
    // Boxes of negative side length are omitted; partially negative ones clamp.
    CHECK(hv_2d(PointSet{{-1, 3}, {2, -0.5}}, O2) == 0.0);
    CHECK(hv_2d(PointSet{{2, 3}}, Anchor{{1, 1}}) == 2.0);
    CHECK_THROWS_AS(hv_2d(PointSet{{1, 2, 3}}, O2), std::invalid_argument);
}

TEST_CASE("two-dimensional hypervolume is monotone and Lipschitz") {
    Rng rng(5);
    for (int trial = 0; trial < 300; ++trial) {
        auto P = random_set(rng, 1 + rng.index(12), 2);
        const double base = hv_2d(P, O2);
        auto Q = P;
        Q.push_back({rng.uniform(), rng.uniform()});
        CHECK(hv_2d(Q, O2) >= base);
        auto R = P;
        R(rng.index(P.size()), rng.index(2)) += 0.1 * rng.uniform();
        CHECK(hv_2d(R, O2) >= base);

        auto C = P;
        double l1 = 0.0;
        for (double& c : C.flat()) {
            const double moved = std::clamp(c + rng.uniform(-0.05, 0.05), 0.0, 1.0);
            l1 += std::abs(moved - c);
            c = moved;
        }
        CHECK(std::abs(hv_2d(C, O2) - base) <= 1.0 * l1 + 1e-15);
    }
}

TEST_CASE("two-dimensional hypervolume agrees with Monte Carlo") {
    Rng rng(99);
    const auto P = random_set(rng, 8, 2);
    const double exact = hv_2d(P, O2);
    const std::size_t samples = 400000;
    std::size_t hits = 0;
    for (std::size_t s = 0; s < samples; ++s) {
        const double z[2] = {rng.uniform(), rng.uniform()};
        for (std::size_t i = 0; i < P.size(); ++i)
            if (weakly_dominates(P[i], z)) {
                ++hits;
                break;
            }
    }
    const double p = double(hits) / samples;
    CHECK(std::abs(p - exact) <= 4.0 * std::sqrt(p * (1 - p) / samples));
}

TEST_CASE("three-dimensional hypervolume") {
    CHECK(hv_3d(PointSet{{1, 1, 1}}, O3) == 1.0);
    CHECK(hv_3d(PointSet{{1, 1, 0.5}, {0.5, 0.5, 1}}, O3) == doctest::Approx(0.625).epsilon(1e-15));
    CHECK(hv_3d_sweep(PointSet{{1, 1, 0.5}, {0.5, 0.5, 1}}, O3) == doctest::Approx(0.625).epsilon(1e-15));
    CHECK(hv_3d(PointSet(3), O3) == 0.0);
    CHECK(hv_3d(PointSet{{1, 1, -1}}, O3) == 0.0);

    Rng rng(3);
    for (int trial = 0; trial < 300; ++trial) {
        auto P = random_set(rng, 1 + rng.index(12), 3, -0.1, 1.0);
        if (trial % 4 == 0)
            for (double& c : P.flat()) c = std::round(c * 5) / 5;
        const double ie = hv_inclusion_exclusion(P, O3);
        const double sw = hv_3d_sweep(P, O3);
        CHECK(std::abs(ie - sw) <= 1e-12 * std::max(1.0, ie));
        // The dispatcher picks either path; both must give the same number.
        CHECK(std::abs(hv_3d(P, O3, 0) - hv_3d(P, O3, 100)) <= 1e-12 * std::max(1.0, ie));
    }
}

TEST_CASE("general-dimension hypervolume by slicing") {
    CHECK(hypervolume(PointSet{{1, 1, 1, 1}}, Anchor::origin(4)) == 1.0);
    Rng rng(8);
    for (int trial = 0; trial < 40; ++trial) {
        const auto P = random_set(rng, 1 + rng.index(7), 4);
        CHECK(hypervolume(P, Anchor::origin(4)) ==
              doctest::Approx(hv_inclusion_exclusion(P, Anchor::origin(4))).epsilon(1e-12));
    }
}

TEST_CASE("two-dimensional hypervolume gradient") {
    const PointSet L1{{1, 8}, {5, 4}, {7, 3}};
    const auto G = hv_grad_2d(L1, O2);
    CHECK(G(1, 0) == 1.0);
    CHECK(G(1, 1) == 4.0);

    const auto single = hv_grad_2d(PointSet{{0.3, 0.7}}, O2);
    CHECK(single(0, 0) == doctest::Approx(0.7));
    CHECK(single(0, 1) == doctest::Approx(0.3));

    const auto dom = hv_grad_2d(PointSet{{1, 1}, {0.5, 0.5}}, O2);
    CHECK(dom(1, 0) == 0.0);
    CHECK(dom(1, 1) == 0.0);

    // Exact duplicates: only the first label carries the gradient.
    const auto dup = hv_grad_2d(PointSet{{0.5, 0.5}, {0.5, 0.5}}, O2);
    CHECK(dup(0, 0) == doctest::Approx(0.5));
    CHECK(dup(1, 0) == 0.0);
    CHECK(dup(1, 1) == 0.0);

    Rng rng(21);
    auto f = [](const PointSet& P) { return hv_2d(P, O2); };
    for (int trial = 0; trial < 200; ++trial) {
        const auto P = random_set(rng, 1 + rng.index(10), 2, 0.05, 1.0);
        const auto A = hv_grad_2d(P, O2);
        for (std::size_t i = 0; i < P.size(); ++i)
            for (std::size_t k = 0; k < 2; ++k) {
                const double num = fd(f, P, i, k, 1e-6);
                CHECK(std::abs(A(i, k) - num) <= 1e-5 * std::max(1.0, std::abs(num)));
            }
    }
}

TEST_CASE("three-dimensional hypervolume gradient") {
    const auto G = hv_grad_3d(PointSet{{1, 1, 1}}, O3, 1e-6);
    for (std::size_t k = 0; k < 3; ++k) CHECK(G(0, k) == doctest::Approx(1.0).epsilon(1e-8));
    const auto Z = hv_grad_3d(PointSet{{1, 1, 1}, {0.5, 0.5, 0.5}}, O3, 1e-6);
    for (std::size_t k = 0; k < 3; ++k) CHECK(Z(1, k) == 0.0);

    // Closed-form face areas against central differences of the exact value.
    Rng rng(77);
    for (int trial = 0; trial < 200; ++trial) {
        const auto P = random_set(rng, 1 + rng.index(9), 3, 0.05, 1.0);
        const auto A = hv_grad_3d_exact(P, O3);
        const auto F = hv_grad_3d(P, O3, 1e-6);
        for (std::size_t i = 0; i < P.size(); ++i)
            for (std::size_t k = 0; k < 3; ++k)
                CHECK(std::abs(A(i, k) - F(i, k)) <= 1e-5 * std::max(1.0, std::abs(F(i, k))));
    }
    CHECK_THROWS_AS(hv_grad_3d(PointSet{{1, 1, 1}}, O3, 0.0), std::invalid_argument);
}

TEST_CASE("point set plumbing") {
    PointSet P{{1, 2, 3}, {4, 5, 6}};
    const std::size_t sel[] = {1};
    CHECK(P.subset(sel) == PointSet{{4, 5, 6}});
    const std::size_t coords[] = {0, 2};
    CHECK(P.shadow(coords) == PointSet{{1, 3}, {4, 6}});
    CHECK_THROWS_AS(P.push_back({1.0}), std::invalid_argument);
    P(0, 0) = std::nan("");
    CHECK_THROWS_AS(P.require_finite(), std::invalid_argument);
    CHECK_THROWS_AS(PointSet(2, std::vector<double>{1, 2, 3}), std::invalid_argument);
}
