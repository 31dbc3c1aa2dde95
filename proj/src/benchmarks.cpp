#include "layered/benchmarks.hpp"

#include "layered/rng.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace layered {

std::string_view to_string(ProblemName name) {
    switch (name) {
    case ProblemName::Triangle: return "triangle";
    case ProblemName::SummedQuadratic: return "quadratic";
    case ProblemName::Supersphere: return "supersphere";
    }
    return "?";
}

ProblemName parse_problem(std::string_view text) {
    if (text == "triangle") return ProblemName::Triangle;
    if (text == "quadratic" || text == "summed-quadratic") return ProblemName::SummedQuadratic;
    if (text == "supersphere") return ProblemName::Supersphere;
    throw std::invalid_argument("unknown problem '" + std::string(text) + "'");
}

ProblemSpec ProblemSpec::triangle() { return ProblemSpec{}; }

ProblemSpec ProblemSpec::summed_quadratic(FeasibleRegion region) {
    if (region.dim != 2) throw std::invalid_argument("summed quadratic problem has two decision variables");
    return ProblemSpec{ProblemName::SummedQuadratic, std::move(region), 2, 1.0};
}

ProblemSpec ProblemSpec::supersphere(double gamma, FeasibleRegion region) {
    if (!(gamma > 0.0)) throw std::invalid_argument("supersphere gamma must be positive");
    if (region.dim != 3) throw std::invalid_argument("supersphere problem has three decision variables");
    return ProblemSpec{ProblemName::Supersphere, std::move(region), 3, gamma};
}

ObjectiveMap ProblemSpec::objective_map() const {
    switch (name) {
    case ProblemName::Triangle: return ObjectiveMap::identity(2);
    case ProblemName::SummedQuadratic:
        return ObjectiveMap(2, 2, [](std::span<const double> x, std::span<double> y) {
            const auto f = quadratic_map(x);
            y[0] = f[0];
            y[1] = f[1];
        });
    case ProblemName::Supersphere:
        return ObjectiveMap(3, 3, [g = gamma](std::span<const double> x, std::span<double> y) {
            const auto f = supersphere_map(x, g);
            std::copy(f.begin(), f.end(), y.begin());
        });
    }
    throw std::logic_error("unreachable");
}

// ---------------------------------------------------------------------------

std::array<double, 2> quadratic_map(std::span<const double> x) {
    if (x.size() != 2) throw std::invalid_argument("quadratic_map: expects two coordinates");
    const double a = x[0] - 1.0, b = x[1] - 1.0;
    return {0.5 * (1.0 - a * a) + 0.5 * (1.0 - b * b), 0.5 * (1.0 - x[0] * x[0]) + 0.5 * (1.0 - x[1] * x[1])};
}

std::array<double, 2> quadratic_front(double t) {
    if (!(t >= 0.0 && t <= 1.0)) throw std::invalid_argument("quadratic_front: t must lie in [0,1]");
    return {2.0 * t - t * t, 1.0 - t * t};
}

double distance_to_quadratic_front(std::span<const double> y) {
    if (y.size() != 2) throw std::invalid_argument("distance_to_quadratic_front: expects a 2-vector");
    auto dist2 = [&](double t) {
        const auto p = quadratic_front(t);
        return (p[0] - y[0]) * (p[0] - y[0]) + (p[1] - y[1]) * (p[1] - y[1]);
    };
    // Coarse scan, then golden-section refinement around the best sample.
    constexpr int samples = 2000;
    int best = 0;
    double best_d = dist2(0.0);
    for (int s = 1; s <= samples; ++s) {
        const double d = dist2(static_cast<double>(s) / samples);
        if (d < best_d) best_d = d, best = s;
    }
    double a = std::max(0.0, (best - 1.0) / samples), b = std::min(1.0, (best + 1.0) / samples);
    const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
    double c = b - phi * (b - a), e = a + phi * (b - a);
    for (int it = 0; it < 100; ++it) {
        if (dist2(c) < dist2(e)) b = e;
        else a = c;
        c = b - phi * (b - a);
        e = a + phi * (b - a);
    }
    return std::sqrt(std::min(best_d, dist2(0.5 * (a + b))));
}

std::array<double, 3> supersphere_map(std::span<const double> x, double gamma) {
    if (x.size() != 3) throw std::invalid_argument("supersphere_map: expects three coordinates");
    if (!(gamma > 0.0)) throw std::invalid_argument("supersphere_map: gamma must be positive");
    std::array<double, 3> f{};
    for (std::size_t i = 0; i < 3; ++i) {
        double d2 = 0.0;
        for (std::size_t k = 0; k < 3; ++k) {
            const double diff = x[k] - (k == i ? 1.0 : 0.0);
            d2 += diff * diff;
        }
        f[i] = 1.0 - std::pow(0.5 * d2, gamma);
    }
    return f;
}

std::array<double, 3> supersphere_front(double u, double v, double gamma) {
    if (!(u >= 0.0 && u <= 1.0 && v >= 0.0 && v <= 1.0))
        throw std::invalid_argument("supersphere_front: parameters must lie in [0,1]");
    const double x[3] = {u, (1.0 - u) * v, (1.0 - u) * (1.0 - v)};
    return supersphere_map(x, gamma);
}

PointSet das_dennis(std::size_t H, double perturb_sigma, std::uint64_t seed) {
    if (H < 1) throw std::invalid_argument("das_dennis: H must be at least 1");
    if (!(perturb_sigma >= 0.0)) throw std::invalid_argument("das_dennis: sigma must be nonnegative");
    Rng rng(seed);
    const auto simplex = FeasibleRegion::simplex(3);
    const double h = static_cast<double>(H);
    PointSet out(3);
    for (std::size_t i = H + 1; i-- > 0;)
        for (std::size_t j = H - i + 1; j-- > 0;) {
            const std::size_t k = H - i - j;
            double p[3] = {i / h, j / h, k / h};
            if (perturb_sigma > 0.0) {
                for (double& c : p) c += perturb_sigma * rng.normal();
                simplex.project_point(p);
            }
            out.push_back(p);
        }
    return out;
}

PointSet reference_archive(const ProblemSpec& problem, std::size_t resolution) {
    if (resolution < 1) throw std::invalid_argument("reference_archive: resolution must be at least 1");
    const double n = static_cast<double>(resolution);
    PointSet out(problem.objective_dim);
    auto add_unique = [&](std::span<const double> p) {
        for (std::size_t i = 0; i < out.size(); ++i)
            if (std::ranges::equal(out[i], p)) return;
        out.push_back(p);
    };
    switch (problem.name) {
    case ProblemName::Triangle:
        for (std::size_t s = 0; s <= resolution; ++s) {
            const double t = s / n;
            const double p[2] = {t, 1.0 - t};
            add_unique(p);
        }
        break;
    case ProblemName::SummedQuadratic:
        for (std::size_t s = 0; s <= resolution; ++s) add_unique(quadratic_front(s / n));
        break;
    case ProblemName::Supersphere:
        for (std::size_t a = 0; a <= resolution; ++a)
            for (std::size_t b = 0; b <= resolution; ++b) add_unique(supersphere_front(a / n, b / n, problem.gamma));
        break;
    }
    return out;
}

PointSet triangle_line_start(std::size_t mu, double level) {
    if (mu < 1 || !(level > 0.0 && level <= 1.0)) throw std::invalid_argument("triangle_line_start: bad arguments");
    PointSet out(2);
    for (std::size_t i = 0; i < mu; ++i) {
        const double x = level * static_cast<double>(i + 1) / static_cast<double>(mu + 1);
        out.push_back({x, level - x});
    }
    return out;
}

PointSet triangle_nested_start(std::size_t rows, double half) {
    if (rows < 1 || !(half > 0.0 && half <= 1.0)) throw std::invalid_argument("triangle_nested_start: bad arguments");
    PointSet out(2);
    const double spacing = rows > 1 ? half / static_cast<double>(rows - 1) : 0.0;
    // Outermost diagonal first: the first row is the first nondominated layer.
    for (std::size_t level = rows; level-- > 0;)
        for (std::size_t i = 0; i <= level; ++i) out.push_back({i * spacing, (level - i) * spacing});
    return out;
}

PointSet quadratic_perturbed_start() {
    return PointSet{{0.10, 0.74}, {0.18, 0.49}, {0.12, 0.61}, {0.33, 0.58}, {0.46, 0.28},
                    {0.41, 0.45}, {0.63, 0.12}, {0.57, 0.26}, {0.71, 0.33}, {0.82, 0.08}};
}

PointSet layered_box_start(std::size_t mu, std::uint64_t seed, const FeasibleRegion& region, double sample_lo,
                           double sample_hi) {
    if (region.dim != 3) throw std::invalid_argument("layered_box_start: region must be three-dimensional");
    Rng rng(seed);
    PointSet out(3);
    for (std::size_t i = 0; i < mu; ++i) {
        double p[3];
        for (double& c : p) c = rng.uniform(sample_lo, sample_hi);
        region.project_point(p);
        out.push_back(p);
    }
    return out;
}

}  // namespace layered
