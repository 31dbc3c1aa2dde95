#pragma once

#include "layered/ascent.hpp"

#include <array>
#include <cstdint>
#include <string_view>

namespace layered {

enum class ProblemName { Triangle, SummedQuadratic, Supersphere };

std::string_view to_string(ProblemName name);
ProblemName parse_problem(std::string_view text);

struct ProblemSpec {
    ProblemName name = ProblemName::Triangle;
    FeasibleRegion decision_region = FeasibleRegion::triangle();
    std::size_t objective_dim = 2;
    double gamma = 1.0;  // Supersphere only

    static ProblemSpec triangle();
    /// Decision box [0,1]^2 by default; the natural domain is [-2,2]^2.
    static ProblemSpec summed_quadratic(FeasibleRegion region = FeasibleRegion::cube(2, 0.0, 1.0));
    static ProblemSpec supersphere(double gamma, FeasibleRegion region = FeasibleRegion::simplex(3));

    /// Identity for the objective-space triangle problem.
    ObjectiveMap objective_map() const;
};

/// f1 = (1-(x1-1)^2)/2 + (1-(x2-1)^2)/2,  f2 = (1-x1^2)/2 + (1-x2^2)/2
std::array<double, 2> quadratic_map(std::span<const double> x);
/// (2t - t^2, 1 - t^2), the image of the efficient diagonal (t, t).
std::array<double, 2> quadratic_front(double t);
/// Euclidean distance from y to the curve quadratic_front([0,1]).
double distance_to_quadratic_front(std::span<const double> y);

/// f_i = 1 - (|x - e_i|^2 / 2)^gamma. Not clamped; values drop below zero
/// away from the simplex.
std::array<double, 3> supersphere_map(std::span<const double> x, double gamma);
/// Image of the simplex point (u, (1-u)v, (1-u)(1-v)).
std::array<double, 3> supersphere_front(double u, double v, double gamma);

/// Simplex lattice {(i,j,k)/H : i+j+k = H}, each point perturbed by
/// N(0, perturb_sigma^2) per coordinate and projected back onto the simplex.
PointSet das_dennis(std::size_t H, double perturb_sigma, std::uint64_t seed);

/// Dense samples of the analytic front, exact duplicates removed.
PointSet reference_archive(const ProblemSpec& problem, std::size_t resolution);

// Named starting sets.

/// mu interior points evenly spread on F1 + F2 = level.
PointSet triangle_line_start(std::size_t mu = 10, double level = 0.7);
/// Rows of 4+3+2+1 lattice points filling the subtriangle with vertices
/// (0,0), (0,half) and (half,0).
PointSet triangle_nested_start(std::size_t rows = 4, double half = 0.5);
/// The ten perturbed decision points of the summed quadratic example.
PointSet quadratic_perturbed_start();
/// mu decision points uniform in [sample_lo, sample_hi]^3, projected onto
/// `region`.
PointSet layered_box_start(std::size_t mu, std::uint64_t seed, const FeasibleRegion& region,
                           double sample_lo = -0.25, double sample_hi = 1.25);

/// Seed for which layered_box_start(15, seed, [-0.4,1.4]^3) under the gamma=1
/// supersphere map starts with the 8+5+2 layer profile.
inline constexpr std::uint64_t kLayeredBoxSeed = 32460;

}  // namespace layered
