#pragma once

#include "layered/geometry.hpp"
#include "layered/indicators.hpp"
#include "layered/rng.hpp"

#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <span>
#include <string_view>
#include <vector>

namespace layered {

// ---------------------------------------------------------------------------
// Feasible regions and Euclidean projection

enum class RegionKind { Box, TriangleSumLE1, Simplex };

struct FeasibleRegion {
    RegionKind kind = RegionKind::Box;
    std::size_t dim = 0;
    std::vector<double> lo, hi;  // Box only

    static FeasibleRegion box(std::vector<double> lo, std::vector<double> hi);
    static FeasibleRegion cube(std::size_t dim, double lo, double hi);
    /// {x in [0,1]^2 : x1 + x2 <= 1}
    static FeasibleRegion triangle();
    /// {x >= 0 : sum x = 1}
    static FeasibleRegion simplex(std::size_t dim = 3);

    void validate() const;
    void project_point(std::span<double> x) const;
    bool contains(std::span<const double> x, double tol = 1e-12) const;
};

PointSet project(const PointSet& points, const FeasibleRegion& region);

// ---------------------------------------------------------------------------
// State-to-objective maps and the composed surrogate J o map

class ObjectiveMap {
public:
    using Fn = std::function<void(std::span<const double> state, std::span<double> objective)>;

    static ObjectiveMap identity(std::size_t dim) { return ObjectiveMap(dim, dim, {}); }
    ObjectiveMap(std::size_t input_dim, std::size_t output_dim, Fn fn)
        : input_dim_(input_dim), output_dim_(output_dim), fn_(std::move(fn)) {}

    bool is_identity() const noexcept { return !fn_; }
    std::size_t input_dim() const noexcept { return input_dim_; }
    std::size_t output_dim() const noexcept { return output_dim_; }

    PointSet operator()(const PointSet& states) const;

private:
    std::size_t input_dim_, output_dim_;
    Fn fn_;
};

/// Evaluation context: a surrogate configuration applied after a map.
/// Pure; safe to evaluate concurrently.
struct Surrogate {
    SurrogateConfig config;
    ObjectiveMap map;

    PointSet objectives(const PointSet& states) const { return map(states); }
    double value(const PointSet& states) const { return layered_value(map(states), config); }
    LayeredBreakdown breakdown(const PointSet& states) const { return layered_breakdown(map(states), config); }
};

using SetFunction = std::function<double(const PointSet&)>;

// ---------------------------------------------------------------------------
// Finite-difference set-gradients

/// G(i,r) = (J(P(X + h e_ir)) - J(P(X - h e_ir))) / 2h, one probe pair per
/// point coordinate; probes run in parallel under OpenMP. Only the perturbed
/// row is re-projected: X is expected to be feasible already. `J` must be
/// safe to call concurrently.
SetGradient fd_set_gradient(const PointSet& X, const SetFunction& J, const FeasibleRegion& region, double h);
/// Sequential reference of fd_set_gradient; results are bitwise identical.
SetGradient fd_set_gradient_serial(const PointSet& X, const SetFunction& J, const FeasibleRegion& region,
                                   double h);

inline constexpr double kNormFloor = 1e-12;

/// Each row scaled to unit length; rows with norm <= 1e-12 are left as is.
SetGradient normalize_pointwise(SetGradient G);
double frobenius_norm(const SetGradient& G);

// ---------------------------------------------------------------------------
// Projected set-gradient ascent

enum class GradientMode { FiniteDifference, Analytic };

struct AscentConfig {
    double alpha = 0.005;
    double h = 1e-6;
    std::size_t k_max = 100;
    double delta_val = 0.0;
    bool normalize_per_point = true;
    GradientMode gradient_mode = GradientMode::FiniteDifference;

    void validate() const;
};

enum class StepKind { Initial, Gradient, Perturbation, Accepted, Rejected };
std::string_view to_string(StepKind kind);

struct TraceRecord {
    std::size_t iteration = 0;
    double value = 0.0;  // surrogate J of the recorded state
    std::vector<std::size_t> layer_sizes;
    PointSet points;             // state
    PointSet objective_points;   // map image; empty for identity maps
    StepKind kind = StepKind::Gradient;
};

enum class StopReason { MaxIterations, ZeroGradient, ValueTolerance };
std::string_view to_string(StopReason reason);

struct AscentResult {
    PointSet final_state;
    PointSet final_objectives;
    std::vector<TraceRecord> trace;  // one record per iteration, initial state first
    std::size_t iterations = 0;
    StopReason stop = StopReason::MaxIterations;
    std::size_t accepted = 0;       // steps that did not decrease J
    std::size_t perturbations = 0;  // recovery moves
};

AscentResult run_ascent(const PointSet& X0, const FeasibleRegion& region, const Surrogate& surrogate,
                        const AscentConfig& cfg);

/// Direction field used by one ascent step (FD or analytic, normalized when
/// configured). Exposed for vector-field exports.
SetGradient ascent_direction(const PointSet& X, const FeasibleRegion& region, const Surrogate& surrogate,
                             const AscentConfig& cfg);

// ---------------------------------------------------------------------------
// Episodes with stagnation recovery

struct RecoveryConfig {
    std::size_t window = 10;
    double min_growth = 5e-3;
    double perturb_step = 0.16;
    std::size_t perturb_count = 3;
    std::size_t freeze_tail = 10;
    std::uint64_t seed = 0;

    void validate() const;
};

/// One episode is one ascent step or one perturbation. A perturbation fires
/// at episode k when J grew by less than min_growth over the last `window`
/// episodes, at least `window` episodes passed since the start or the last
/// perturbation, and k < episodes - freeze_tail. It moves perturb_count
/// distinct random points by perturb_step along random unit directions and is
/// accepted unconditionally.
///
/// Random stream per perturbation: the point indices are drawn first (partial
/// Fisher-Yates), then the Gaussian direction coordinates point by point.
AscentResult run_with_recovery(const PointSet& X0, const FeasibleRegion& region, const Surrogate& surrogate,
                               const AscentConfig& cfg, const RecoveryConfig& rec, std::size_t episodes);

/// Shared by the hillclimber's optional recovery hook.
void perturb_points(PointSet& X, const FeasibleRegion& region, std::size_t count, double step, Rng& rng);

/// Records with iteration % stride == 0, plus the final record.
std::vector<TraceRecord> sample_trace(std::span<const TraceRecord> trace, std::size_t stride);

}  // namespace layered
