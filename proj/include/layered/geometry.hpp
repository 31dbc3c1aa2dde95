#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

namespace layered {

/// Ordered, labelled collection of points of a common dimension, stored
/// row-major. Index i keeps referring to the same labelled point across
/// every operation in the library; nothing here reorders rows.
class PointSet {
public:
    PointSet() = default;
    explicit PointSet(std::size_t dim);
    PointSet(std::size_t dim, std::size_t count, double fill = 0.0);
    PointSet(std::size_t dim, std::vector<double> coords);
    PointSet(std::initializer_list<std::initializer_list<double>> rows);

    std::size_t dim() const noexcept { return dim_; }
    std::size_t size() const noexcept { return dim_ == 0 ? 0 : coords_.size() / dim_; }
    bool empty() const noexcept { return coords_.empty(); }

    std::span<const double> operator[](std::size_t i) const noexcept {
        return {coords_.data() + i * dim_, dim_};
    }
    std::span<double> operator[](std::size_t i) noexcept { return {coords_.data() + i * dim_, dim_}; }

    double operator()(std::size_t i, std::size_t k) const noexcept { return coords_[i * dim_ + k]; }
    double& operator()(std::size_t i, std::size_t k) noexcept { return coords_[i * dim_ + k]; }

    std::span<const double> flat() const noexcept { return coords_; }
    std::span<double> flat() noexcept { return coords_; }

    void push_back(std::span<const double> point);
    void push_back(std::initializer_list<double> point);

    /// Rows selected by `indices`, in the order given.
    PointSet subset(std::span<const std::size_t> indices) const;
    /// Coordinate projection onto `coords` (the shadow P_S B).
    PointSet shadow(std::span<const std::size_t> coords) const;

    /// Throws std::invalid_argument on a non-finite coordinate.
    void require_finite() const;

    bool operator==(const PointSet&) const = default;

private:
    std::size_t dim_ = 0;
    std::vector<double> coords_;
};

/// Per-point gradient rows; same layout as the set it differentiates.
using SetGradient = PointSet;

/// Reference point of an anchored dominated set.
struct Anchor {
    std::vector<double> r;

    static Anchor origin(std::size_t dim) { return Anchor{std::vector<double>(dim, 0.0)}; }
    std::size_t dim() const noexcept { return r.size(); }
    Anchor shadow(std::span<const std::size_t> coords) const;
};

// ---------------------------------------------------------------------------
// Dominance (maximization)

bool weakly_dominates(std::span<const double> y, std::span<const double> z);
bool strictly_dominates(std::span<const double> y, std::span<const double> z);

/// Nondomination layers, layer 0 first. Indices inside a layer ascend.
struct LayerPartition {
    std::vector<std::vector<std::size_t>> layers;
    std::vector<std::size_t> rank;  // rank[i] = layer index of point i

    std::size_t count() const noexcept { return layers.size(); }
    std::vector<std::size_t> sizes() const;
    /// "8+5+2" notation.
    std::string profile() const;
};

std::string format_profile(std::span<const std::size_t> sizes);

LayerPartition nondominated_sort(const PointSet& points);

/// Indices of points not strictly dominated by any other point. With
/// `drop_duplicates`, only the first label of an exact duplicate group stays.
std::vector<std::size_t> nondominated_indices(const PointSet& points, bool drop_duplicates = false);

// ---------------------------------------------------------------------------
// Anchored hypervolume. Coordinates below the anchor are clamped to it, so
// boxes of negative side length contribute nothing. Empty sets have volume 0.

inline constexpr std::size_t kDefaultExactThreshold = 6;

double hv_1d(const PointSet& points, const Anchor& anchor);
double hv_2d(const PointSet& points, const Anchor& anchor);
double hv_3d(const PointSet& points, const Anchor& anchor,
             std::size_t exact_threshold = kDefaultExactThreshold);

/// Inclusion-exclusion over all nonempty subsets of the nondominated points.
/// Works in any dimension; exponential in the front size.
double hv_inclusion_exclusion(const PointSet& points, const Anchor& anchor);
/// Plane sweep along the third coordinate over an incrementally maintained
/// 2D staircase.
double hv_3d_sweep(const PointSet& points, const Anchor& anchor);

/// Dispatches on dimension; dimensions above 3 use recursive slicing.
double hypervolume(const PointSet& points, const Anchor& anchor,
                   std::size_t exact_threshold = kDefaultExactThreshold);

// ---------------------------------------------------------------------------
// Hypervolume set-gradients. Strictly dominated points, points with any
// coordinate below the anchor, and repeated labels of an exact duplicate
// receive zero rows.

SetGradient hv_grad_1d(const PointSet& points, const Anchor& anchor);
SetGradient hv_grad_2d(const PointSet& points, const Anchor& anchor);
/// Central finite differences of the exact 3D value.
SetGradient hv_grad_3d(const PointSet& points, const Anchor& anchor, double fd_radius,
                       std::size_t exact_threshold = kDefaultExactThreshold);
/// Closed form: each partial derivative is the area of the face of the
/// point's box that no other box covers beyond it (forward derivative).
SetGradient hv_grad_3d_exact(const PointSet& points, const Anchor& anchor);

/// Exact gradient for dimensions 1..3.
SetGradient hv_gradient(const PointSet& points, const Anchor& anchor);

}  // namespace layered
