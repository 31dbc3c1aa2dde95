#pragma once

#include "layered/geometry.hpp"

#include <cstddef>
#include <optional>
#include <string_view>
#include <vector>

namespace layered {

enum class BaseIndicator { Hypervolume, Magnitude };

std::string_view to_string(BaseIndicator kind);
/// Accepts "hv"/"hypervolume" and "mag"/"magnitude".
BaseIndicator parse_base_indicator(std::string_view text);

/// Parameters of the layered scalar surrogate
///   J(A) = sum_l eps^(l-1) I(layer l) - tau * R_sigma(A).
struct SurrogateConfig {
    BaseIndicator base = BaseIndicator::Magnitude;
    double epsilon = 1e-3;
    double tau = 2e-4;
    double sigma = 0.03;
    std::optional<Anchor> anchor;  // origin when unset
    std::size_t exact_threshold = kDefaultExactThreshold;

    void validate() const;
    Anchor anchor_for(std::size_t dim) const;
};

// Magnitude of the anchored dominated set. All forms shift by the anchor and
// clamp at zero, then evaluate the origin-anchored expansion.

double magnitude_2d(const PointSet& points, const Anchor& anchor);
double magnitude_3d(const PointSet& points, const Anchor& anchor,
                    std::size_t exact_threshold = kDefaultExactThreshold);
/// 1 + sum over nonempty coordinate subsets S of 2^-|S| HV_S(P_S B).
double magnitude_d(const PointSet& points, const Anchor& anchor);

/// Sum over shadows of 2^-|S| times the lifted shadow hypervolume gradient.
SetGradient magnitude_grad(const PointSet& points, const Anchor& anchor);

double repulsion(const PointSet& points, double sigma);
SetGradient repulsion_grad(const PointSet& points, double sigma);

/// Base indicator of one layer (dimension 1..3 closed forms, general d for
/// magnitude).
double base_value(const PointSet& layer, BaseIndicator base, const Anchor& anchor,
                  std::size_t exact_threshold = kDefaultExactThreshold);
SetGradient base_gradient(const PointSet& layer, BaseIndicator base, const Anchor& anchor);

struct LayeredBreakdown {
    LayerPartition partition;
    std::vector<double> layer_values;  // I(layer l), unweighted
    double indicator = 0.0;            // sum_l eps^(l-1) I(layer l)
    double repulsion = 0.0;            // R_sigma, unweighted
    double value = 0.0;                // indicator - tau * repulsion
};

/// Layers are recomputed from scratch on every call.
LayeredBreakdown layered_breakdown(const PointSet& points, const SurrogateConfig& cfg);
double layered_value(const PointSet& points, const SurrogateConfig& cfg);
/// Chamberwise gradient: layer membership of the current configuration is
/// held fixed, each point takes eps^(l-1) times its own layer's gradient.
SetGradient layered_grad(const PointSet& points, const SurrogateConfig& cfg);

/// Mean distance from each archive point to its nearest point of `points`.
double igd(const PointSet& points, const PointSet& archive);

}  // namespace layered
