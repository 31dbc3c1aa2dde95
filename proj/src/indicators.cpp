#include "layered/indicators.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace layered {

std::string_view to_string(BaseIndicator kind) {
    return kind == BaseIndicator::Hypervolume ? "hv" : "mag";
}

BaseIndicator parse_base_indicator(std::string_view text) {
    if (text == "hv" || text == "hypervolume") return BaseIndicator::Hypervolume;
    if (text == "mag" || text == "magnitude") return BaseIndicator::Magnitude;
    throw std::invalid_argument("unknown indicator '" + std::string(text) + "'");
}

void SurrogateConfig::validate() const {
    if (!(epsilon > 0.0 && epsilon < 1.0)) throw std::invalid_argument("epsilon must lie in (0,1)");
    if (!(tau >= 0.0)) throw std::invalid_argument("tau must be nonnegative");
    if (!(sigma > 0.0)) throw std::invalid_argument("sigma must be positive");
}

Anchor SurrogateConfig::anchor_for(std::size_t dim) const {
    if (!anchor) return Anchor::origin(dim);
    if (anchor->dim() != dim) throw std::invalid_argument("surrogate anchor dimension mismatch");
    return *anchor;
}

// ---------------------------------------------------------------------------

double magnitude_2d(const PointSet& points, const Anchor& anchor) {
    if (!points.empty() && points.dim() != 2) throw std::invalid_argument("magnitude_2d: dimension must be 2");
    const std::size_t x[] = {0}, y[] = {1};
    const double extent_x = hv_1d(points.shadow(x), anchor.shadow(x));
    const double extent_y = hv_1d(points.shadow(y), anchor.shadow(y));
    return 1.0 + 0.5 * (extent_x + extent_y) + 0.25 * hv_2d(points, anchor);
}

double magnitude_3d(const PointSet& points, const Anchor& anchor, std::size_t exact_threshold) {
    if (!points.empty() && points.dim() != 3) throw std::invalid_argument("magnitude_3d: dimension must be 3");
    double lengths = 0.0, areas = 0.0;
    for (std::size_t k = 0; k < 3; ++k) {
        const std::size_t s[] = {k};
        lengths += hv_1d(points.shadow(s), anchor.shadow(s));
    }
    for (std::size_t a = 0; a < 3; ++a)
        for (std::size_t b = a + 1; b < 3; ++b) {
            const std::size_t s[] = {a, b};
            areas += hv_2d(points.shadow(s), anchor.shadow(s));
        }
    return 1.0 + 0.5 * lengths + 0.25 * areas + 0.125 * hv_3d(points, anchor, exact_threshold);
}

namespace {

std::vector<std::size_t> subset_coords(unsigned mask, std::size_t d) {
    std::vector<std::size_t> coords;
    for (std::size_t k = 0; k < d; ++k)
        if (mask & (1u << k)) coords.push_back(k);
    return coords;
}

}  // namespace

double magnitude_d(const PointSet& points, const Anchor& anchor) {
    const std::size_t d = points.empty() ? anchor.dim() : points.dim();
    if (d == 0 || d > 16) throw std::invalid_argument("magnitude_d: unsupported dimension");
    if (anchor.dim() != d) throw std::invalid_argument("magnitude_d: anchor dimension mismatch");
    double total = 1.0;
    if (points.empty()) return total;
    for (unsigned mask = 1; mask < (1u << d); ++mask) {
        const auto coords = subset_coords(mask, d);
        total += std::ldexp(hypervolume(points.shadow(coords), anchor.shadow(coords)),
                            -static_cast<int>(coords.size()));
    }
    return total;
}

SetGradient magnitude_grad(const PointSet& points, const Anchor& anchor) {
    const std::size_t d = points.dim();
    if (d < 1 || d > 3) throw std::invalid_argument("magnitude_grad: dimension must be 1..3");
    if (anchor.dim() != d) throw std::invalid_argument("magnitude_grad: anchor dimension mismatch");
    SetGradient grad(d, points.size());
    for (unsigned mask = 1; mask < (1u << d); ++mask) {
        const auto coords = subset_coords(mask, d);
        const double weight = std::ldexp(1.0, -static_cast<int>(coords.size()));
        const auto shadow_grad = hv_gradient(points.shadow(coords), anchor.shadow(coords));
        for (std::size_t i = 0; i < points.size(); ++i)
            for (std::size_t c = 0; c < coords.size(); ++c) grad(i, coords[c]) += weight * shadow_grad(i, c);
    }
    return grad;
}

double repulsion(const PointSet& points, double sigma) {
    if (!(sigma > 0.0)) throw std::invalid_argument("repulsion: sigma must be positive");
    const double inv = 1.0 / (sigma * sigma);
    double total = 0.0;
    for (std::size_t i = 0; i < points.size(); ++i)
        for (std::size_t j = i + 1; j < points.size(); ++j) {
            double dist2 = 0.0;
            for (std::size_t k = 0; k < points.dim(); ++k) {
                const double diff = points(i, k) - points(j, k);
                dist2 += diff * diff;
            }
            total += std::exp(-dist2 * inv);
        }
    return total;
}

SetGradient repulsion_grad(const PointSet& points, double sigma) {
    if (!(sigma > 0.0)) throw std::invalid_argument("repulsion_grad: sigma must be positive");
    const double inv = 1.0 / (sigma * sigma);
    SetGradient grad(points.dim(), points.size());
    for (std::size_t i = 0; i < points.size(); ++i)
        for (std::size_t j = i + 1; j < points.size(); ++j) {
            double dist2 = 0.0;
            for (std::size_t k = 0; k < points.dim(); ++k) {
                const double diff = points(i, k) - points(j, k);
                dist2 += diff * diff;
            }
            const double w = -2.0 * inv * std::exp(-dist2 * inv);
            for (std::size_t k = 0; k < points.dim(); ++k) {
                const double g = w * (points(i, k) - points(j, k));
                grad(i, k) += g;
                grad(j, k) -= g;
            }
        }
    return grad;
}

// ---------------------------------------------------------------------------

double base_value(const PointSet& layer, BaseIndicator base, const Anchor& anchor, std::size_t exact_threshold) {
    const std::size_t d = anchor.dim();
    if (base == BaseIndicator::Hypervolume) return hypervolume(layer, anchor, exact_threshold);
    switch (d) {
    case 2: return magnitude_2d(layer, anchor);
    case 3: return magnitude_3d(layer, anchor, exact_threshold);
    default: return magnitude_d(layer, anchor);
    }
}

SetGradient base_gradient(const PointSet& layer, BaseIndicator base, const Anchor& anchor) {
    return base == BaseIndicator::Hypervolume ? hv_gradient(layer, anchor) : magnitude_grad(layer, anchor);
}

LayeredBreakdown layered_breakdown(const PointSet& points, const SurrogateConfig& cfg) {
    cfg.validate();
    if (points.empty()) throw std::invalid_argument("layered surrogate needs at least one point");
    const Anchor anchor = cfg.anchor_for(points.dim());
    LayeredBreakdown out;
    out.partition = nondominated_sort(points);
    double weight = 1.0;
    for (const auto& layer : out.partition.layers) {
        const double v = base_value(points.subset(layer), cfg.base, anchor, cfg.exact_threshold);
        out.layer_values.push_back(v);
        out.indicator += weight * v;
        weight *= cfg.epsilon;
    }
    out.repulsion = cfg.tau > 0.0 ? repulsion(points, cfg.sigma) : 0.0;
    out.value = out.indicator - cfg.tau * out.repulsion;
    return out;
}

double layered_value(const PointSet& points, const SurrogateConfig& cfg) {
    return layered_breakdown(points, cfg).value;
}

SetGradient layered_grad(const PointSet& points, const SurrogateConfig& cfg) {
    cfg.validate();
    if (points.empty()) throw std::invalid_argument("layered surrogate needs at least one point");
    const Anchor anchor = cfg.anchor_for(points.dim());
    const auto partition = nondominated_sort(points);
    SetGradient grad(points.dim(), points.size());
    double weight = 1.0;
    for (const auto& layer : partition.layers) {
        const auto g = base_gradient(points.subset(layer), cfg.base, anchor);
        for (std::size_t s = 0; s < layer.size(); ++s)
            for (std::size_t k = 0; k < points.dim(); ++k) grad(layer[s], k) = weight * g(s, k);
        weight *= cfg.epsilon;
    }
    if (cfg.tau > 0.0) {
        const auto r = repulsion_grad(points, cfg.sigma);
        for (std::size_t i = 0; i < grad.flat().size(); ++i) grad.flat()[i] -= cfg.tau * r.flat()[i];
    }
    return grad;
}

double igd(const PointSet& points, const PointSet& archive) {
    if (archive.empty()) throw std::invalid_argument("igd: empty archive");
    if (points.empty()) throw std::invalid_argument("igd: empty approximation set");
    if (points.dim() != archive.dim()) throw std::invalid_argument("igd: dimension mismatch");
    double total = 0.0;
    for (std::size_t a = 0; a < archive.size(); ++a) {
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < points.size(); ++i) {
            double dist2 = 0.0;
            for (std::size_t k = 0; k < points.dim(); ++k) {
                const double diff = archive(a, k) - points(i, k);
                dist2 += diff * diff;
            }
            best = std::min(best, dist2);
        }
        total += std::sqrt(best);
    }
    return total / static_cast<double>(archive.size());
}

}  // namespace layered
