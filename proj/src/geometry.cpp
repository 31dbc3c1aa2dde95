#include "layered/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <stdexcept>

namespace layered {

PointSet::PointSet(std::size_t dim) : dim_(dim) {}

PointSet::PointSet(std::size_t dim, std::size_t count, double fill)
    : dim_(dim), coords_(dim * count, fill) {}

PointSet::PointSet(std::size_t dim, std::vector<double> coords) : dim_(dim), coords_(std::move(coords)) {
    if (dim_ == 0 ? !coords_.empty() : coords_.size() % dim_ != 0)
        throw std::invalid_argument("PointSet: coordinate count is not a multiple of the dimension");
}

PointSet::PointSet(std::initializer_list<std::initializer_list<double>> rows) {
    for (const auto& row : rows) push_back(row);
}

void PointSet::push_back(std::span<const double> point) {
    if (coords_.empty() && dim_ == 0) dim_ = point.size();
    if (point.size() != dim_) throw std::invalid_argument("PointSet: dimension mismatch");
    coords_.insert(coords_.end(), point.begin(), point.end());
}

void PointSet::push_back(std::initializer_list<double> point) {
    push_back(std::span<const double>(point.begin(), point.size()));
}

PointSet PointSet::subset(std::span<const std::size_t> indices) const {
    PointSet out(dim_);
    out.coords_.reserve(indices.size() * dim_);
    for (auto i : indices) out.push_back((*this)[i]);
    return out;
}

PointSet PointSet::shadow(std::span<const std::size_t> coords) const {
    PointSet out(coords.size());
    out.coords_.reserve(size() * coords.size());
    for (std::size_t i = 0; i < size(); ++i)
        for (auto k : coords) out.coords_.push_back((*this)(i, k));
    return out;
}

void PointSet::require_finite() const {
    for (double c : coords_)
        if (!std::isfinite(c)) throw std::invalid_argument("PointSet: non-finite coordinate");
}

Anchor Anchor::shadow(std::span<const std::size_t> coords) const {
    Anchor out;
    for (auto k : coords) out.r.push_back(r.at(k));
    return out;
}

// ---------------------------------------------------------------------------

bool weakly_dominates(std::span<const double> y, std::span<const double> z) {
    if (y.size() != z.size()) throw std::invalid_argument("weakly_dominates: dimension mismatch");
    for (std::size_t i = 0; i < y.size(); ++i)
        if (y[i] < z[i]) return false;
    return true;
}

bool strictly_dominates(std::span<const double> y, std::span<const double> z) {
    if (y.size() != z.size()) throw std::invalid_argument("strictly_dominates: dimension mismatch");
    bool strict = false;
    for (std::size_t i = 0; i < y.size(); ++i) {
        if (y[i] < z[i]) return false;
        if (y[i] > z[i]) strict = true;
    }
    return strict;
}

std::vector<std::size_t> LayerPartition::sizes() const {
    std::vector<std::size_t> out;
    out.reserve(layers.size());
    for (const auto& layer : layers) out.push_back(layer.size());
    return out;
}

std::string LayerPartition::profile() const {
    auto s = sizes();
    return format_profile(s);
}

std::string format_profile(std::span<const std::size_t> sizes) {
    std::string out;
    for (std::size_t i = 0; i < sizes.size(); ++i) {
        if (i) out += '+';
        out += std::to_string(sizes[i]);
    }
    return out;
}

LayerPartition nondominated_sort(const PointSet& points) {
    const std::size_t n = points.size();
    std::vector<std::vector<std::size_t>> dominated(n);
    std::vector<std::size_t> dominators(n, 0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            if (strictly_dominates(points[i], points[j])) {
                dominated[i].push_back(j);
                ++dominators[j];
            } else if (strictly_dominates(points[j], points[i])) {
                dominated[j].push_back(i);
                ++dominators[i];
            }
        }

    LayerPartition part;
    part.rank.assign(n, 0);
    std::vector<std::size_t> current;
    for (std::size_t i = 0; i < n; ++i)
        if (dominators[i] == 0) current.push_back(i);
    while (!current.empty()) {
        std::vector<std::size_t> next;
        for (auto i : current) {
            part.rank[i] = part.layers.size();
            for (auto j : dominated[i])
                if (--dominators[j] == 0) next.push_back(j);
        }
        std::sort(next.begin(), next.end());
        part.layers.push_back(std::move(current));
        current = std::move(next);
    }
    return part;
}

std::vector<std::size_t> nondominated_indices(const PointSet& points, bool drop_duplicates) {
    std::vector<std::size_t> out;
    const std::size_t n = points.size();
    for (std::size_t i = 0; i < n; ++i) {
        bool keep = true;
        for (std::size_t j = 0; j < n && keep; ++j) {
            if (j == i) continue;
            if (strictly_dominates(points[j], points[i])) keep = false;
            else if (drop_duplicates && j < i && std::ranges::equal(points[j], points[i])) keep = false;
        }
        if (keep) out.push_back(i);
    }
    return out;
}

// ---------------------------------------------------------------------------

namespace {

void require_anchor(const PointSet& points, const Anchor& anchor, std::size_t expected_dim) {
    if (expected_dim != 0 && points.dim() != expected_dim && !points.empty())
        throw std::invalid_argument("hypervolume: wrong point dimension");
    if (!points.empty() && anchor.dim() != points.dim())
        throw std::invalid_argument("hypervolume: anchor dimension mismatch");
}

/// Points with positive extent above the anchor, shifted so the anchor is
/// the origin. Zero-extent boxes are dropped since they have no measure.
PointSet shifted_positive(const PointSet& points, const Anchor& anchor) {
    PointSet out(points.dim());
    std::vector<double> row(points.dim());
    for (std::size_t i = 0; i < points.size(); ++i) {
        bool positive = true;
        for (std::size_t k = 0; k < points.dim(); ++k) {
            row[k] = points(i, k) - anchor.r[k];
            if (!(row[k] > 0.0)) positive = false;
        }
        if (positive) out.push_back(row);
    }
    return out;
}

/// Area of the origin-anchored union for shifted 2D points.
double staircase_area(const PointSet& shifted) {
    std::vector<std::size_t> order(shifted.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (shifted(a, 0) != shifted(b, 0)) return shifted(a, 0) > shifted(b, 0);
        return shifted(a, 1) > shifted(b, 1);
    });
    double area = 0.0, y_max = 0.0;
    for (auto i : order) {
        if (shifted(i, 1) > y_max) {
            area += shifted(i, 0) * (shifted(i, 1) - y_max);
            y_max = shifted(i, 1);
        }
    }
    return area;
}

double inclusion_exclusion_shifted(const PointSet& front) {
    const std::size_t n = front.size(), d = front.dim();
    if (n == 0) return 0.0;
    double total = 0.0;
    std::vector<double> meet(d * (n + 1));
    // Depth-first enumeration; meet[depth] holds the coordinatewise min of
    // the chosen subset.
    auto recurse = [&](auto&& self, std::size_t next, std::size_t depth) -> void {
        for (std::size_t i = next; i < n; ++i) {
            double volume = 1.0;
            for (std::size_t k = 0; k < d; ++k) {
                double m = depth == 0 ? front(i, k) : std::min(meet[(depth - 1) * d + k], front(i, k));
                meet[depth * d + k] = m;
                volume *= m;
            }
            total += (depth % 2 == 0) ? volume : -volume;
            self(self, i + 1, depth + 1);
        }
    };
    recurse(recurse, 0, 0);
    return total;
}

double sweep_shifted(const PointSet& shifted) {
    const std::size_t n = shifted.size();
    if (n == 0) return 0.0;
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        for (std::size_t k = 3; k-- > 0;)
            if (shifted(a, k) != shifted(b, k)) return shifted(a, k) > shifted(b, k);
        return a < b;
    });

    // x ascending implies y strictly descending.
    std::map<double, double> stair;
    double area = 0.0, volume = 0.0;
    double z_prev = shifted(order.front(), 2);
    for (auto idx : order) {
        const double x = shifted(idx, 0), y = shifted(idx, 1), z = shifted(idx, 2);
        volume += area * (z_prev - z);
        z_prev = z;

        auto it = stair.lower_bound(x);
        if (it != stair.end() && it->second >= y) continue;  // covered
        double floor = 0.0;
        if (it != stair.end()) {
            floor = it->second;
            if (it->first == x) it = stair.erase(it);
        }
        // Walk left over the steps the new box overlaps; steps it dominates
        // are removed.
        double right = x, gained = 0.0;
        bool blocked = false;
        while (it != stair.begin()) {
            auto left = std::prev(it);
            gained += (right - left->first) * (y - floor);
            if (left->second >= y) {
                blocked = true;
                break;
            }
            floor = left->second;
            right = left->first;
            it = stair.erase(left);
        }
        if (!blocked) gained += right * (y - floor);
        area += gained;
        stair.emplace(x, y);
    }
    volume += area * z_prev;
    return volume;
}

double slicing_shifted(const PointSet& shifted) {
    const std::size_t d = shifted.dim(), n = shifted.size();
    if (n == 0) return 0.0;
    if (d == 1) {
        double m = 0.0;
        for (std::size_t i = 0; i < n; ++i) m = std::max(m, shifted(i, 0));
        return m;
    }
    if (d == 2) return staircase_area(shifted);
    if (d == 3) return sweep_shifted(shifted);
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return shifted(a, d - 1) > shifted(b, d - 1); });
    std::vector<std::size_t> head(d - 1);
    std::iota(head.begin(), head.end(), 0);
    const PointSet heads = shifted.shadow(head);
    PointSet slab(d - 1);
    double volume = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        slab.push_back(heads[order[k]]);
        const double below = k + 1 < n ? shifted(order[k + 1], d - 1) : 0.0;
        const double depth = shifted(order[k], d - 1) - below;
        if (depth > 0.0) volume += slicing_shifted(slab) * depth;
    }
    return volume;
}

PointSet nondominated_rows(const PointSet& shifted) {
    auto idx = nondominated_indices(shifted, true);
    return shifted.subset(idx);
}

}  // namespace

double hv_1d(const PointSet& points, const Anchor& anchor) {
    require_anchor(points, anchor, 1);
    double best = 0.0;
    for (std::size_t i = 0; i < points.size(); ++i) best = std::max(best, points(i, 0) - anchor.r[0]);
    return best;
}

double hv_2d(const PointSet& points, const Anchor& anchor) {
    require_anchor(points, anchor, 2);
    return staircase_area(shifted_positive(points, anchor));
}

double hv_3d(const PointSet& points, const Anchor& anchor, std::size_t exact_threshold) {
    require_anchor(points, anchor, 3);
    auto front = nondominated_rows(shifted_positive(points, anchor));
    if (front.size() <= exact_threshold) return inclusion_exclusion_shifted(front);
    return sweep_shifted(front);
}

double hv_inclusion_exclusion(const PointSet& points, const Anchor& anchor) {
    require_anchor(points, anchor, 0);
    return inclusion_exclusion_shifted(nondominated_rows(shifted_positive(points, anchor)));
}

double hv_3d_sweep(const PointSet& points, const Anchor& anchor) {
    require_anchor(points, anchor, 3);
    return sweep_shifted(shifted_positive(points, anchor));
}

double hypervolume(const PointSet& points, const Anchor& anchor, std::size_t exact_threshold) {
    if (points.empty()) return 0.0;
    switch (points.dim()) {
    case 1: return hv_1d(points, anchor);
    case 2: return hv_2d(points, anchor);
    case 3: return hv_3d(points, anchor, exact_threshold);
    default:
        require_anchor(points, anchor, 0);
        return slicing_shifted(nondominated_rows(shifted_positive(points, anchor)));
    }
}

// ---------------------------------------------------------------------------

namespace {

/// Points eligible for a nonzero gradient: no coordinate below the anchor,
/// not strictly dominated, first label of any duplicate group.
std::vector<std::size_t> active_indices(const PointSet& points, const Anchor& anchor) {
    std::vector<std::size_t> inside;
    for (std::size_t i = 0; i < points.size(); ++i) {
        bool ok = true;
        for (std::size_t k = 0; k < points.dim(); ++k)
            if (points(i, k) < anchor.r[k]) ok = false;
        if (ok) inside.push_back(i);
    }
    auto local = nondominated_indices(points.subset(inside), true);
    std::vector<std::size_t> out;
    out.reserve(local.size());
    for (auto j : local) out.push_back(inside[j]);
    return out;
}

}  // namespace

SetGradient hv_grad_1d(const PointSet& points, const Anchor& anchor) {
    require_anchor(points, anchor, 1);
    SetGradient grad(1, points.size());
    auto active = active_indices(points, anchor);
    // The nondominated set in 1D is the maximum; duplicates beyond the first
    // label were already dropped.
    if (!active.empty() && points(active.front(), 0) > anchor.r[0]) grad(active.front(), 0) = 1.0;
    return grad;
}

SetGradient hv_grad_2d(const PointSet& points, const Anchor& anchor) {
    require_anchor(points, anchor, 2);
    SetGradient grad(2, points.size());
    auto active = active_indices(points, anchor);
    std::sort(active.begin(), active.end(), [&](std::size_t a, std::size_t b) {
        if (points(a, 0) != points(b, 0)) return points(a, 0) < points(b, 0);
        return points(a, 1) > points(b, 1);
    });
    for (std::size_t s = 0; s < active.size(); ++s) {
        const auto i = active[s];
        const double y_next = s + 1 < active.size() ? points(active[s + 1], 1) : anchor.r[1];
        const double x_prev = s > 0 ? points(active[s - 1], 0) : anchor.r[0];
        grad(i, 0) = points(i, 1) - y_next;
        grad(i, 1) = points(i, 0) - x_prev;
    }
    return grad;
}

SetGradient hv_grad_3d(const PointSet& points, const Anchor& anchor, double fd_radius,
                       std::size_t exact_threshold) {
    require_anchor(points, anchor, 3);
    if (!(fd_radius > 0.0)) throw std::invalid_argument("hv_grad_3d: fd_radius must be positive");
    SetGradient grad(3, points.size());
    PointSet probe = points;
    for (std::size_t i = 0; i < points.size(); ++i)
        for (std::size_t k = 0; k < 3; ++k) {
            const double base = points(i, k);
            probe(i, k) = base + fd_radius;
            const double up = hv_3d(probe, anchor, exact_threshold);
            probe(i, k) = base - fd_radius;
            const double down = hv_3d(probe, anchor, exact_threshold);
            probe(i, k) = base;
            grad(i, k) = (up - down) / (2.0 * fd_radius);
        }
    return grad;
}

SetGradient hv_grad_3d_exact(const PointSet& points, const Anchor& anchor) {
    require_anchor(points, anchor, 3);
    const std::size_t d = 3;
    SetGradient grad(d, points.size());
    auto active = active_indices(points, anchor);
    std::vector<std::size_t> face_coords(d - 1);
    PointSet covering(d - 1);
    for (auto i : active) {
        for (std::size_t k = 0; k < d; ++k) {
            std::size_t c = 0;
            for (std::size_t j = 0; j < d; ++j)
                if (j != k) face_coords[c++] = j;
            const Anchor face_anchor = anchor.shadow(face_coords);
            PointSet face(d - 1);
            face.push_back(points.shadow(face_coords)[i]);
            covering = PointSet(d - 1);
            std::vector<double> clipped(d - 1);
            for (auto p : active) {
                if (p == i || !(points(p, k) > points(i, k))) continue;
                for (std::size_t c2 = 0; c2 < d - 1; ++c2)
                    clipped[c2] = std::min(points(p, face_coords[c2]), points(i, face_coords[c2]));
                covering.push_back(clipped);
            }
            grad(i, k) = hv_2d(face, face_anchor) - hv_2d(covering, face_anchor);
        }
    }
    return grad;
}

SetGradient hv_gradient(const PointSet& points, const Anchor& anchor) {
    switch (points.dim()) {
    case 1: return hv_grad_1d(points, anchor);
    case 2: return hv_grad_2d(points, anchor);
    case 3: return hv_grad_3d_exact(points, anchor);
    default: throw std::invalid_argument("hv_gradient: exact gradients need dimension 1..3");
    }
}

}  // namespace layered
