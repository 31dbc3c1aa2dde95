#include "layered/ascent.hpp"

#include <algorithm>
#include <limits>
#include <cmath>
#include <exception>
#include <numeric>
#include <stdexcept>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace layered {

FeasibleRegion FeasibleRegion::box(std::vector<double> lo, std::vector<double> hi) {
    FeasibleRegion r;
    r.kind = RegionKind::Box;
    r.dim = lo.size();
    r.lo = std::move(lo);
    r.hi = std::move(hi);
    r.validate();
    return r;
}

FeasibleRegion FeasibleRegion::cube(std::size_t dim, double lo, double hi) {
    return box(std::vector<double>(dim, lo), std::vector<double>(dim, hi));
}

FeasibleRegion FeasibleRegion::triangle() {
    FeasibleRegion r;
    r.kind = RegionKind::TriangleSumLE1;
    r.dim = 2;
    return r;
}

FeasibleRegion FeasibleRegion::simplex(std::size_t dim) {
    FeasibleRegion r;
    r.kind = RegionKind::Simplex;
    r.dim = dim;
    r.validate();
    return r;
}

void FeasibleRegion::validate() const {
    switch (kind) {
    case RegionKind::Box:
        if (lo.size() != dim || hi.size() != dim || dim == 0) throw std::invalid_argument("box: bad bounds");
        for (std::size_t k = 0; k < dim; ++k)
            if (!(lo[k] < hi[k])) throw std::invalid_argument("box: lo must be below hi");
        break;
    case RegionKind::TriangleSumLE1:
        if (dim != 2) throw std::invalid_argument("triangle region is two-dimensional");
        break;
    case RegionKind::Simplex:
        if (dim != 3) throw std::invalid_argument("simplex region is three-dimensional");
        break;
    }
}

namespace {

/// Sorting-based Euclidean projection onto {x >= 0, sum x = 1}.
void project_simplex(std::span<double> x) {
    // Points already on the simplex up to summation rounding are kept as is,
    // which makes the projection exactly idempotent.
    double sum = 0.0;
    bool nonnegative = true;
    for (double v : x) {
        sum += v;
        nonnegative = nonnegative && v >= 0.0;
    }
    if (nonnegative && std::abs(sum - 1.0) <= 4.0 * std::numeric_limits<double>::epsilon() * double(x.size())) return;
    std::vector<double> u(x.begin(), x.end());
    std::sort(u.begin(), u.end(), std::greater<>());
    double partial = 0.0, theta = 0.0;
    for (std::size_t j = 0; j < u.size(); ++j) {
        partial += u[j];
        const double t = (partial - 1.0) / static_cast<double>(j + 1);
        if (u[j] - t > 0.0) theta = t;
    }
    for (double& v : x) v = std::max(v - theta, 0.0);
}

}  // namespace

void FeasibleRegion::project_point(std::span<double> x) const {
    if (x.size() != dim) throw std::invalid_argument("project: dimension mismatch");
    switch (kind) {
    case RegionKind::Box:
        for (std::size_t k = 0; k < dim; ++k) x[k] = std::clamp(x[k], lo[k], hi[k]);
        break;
    case RegionKind::TriangleSumLE1: {
        // Orthant projection is exact when it already satisfies the sum
        // constraint; otherwise the nearest point lies on the hypotenuse.
        const double a = std::max(x[0], 0.0), b = std::max(x[1], 0.0);
        if (a + b <= 1.0) {
            x[0] = a;
            x[1] = b;
        } else {
            project_simplex(x);
        }
        break;
    }
    case RegionKind::Simplex:
        project_simplex(x);
        break;
    }
}

bool FeasibleRegion::contains(std::span<const double> x, double tol) const {
    if (x.size() != dim) return false;
    switch (kind) {
    case RegionKind::Box:
        for (std::size_t k = 0; k < dim; ++k)
            if (x[k] < lo[k] - tol || x[k] > hi[k] + tol) return false;
        return true;
    case RegionKind::TriangleSumLE1:
        return x[0] >= -tol && x[1] >= -tol && x[0] + x[1] <= 1.0 + tol;
    case RegionKind::Simplex: {
        double sum = 0.0;
        for (double v : x) {
            if (v < -tol) return false;
            sum += v;
        }
        return std::abs(sum - 1.0) <= tol;
    }
    }
    return false;
}

PointSet project(const PointSet& points, const FeasibleRegion& region) {
    if (!points.empty() && points.dim() != region.dim) throw std::invalid_argument("project: dimension mismatch");
    PointSet out = points;
    for (std::size_t i = 0; i < out.size(); ++i) region.project_point(out[i]);
    return out;
}

PointSet ObjectiveMap::operator()(const PointSet& states) const {
    if (!states.empty() && states.dim() != input_dim_) throw std::invalid_argument("objective map: bad state dimension");
    if (!fn_) return states;
    PointSet out(output_dim_, states.size());
    for (std::size_t i = 0; i < states.size(); ++i) fn_(states[i], out[i]);
    return out;
}

// ---------------------------------------------------------------------------

namespace {

double fd_entry(PointSet& probe, const PointSet& X, const SetFunction& J, const FeasibleRegion& region, double h,
                std::size_t i, std::size_t r) {
    auto row = probe[i];
    const auto base = X[i];
    std::copy(base.begin(), base.end(), row.begin());
    row[r] = base[r] + h;
    region.project_point(row);
    const double up = J(probe);
    std::copy(base.begin(), base.end(), row.begin());
    row[r] = base[r] - h;
    region.project_point(row);
    const double down = J(probe);
    std::copy(base.begin(), base.end(), row.begin());
    return (up - down) / (2.0 * h);
}

void require_fd_args(const PointSet& X, const FeasibleRegion& region, double h) {
    if (!(h > 0.0)) throw std::invalid_argument("finite-difference radius must be positive");
    if (X.dim() != region.dim) throw std::invalid_argument("finite differences: region dimension mismatch");
}

}  // namespace

SetGradient fd_set_gradient(const PointSet& X, const SetFunction& J, const FeasibleRegion& region, double h) {
    require_fd_args(X, region, h);
    const std::size_t d = X.dim();
    const auto entries = static_cast<std::ptrdiff_t>(X.size() * d);
    SetGradient G(d, X.size());
    std::exception_ptr failure;
#pragma omp parallel
    {
        PointSet probe = X;
#pragma omp for schedule(dynamic)
        for (std::ptrdiff_t e = 0; e < entries; ++e) {
            const auto i = static_cast<std::size_t>(e) / d, r = static_cast<std::size_t>(e) % d;
            try {
                G(i, r) = fd_entry(probe, X, J, region, h, i, r);
            } catch (...) {
#pragma omp critical(layered_fd_failure)
                if (!failure) failure = std::current_exception();
            }
        }
    }
    if (failure) std::rethrow_exception(failure);
    return G;
}

SetGradient fd_set_gradient_serial(const PointSet& X, const SetFunction& J, const FeasibleRegion& region,
                                   double h) {
    require_fd_args(X, region, h);
    SetGradient G(X.dim(), X.size());
    PointSet probe = X;
    for (std::size_t i = 0; i < X.size(); ++i)
        for (std::size_t r = 0; r < X.dim(); ++r) G(i, r) = fd_entry(probe, X, J, region, h, i, r);
    return G;
}

SetGradient normalize_pointwise(SetGradient G) {
    for (std::size_t i = 0; i < G.size(); ++i) {
        auto row = G[i];
        double norm2 = 0.0;
        for (double v : row) norm2 += v * v;
        const double norm = std::sqrt(norm2);
        if (norm > kNormFloor)
            for (double& v : row) v /= norm;
    }
    return G;
}

double frobenius_norm(const SetGradient& G) {
    double s = 0.0;
    for (double v : G.flat()) s += v * v;
    return std::sqrt(s);
}

// ---------------------------------------------------------------------------

void AscentConfig::validate() const {
    if (!(alpha > 0.0)) throw std::invalid_argument("alpha must be positive");
    if (!(h > 0.0)) throw std::invalid_argument("fd radius must be positive");
    if (k_max < 1) throw std::invalid_argument("k_max must be at least 1");
    if (!(delta_val >= 0.0)) throw std::invalid_argument("delta_val must be nonnegative");
}

void RecoveryConfig::validate() const {
    if (window < 1) throw std::invalid_argument("recovery window must be at least 1");
    if (!(perturb_step >= 0.0)) throw std::invalid_argument("perturbation step must be nonnegative");
}

std::string_view to_string(StepKind kind) {
    switch (kind) {
    case StepKind::Initial: return "initial";
    case StepKind::Gradient: return "gradient";
    case StepKind::Perturbation: return "perturbation";
    case StepKind::Accepted: return "accepted";
    case StepKind::Rejected: return "rejected";
    }
    return "?";
}

std::string_view to_string(StopReason reason) {
    switch (reason) {
    case StopReason::MaxIterations: return "max-iterations";
    case StopReason::ZeroGradient: return "zero-gradient";
    case StopReason::ValueTolerance: return "value-tolerance";
    }
    return "?";
}

SetGradient ascent_direction(const PointSet& X, const FeasibleRegion& region, const Surrogate& surrogate,
                             const AscentConfig& cfg) {
    SetGradient G;
    if (cfg.gradient_mode == GradientMode::Analytic) {
        if (!surrogate.map.is_identity())
            throw std::invalid_argument("analytic gradients need an identity objective map");
        G = layered_grad(X, surrogate.config);
    } else {
        G = fd_set_gradient(X, [&](const PointSet& s) { return surrogate.value(s); }, region, cfg.h);
    }
    if (cfg.normalize_per_point) G = normalize_pointwise(std::move(G));
    return G;
}

namespace {

TraceRecord make_record(std::size_t iteration, const PointSet& X, const Surrogate& surrogate, StepKind kind,
                        double* value_out = nullptr) {
    TraceRecord rec;
    rec.iteration = iteration;
    rec.points = X;
    rec.kind = kind;
    PointSet Y = surrogate.objectives(X);
    auto b = layered_breakdown(Y, surrogate.config);
    rec.value = b.value;
    rec.layer_sizes = b.partition.sizes();
    if (!surrogate.map.is_identity()) rec.objective_points = std::move(Y);
    if (value_out) *value_out = rec.value;
    return rec;
}

void step(PointSet& X, const SetGradient& G, double alpha, const FeasibleRegion& region) {
    auto x = X.flat();
    auto g = G.flat();
    for (std::size_t e = 0; e < x.size(); ++e) x[e] += alpha * g[e];
    for (std::size_t i = 0; i < X.size(); ++i) region.project_point(X[i]);
}

void finish(AscentResult& result, const PointSet& X, const Surrogate& surrogate) {
    result.final_state = X;
    result.final_objectives = surrogate.objectives(X);
}

void check_inputs(const PointSet& X0, const FeasibleRegion& region, const Surrogate& surrogate) {
    region.validate();
    surrogate.config.validate();
    if (X0.empty()) throw std::invalid_argument("initial set is empty");
    if (X0.dim() != region.dim) throw std::invalid_argument("initial set does not match the region dimension");
    if (surrogate.map.input_dim() != X0.dim()) throw std::invalid_argument("objective map dimension mismatch");
    X0.require_finite();
}

}  // namespace

AscentResult run_ascent(const PointSet& X0, const FeasibleRegion& region, const Surrogate& surrogate,
                        const AscentConfig& cfg) {
    check_inputs(X0, region, surrogate);
    cfg.validate();
    AscentResult result;
    PointSet X = project(X0, region);
    double V = 0.0;
    result.trace.push_back(make_record(0, X, surrogate, StepKind::Initial, &V));

    for (std::size_t k = 0; k < cfg.k_max; ++k) {
        const auto G = ascent_direction(X, region, surrogate, cfg);
        if (frobenius_norm(G) <= kNormFloor) {
            result.stop = StopReason::ZeroGradient;
            break;
        }
        step(X, G, cfg.alpha, region);
        double next = 0.0;
        result.trace.push_back(make_record(k + 1, X, surrogate, StepKind::Gradient, &next));
        result.iterations = k + 1;
        if (next >= V) ++result.accepted;
        if (std::abs(next - V) <= cfg.delta_val) {
            result.stop = StopReason::ValueTolerance;
            break;
        }
        V = next;
    }
    finish(result, X, surrogate);
    return result;
}

void perturb_points(PointSet& X, const FeasibleRegion& region, std::size_t count, double step_length, Rng& rng) {
    const std::size_t n = X.size();
    count = std::min(count, n);
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    for (std::size_t j = 0; j < count; ++j) std::swap(order[j], order[j + rng.index(n - j)]);
    std::vector<double> dir(X.dim());
    for (std::size_t j = 0; j < count; ++j) {
        double norm = 0.0;
        while (norm == 0.0) {
            norm = 0.0;
            for (double& v : dir) {
                v = rng.normal();
                norm += v * v;
            }
            norm = std::sqrt(norm);
        }
        auto row = X[order[j]];
        for (std::size_t k = 0; k < row.size(); ++k) row[k] += step_length * dir[k] / norm;
        region.project_point(row);
    }
}

AscentResult run_with_recovery(const PointSet& X0, const FeasibleRegion& region, const Surrogate& surrogate,
                               const AscentConfig& cfg, const RecoveryConfig& rec, std::size_t episodes) {
    check_inputs(X0, region, surrogate);
    cfg.validate();
    rec.validate();
    if (episodes < rec.freeze_tail) throw std::invalid_argument("episodes must cover the freeze tail");
    Rng rng(rec.seed);
    AscentResult result;
    PointSet X = project(X0, region);
    std::vector<double> history(1);
    result.trace.push_back(make_record(0, X, surrogate, StepKind::Initial, &history[0]));
    std::size_t quiet_since = 0;

    for (std::size_t k = 0; k < episodes; ++k) {
        const bool may_perturb = k >= quiet_since + rec.window && k + rec.freeze_tail < episodes;
        StepKind kind = StepKind::Gradient;
        if (may_perturb && history[k] - history[k - rec.window] < rec.min_growth) {
            perturb_points(X, region, rec.perturb_count, rec.perturb_step, rng);
            kind = StepKind::Perturbation;
            quiet_since = k + 1;
            ++result.perturbations;
        } else {
            step(X, ascent_direction(X, region, surrogate, cfg), cfg.alpha, region);
        }
        double v = 0.0;
        result.trace.push_back(make_record(k + 1, X, surrogate, kind, &v));
        if (kind == StepKind::Gradient && v >= history.back()) ++result.accepted;
        history.push_back(v);
        result.iterations = k + 1;
    }
    finish(result, X, surrogate);
    return result;
}

std::vector<TraceRecord> sample_trace(std::span<const TraceRecord> trace, std::size_t stride) {
    if (stride == 0) throw std::invalid_argument("sample stride must be positive");
    std::vector<TraceRecord> out;
    for (const auto& r : trace)
        if (r.iteration % stride == 0) out.push_back(r);
    if (!trace.empty() && (out.empty() || out.back().iteration != trace.back().iteration)) out.push_back(trace.back());
    return out;
}

}  // namespace layered
