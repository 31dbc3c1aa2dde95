#pragma once

#include "layered/benchmarks.hpp"
#include "layered/stochastic.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

namespace layered {

enum class Optimizer { None, Gradient, Hillclimb };
enum class StartKind { Explicit, TriangleLine, TriangleNested, QuadraticPerturbed, DasDennis, LayeredBox };
enum class TraceFormat { Csv, Json };

std::string_view to_string(Optimizer o);
std::string_view to_string(StartKind s);
std::string_view to_string(TraceFormat f);
Optimizer parse_optimizer(std::string_view text);
StartKind parse_start(std::string_view text);
TraceFormat parse_format(std::string_view text);

/// Everything needed to reproduce one run. Preset files are serialized
/// manifests (schema version 1).
struct RunManifest {
    std::string name;
    std::string description;

    /// Unset means a static objective-space point set (explicit start,
    /// identity map, no optimizer).
    std::optional<ProblemName> problem = ProblemName::Triangle;
    double gamma = 1.0;
    /// Box override of the decision region; unset keeps the problem's
    /// natural region (triangle, [0,1]^2 or the simplex).
    std::optional<double> box_lo, box_hi;

    StartKind start = StartKind::TriangleLine;
    /// Point count; unset picks the start's natural size (10 for the triangle
    /// and quadratic starts, the lattice size for Das-Dennis, 15 for layered-box).
    std::optional<std::size_t> mu;
    std::optional<std::size_t> H;   // Das-Dennis budget; also sizes layered-box starts
    double dd_sigma = 0.01;
    double line_level = 0.7;
    double sample_lo = -0.25, sample_hi = 1.25;
    PointSet points{2};             // explicit start

    SurrogateConfig surrogate;
    AscentConfig ascent;
    bool recovery = false;
    RecoveryConfig recovery_cfg;
    std::size_t episodes = 500;
    HillclimbConfig hillclimb;
    Optimizer optimizer = Optimizer::Gradient;

    std::uint64_t seed = 0;
    std::size_t sample_stride = 1;
    std::size_t archive_resolution = 60;
    std::string output_path;
    TraceFormat format = TraceFormat::Csv;

    /// Cross-field checks; throws std::invalid_argument.
    void validate() const;
    /// Point count implied by the start kind and H.
    std::size_t population() const;
};

inline constexpr int kManifestVersion = 1;

/// Throws std::invalid_argument on unknown keys, bad values or a version
/// mismatch.
RunManifest parse_manifest(std::string_view json_text);
std::string manifest_to_json(const RunManifest& m);

/// A name resolves to <dir>/<name>.json, where dir is $LAYERED_ASCENT_PRESET_DIR
/// when set and the built-in preset directory otherwise. Anything that looks
/// like a path is read directly.
std::filesystem::path resolve_preset(std::string_view name_or_path);
RunManifest load_preset(std::string_view name_or_path);
std::filesystem::path preset_directory();

/// Objects a manifest expands into.
struct Materialized {
    std::optional<ProblemSpec> problem;
    FeasibleRegion region;
    Surrogate surrogate;
    PointSet start;
    PointSet archive{2};  // empty when there is no analytic front
};

Materialized materialize(const RunManifest& m);

struct IndicatorSnapshot {
    LayeredBreakdown layered;             // optimized surrogate breakdown
    std::vector<double> layer_hv, layer_mag;
    double hv = 0.0, mag = 0.0;           // first layer, cross-evaluated
    std::optional<double> igd;
};

IndicatorSnapshot snapshot(const PointSet& objectives, const SurrogateConfig& cfg, const PointSet& archive);

struct RunOutcome {
    RunManifest manifest;
    Materialized setup;
    AscentResult result;
    std::vector<double> step_sizes;  // hillclimber only
    IndicatorSnapshot initial, final;
};

/// Runs the configured optimizer (or only evaluates for Optimizer::None).
RunOutcome execute(const RunManifest& m);

}  // namespace layered
