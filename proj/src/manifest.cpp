#include "layered/manifest.hpp"

#include <json.hpp>

#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#ifndef LAYERED_PRESET_DIR
#define LAYERED_PRESET_DIR "presets"
#endif

namespace layered {

using nlohmann::json;

std::string_view to_string(Optimizer o) {
    switch (o) {
    case Optimizer::None: return "none";
    case Optimizer::Gradient: return "gradient";
    case Optimizer::Hillclimb: return "hillclimb";
    }
    return "?";
}

std::string_view to_string(StartKind s) {
    switch (s) {
    case StartKind::Explicit: return "explicit";
    case StartKind::TriangleLine: return "triangle-line";
    case StartKind::TriangleNested: return "triangle-nested";
    case StartKind::QuadraticPerturbed: return "quadratic-perturbed";
    case StartKind::DasDennis: return "das-dennis";
    case StartKind::LayeredBox: return "layered-box";
    }
    return "?";
}

std::string_view to_string(TraceFormat f) { return f == TraceFormat::Csv ? "csv" : "json"; }

Optimizer parse_optimizer(std::string_view t) {
    if (t == "none") return Optimizer::None;
    if (t == "gradient") return Optimizer::Gradient;
    if (t == "hillclimb") return Optimizer::Hillclimb;
    throw std::invalid_argument("unknown optimizer '" + std::string(t) + "'");
}

StartKind parse_start(std::string_view t) {
    for (auto k : {StartKind::Explicit, StartKind::TriangleLine, StartKind::TriangleNested,
                   StartKind::QuadraticPerturbed, StartKind::DasDennis, StartKind::LayeredBox})
        if (t == to_string(k)) return k;
    throw std::invalid_argument("unknown start kind '" + std::string(t) + "'");
}

TraceFormat parse_format(std::string_view t) {
    if (t == "csv") return TraceFormat::Csv;
    if (t == "json") return TraceFormat::Json;
    throw std::invalid_argument("unknown format '" + std::string(t) + "'");
}

namespace {

std::size_t triangular_rows(std::size_t count) {
    std::size_t rows = 0;
    while (rows * (rows + 1) / 2 < count) ++rows;
    if (rows * (rows + 1) / 2 != count)
        throw std::invalid_argument("nested triangle start needs a triangular point count (1, 3, 6, 10, ...)");
    return rows;
}

std::size_t lattice_size(std::size_t H) { return (H + 1) * (H + 2) / 2; }

}  // namespace

std::size_t RunManifest::population() const {
    switch (start) {
    case StartKind::Explicit: return points.size();
    case StartKind::QuadraticPerturbed: return 10;
    case StartKind::DasDennis:
        if (!H) throw std::invalid_argument("das-dennis start requires H");
        return lattice_size(*H);
    case StartKind::LayeredBox: return mu ? *mu : H ? lattice_size(*H) : 15;
    case StartKind::TriangleLine:
    case StartKind::TriangleNested: return mu.value_or(10);
    }
    return 0;
}

void RunManifest::validate() const {
    surrogate.validate();
    ascent.validate();
    recovery_cfg.validate();
    hillclimb.validate();
    if (!(gamma > 0.0)) throw std::invalid_argument("gamma must be positive");
    if (sample_stride < 1) throw std::invalid_argument("sample_stride must be at least 1");
    if (archive_resolution < 1) throw std::invalid_argument("archive_resolution must be at least 1");
    if (box_lo.has_value() != box_hi.has_value() || (box_lo && !(*box_lo < *box_hi)))
        throw std::invalid_argument("box override needs lo < hi");
    if (recovery && optimizer == Optimizer::None) throw std::invalid_argument("recovery requires an optimizer");
    if (recovery && optimizer == Optimizer::Gradient && episodes < recovery_cfg.freeze_tail)
        throw std::invalid_argument("episodes must be at least freeze_tail");
    if (!(sample_lo < sample_hi)) throw std::invalid_argument("sample range needs lo < hi");

    auto require_start = [&](std::initializer_list<StartKind> allowed) {
        for (auto k : allowed)
            if (k == start) return;
        throw std::invalid_argument("start '" + std::string(to_string(start)) + "' does not fit problem '" +
                                    (problem ? std::string(to_string(*problem)) : std::string("static")) + "'");
    };

    if (!problem) {
        if (start != StartKind::Explicit) throw std::invalid_argument("a static manifest needs explicit points");
        if (optimizer != Optimizer::None) throw std::invalid_argument("a static manifest cannot be optimized");
        if (box_lo) throw std::invalid_argument("a static manifest has no decision region");
    } else {
        switch (*problem) {
        case ProblemName::Triangle:
            require_start({StartKind::TriangleLine, StartKind::TriangleNested, StartKind::Explicit});
            if (box_lo) throw std::invalid_argument("the triangle problem has a fixed region");
            break;
        case ProblemName::SummedQuadratic:
            require_start({StartKind::QuadraticPerturbed, StartKind::Explicit});
            break;
        case ProblemName::Supersphere:
            require_start({StartKind::DasDennis, StartKind::LayeredBox, StartKind::Explicit});
            break;
        }
        const bool identity = *problem == ProblemName::Triangle;
        if (ascent.gradient_mode == GradientMode::Analytic && !identity)
            throw std::invalid_argument("analytic gradients need an objective-space problem");
    }
    if (start == StartKind::QuadraticPerturbed && mu && *mu != 10)
        throw std::invalid_argument("the quadratic start has exactly 10 points");
    if (start == StartKind::Explicit && mu && *mu != points.size())
        throw std::invalid_argument("mu does not match the number of explicit points");
    if ((start == StartKind::DasDennis || start == StartKind::LayeredBox) && H && mu && *mu != lattice_size(*H))
        throw std::invalid_argument("mu does not match (H+1)(H+2)/2");
    if (start == StartKind::DasDennis && !H) throw std::invalid_argument("das-dennis start requires H");
    if (start == StartKind::TriangleNested) triangular_rows(population());
    const std::size_t n = population();
    if (n < 1) throw std::invalid_argument("the start set is empty");
    if (start == StartKind::Explicit) points.require_finite();
}

// ---------------------------------------------------------------------------
// JSON

namespace {

const std::set<std::string>& known_keys() {
    static const std::set<std::string> keys{
        "name",          "version",        "description", "problem",       "gamma",
        "box",           "start",          "mu",          "H",             "dd_sigma",
        "line_level",    "sample_range",   "points",      "indicator",     "epsilon",
        "tau",           "sigma",          "anchor",      "exact_front_threshold",
        "alpha",         "fd_radius",      "iters",       "delta_val",     "normalize",
        "gradient_mode", "recovery",       "recovery_window", "recovery_min_growth",
        "recovery_step", "recovery_count", "freeze_tail", "episodes",      "optimizer",
        "hillclimb",     "seed",           "sample_stride", "archive_resolution", "format",
        "out"};
    return keys;
}

template <class T>
T get(const json& j, const char* key) {
    try {
        return j.at(key).get<T>();
    } catch (const json::exception& e) {
        throw std::invalid_argument(std::string("manifest key '") + key + "': " + e.what());
    }
}

}  // namespace

RunManifest parse_manifest(std::string_view text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw std::invalid_argument(std::string("manifest is not valid JSON: ") + e.what());
    }
    if (!j.is_object()) throw std::invalid_argument("manifest must be a JSON object");
    for (auto it = j.begin(); it != j.end(); ++it)
        if (!known_keys().count(it.key())) throw std::invalid_argument("unknown manifest key '" + it.key() + "'");
    if (!j.contains("version") || get<int>(j, "version") != kManifestVersion)
        throw std::invalid_argument("manifest version must be " + std::to_string(kManifestVersion));

    RunManifest m;
    if (j.contains("name")) m.name = get<std::string>(j, "name");
    if (j.contains("description")) m.description = get<std::string>(j, "description");
    if (j.contains("problem")) {
        const auto p = get<std::string>(j, "problem");
        if (p == "static") m.problem.reset();
        else m.problem = parse_problem(p);
    }
    if (j.contains("gamma")) m.gamma = get<double>(j, "gamma");
    if (j.contains("box")) {
        const auto b = get<std::vector<double>>(j, "box");
        if (b.size() != 2) throw std::invalid_argument("manifest key 'box' must be [lo, hi]");
        m.box_lo = b[0];
        m.box_hi = b[1];
    }
    if (j.contains("start")) m.start = parse_start(get<std::string>(j, "start"));
    if (j.contains("mu")) m.mu = get<std::size_t>(j, "mu");
    if (j.contains("H")) m.H = get<std::size_t>(j, "H");
    if (j.contains("dd_sigma")) m.dd_sigma = get<double>(j, "dd_sigma");
    if (j.contains("line_level")) m.line_level = get<double>(j, "line_level");
    if (j.contains("sample_range")) {
        const auto r = get<std::vector<double>>(j, "sample_range");
        if (r.size() != 2) throw std::invalid_argument("manifest key 'sample_range' must be [lo, hi]");
        m.sample_lo = r[0];
        m.sample_hi = r[1];
    }
    if (j.contains("points")) {
        const auto rows = get<std::vector<std::vector<double>>>(j, "points");
        if (rows.empty()) throw std::invalid_argument("manifest key 'points' is empty");
        PointSet p(rows.front().size());
        for (const auto& r : rows) {
            if (r.size() != p.dim()) throw std::invalid_argument("manifest points have mixed dimensions");
            p.push_back(r);
        }
        m.points = std::move(p);
    }
    if (j.contains("indicator")) m.surrogate.base = parse_base_indicator(get<std::string>(j, "indicator"));
    if (j.contains("epsilon")) m.surrogate.epsilon = get<double>(j, "epsilon");
    if (j.contains("tau")) m.surrogate.tau = get<double>(j, "tau");
    if (j.contains("sigma")) m.surrogate.sigma = get<double>(j, "sigma");
    if (j.contains("anchor")) m.surrogate.anchor = Anchor{get<std::vector<double>>(j, "anchor")};
    if (j.contains("exact_front_threshold")) m.surrogate.exact_threshold = get<std::size_t>(j, "exact_front_threshold");
    if (j.contains("alpha")) m.ascent.alpha = get<double>(j, "alpha");
    if (j.contains("fd_radius")) m.ascent.h = get<double>(j, "fd_radius");
    if (j.contains("iters")) m.ascent.k_max = m.hillclimb.k_max = get<std::size_t>(j, "iters");
    if (j.contains("delta_val")) m.ascent.delta_val = get<double>(j, "delta_val");
    if (j.contains("normalize")) m.ascent.normalize_per_point = get<bool>(j, "normalize");
    if (j.contains("gradient_mode")) {
        const auto g = get<std::string>(j, "gradient_mode");
        if (g == "fd") m.ascent.gradient_mode = GradientMode::FiniteDifference;
        else if (g == "analytic") m.ascent.gradient_mode = GradientMode::Analytic;
        else throw std::invalid_argument("gradient_mode must be 'fd' or 'analytic'");
    }
    if (j.contains("recovery")) m.recovery = get<bool>(j, "recovery");
    if (j.contains("recovery_window")) m.recovery_cfg.window = get<std::size_t>(j, "recovery_window");
    if (j.contains("recovery_min_growth")) m.recovery_cfg.min_growth = get<double>(j, "recovery_min_growth");
    if (j.contains("recovery_step")) m.recovery_cfg.perturb_step = get<double>(j, "recovery_step");
    if (j.contains("recovery_count")) m.recovery_cfg.perturb_count = get<std::size_t>(j, "recovery_count");
    if (j.contains("freeze_tail")) m.recovery_cfg.freeze_tail = get<std::size_t>(j, "freeze_tail");
    if (j.contains("episodes")) m.episodes = get<std::size_t>(j, "episodes");
    if (j.contains("optimizer")) m.optimizer = parse_optimizer(get<std::string>(j, "optimizer"));
    if (j.contains("hillclimb")) {
        const auto& h = j.at("hillclimb");
        if (!h.is_object()) throw std::invalid_argument("manifest key 'hillclimb' must be an object");
        for (auto it = h.begin(); it != h.end(); ++it) {
            const auto& k = it.key();
            if (k == "alpha0") m.hillclimb.alpha0 = get<double>(h, "alpha0");
            else if (k == "rho") m.hillclimb.rho = get<double>(h, "rho");
            else if (k == "alpha_min") m.hillclimb.alpha_min = get<double>(h, "alpha_min");
            else if (k == "retries") m.hillclimb.retries = get<std::size_t>(h, "retries");
            else throw std::invalid_argument("unknown hillclimb key '" + k + "'");
        }
    }
    if (j.contains("seed")) m.seed = get<std::uint64_t>(j, "seed");
    if (j.contains("sample_stride")) m.sample_stride = get<std::size_t>(j, "sample_stride");
    if (j.contains("archive_resolution")) m.archive_resolution = get<std::size_t>(j, "archive_resolution");
    if (j.contains("format")) m.format = parse_format(get<std::string>(j, "format"));
    if (j.contains("out")) m.output_path = get<std::string>(j, "out");
    return m;
}

std::string manifest_to_json(const RunManifest& m) {
    json j;
    j["version"] = kManifestVersion;
    j["name"] = m.name;
    if (!m.description.empty()) j["description"] = m.description;
    j["problem"] = m.problem ? std::string(to_string(*m.problem)) : "static";
    if (m.problem == ProblemName::Supersphere) j["gamma"] = m.gamma;
    if (m.box_lo) j["box"] = {*m.box_lo, *m.box_hi};
    j["start"] = std::string(to_string(m.start));
    if (m.mu) j["mu"] = *m.mu;
    if (m.H) j["H"] = *m.H;
    if (m.start == StartKind::DasDennis) j["dd_sigma"] = m.dd_sigma;
    if (m.start == StartKind::TriangleLine) j["line_level"] = m.line_level;
    if (m.start == StartKind::LayeredBox) j["sample_range"] = {m.sample_lo, m.sample_hi};
    if (m.start == StartKind::Explicit) {
        json rows = json::array();
        for (std::size_t i = 0; i < m.points.size(); ++i) {
            const auto r = m.points[i];
            rows.push_back(std::vector<double>(r.begin(), r.end()));
        }
        j["points"] = rows;
    }
    j["indicator"] = m.surrogate.base == BaseIndicator::Magnitude ? "mag" : "hv";
    j["epsilon"] = m.surrogate.epsilon;
    j["tau"] = m.surrogate.tau;
    j["sigma"] = m.surrogate.sigma;
    if (m.surrogate.anchor) j["anchor"] = m.surrogate.anchor->r;
    j["exact_front_threshold"] = m.surrogate.exact_threshold;
    j["optimizer"] = std::string(to_string(m.optimizer));
    j["alpha"] = m.ascent.alpha;
    j["fd_radius"] = m.ascent.h;
    j["iters"] = m.optimizer == Optimizer::Hillclimb ? m.hillclimb.k_max : m.ascent.k_max;
    j["delta_val"] = m.ascent.delta_val;
    j["normalize"] = m.ascent.normalize_per_point;
    j["gradient_mode"] = m.ascent.gradient_mode == GradientMode::Analytic ? "analytic" : "fd";
    j["recovery"] = m.recovery;
    j["recovery_window"] = m.recovery_cfg.window;
    j["recovery_min_growth"] = m.recovery_cfg.min_growth;
    j["recovery_step"] = m.recovery_cfg.perturb_step;
    j["recovery_count"] = m.recovery_cfg.perturb_count;
    j["freeze_tail"] = m.recovery_cfg.freeze_tail;
    j["episodes"] = m.episodes;
    j["hillclimb"] = {{"alpha0", m.hillclimb.alpha0},
                      {"rho", m.hillclimb.rho},
                      {"alpha_min", m.hillclimb.alpha_min},
                      {"retries", m.hillclimb.retries}};
    j["seed"] = m.seed;
    j["sample_stride"] = m.sample_stride;
    j["archive_resolution"] = m.archive_resolution;
    j["format"] = std::string(to_string(m.format));
    if (!m.output_path.empty()) j["out"] = m.output_path;
    return j.dump(2);
}

std::filesystem::path preset_directory() {
    if (const char* env = std::getenv("LAYERED_ASCENT_PRESET_DIR"); env && *env) return env;
    return LAYERED_PRESET_DIR;
}

std::filesystem::path resolve_preset(std::string_view name) {
    const std::string s(name);
    if (s.empty()) throw std::invalid_argument("empty preset name");
    if (s.find('/') != std::string::npos || s.ends_with(".json")) return s;
    return preset_directory() / (s + ".json");
}

RunManifest load_preset(std::string_view name) {
    const auto path = resolve_preset(name);
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot read preset '" + path.string() + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    auto m = parse_manifest(buf.str());
    if (m.name.empty()) m.name = path.stem().string();
    return m;
}

// ---------------------------------------------------------------------------

Materialized materialize(const RunManifest& m) {
    m.validate();
    std::optional<ProblemSpec> problem;
    FeasibleRegion region;
    if (m.problem) {
        switch (*m.problem) {
        case ProblemName::Triangle: problem = ProblemSpec::triangle(); break;
        case ProblemName::SummedQuadratic:
            problem = m.box_lo ? ProblemSpec::summed_quadratic(FeasibleRegion::cube(2, *m.box_lo, *m.box_hi))
                               : ProblemSpec::summed_quadratic();
            break;
        case ProblemName::Supersphere:
            problem = m.box_lo ? ProblemSpec::supersphere(m.gamma, FeasibleRegion::cube(3, *m.box_lo, *m.box_hi))
                               : ProblemSpec::supersphere(m.gamma);
            break;
        }
        region = problem->decision_region;
    } else {
        // Static sets are never moved; an unbounded-looking box keeps the
        // type total without clipping anything that matters.
        region = FeasibleRegion::cube(m.points.dim(), -1e300, 1e300);
    }

    PointSet start{region.dim};
    switch (m.start) {
    case StartKind::Explicit:
        if (m.points.dim() != region.dim) throw std::invalid_argument("explicit points do not match the region dimension");
        start = m.points;
        break;
    case StartKind::TriangleLine: start = triangle_line_start(m.population(), m.line_level); break;
    case StartKind::TriangleNested: start = triangle_nested_start(triangular_rows(m.population())); break;
    case StartKind::QuadraticPerturbed: start = quadratic_perturbed_start(); break;
    case StartKind::DasDennis: start = das_dennis(*m.H, m.dd_sigma, m.seed); break;
    case StartKind::LayeredBox:
        start = layered_box_start(m.population(), m.seed, region, m.sample_lo, m.sample_hi);
        break;
    }

    ObjectiveMap map = problem ? problem->objective_map() : ObjectiveMap::identity(region.dim);
    PointSet archive = problem ? reference_archive(*problem, m.archive_resolution) : PointSet(map.output_dim());
    return Materialized{problem, region, Surrogate{m.surrogate, std::move(map)}, std::move(start), std::move(archive)};
}

IndicatorSnapshot snapshot(const PointSet& Y, const SurrogateConfig& cfg, const PointSet& archive) {
    IndicatorSnapshot s;
    s.layered = layered_breakdown(Y, cfg);
    const Anchor anchor = cfg.anchor_for(Y.dim());
    for (const auto& layer : s.layered.partition.layers) {
        const PointSet L = Y.subset(layer);
        s.layer_hv.push_back(base_value(L, BaseIndicator::Hypervolume, anchor, cfg.exact_threshold));
        s.layer_mag.push_back(base_value(L, BaseIndicator::Magnitude, anchor, cfg.exact_threshold));
    }
    if (!s.layer_hv.empty()) {
        s.hv = s.layer_hv.front();
        s.mag = s.layer_mag.front();
    }
    if (!archive.empty()) s.igd = igd(Y, archive);
    return s;
}

RunOutcome execute(const RunManifest& m) {
    RunOutcome out{m, materialize(m), {}, {}, {}, {}};
    const auto& setup = out.setup;
    RecoveryConfig rec = m.recovery_cfg;
    rec.seed = m.seed;

    switch (m.optimizer) {
    case Optimizer::None: {
        TraceRecord r;
        r.points = setup.start;
        const PointSet Y = setup.surrogate.objectives(setup.start);
        const auto b = layered_breakdown(Y, setup.surrogate.config);
        r.value = b.value;
        r.layer_sizes = b.partition.sizes();
        if (!setup.surrogate.map.is_identity()) r.objective_points = Y;
        r.kind = StepKind::Initial;
        out.result.trace.push_back(std::move(r));
        out.result.final_state = setup.start;
        out.result.final_objectives = Y;
        break;
    }
    case Optimizer::Gradient:
        out.result = m.recovery ? run_with_recovery(setup.start, setup.region, setup.surrogate, m.ascent, rec, m.episodes)
                                : run_ascent(setup.start, setup.region, setup.surrogate, m.ascent);
        break;
    case Optimizer::Hillclimb: {
        HillclimbConfig hc = m.hillclimb;
        hc.seed = m.seed;
        if (m.recovery) hc.recovery = rec;
        auto h = hillclimb(setup.start, setup.region, setup.surrogate, hc);
        out.result = std::move(h.run);
        out.step_sizes = std::move(h.step_sizes);
        break;
    }
    }

    const auto& first = out.result.trace.front();
    const PointSet Y0 = first.objective_points.empty() ? first.points : first.objective_points;
    out.initial = snapshot(Y0, setup.surrogate.config, setup.archive);
    out.final = snapshot(out.result.final_objectives, setup.surrogate.config, setup.archive);
    return out;
}

}  // namespace layered
