// layered_ascent: run and compare layered set-indicator optimizations.
//
// Exit status: 0 success, 2 invalid arguments or flag combinations,
// 3 runtime failure (including unwritable output paths).

#include "layered/manifest.hpp"
#include "layered/report.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <stdexcept>
#include <string>

using namespace layered;

namespace {

struct UsageError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct Flags {
    std::optional<std::string> preset, problem, indicator, normalize, optimizer, format, out;
    std::optional<double> gamma, alpha, fd_radius, epsilon, tau, sigma, rec_min_growth, rec_step, rho, alpha_min;
    std::optional<std::size_t> H, mu, iters, episodes, exact_threshold, rec_window, freeze_tail, stride, retries;
    std::optional<std::uint64_t> seed;
    bool recovery = false, no_recovery = false, dry_run = false;
};

void add_shared(CLI::App* app, Flags& f, bool with_preset) {
    if (with_preset) app->add_option("--preset", f.preset, "Preset name or path to a manifest file");
    app->add_option("--problem", f.problem, "triangle | quadratic | supersphere");
    app->add_option("--gamma", f.gamma, "Supersphere exponent");
    app->add_option("--H", f.H, "Das-Dennis lattice budget");
    app->add_option("--mu", f.mu, "Population size");
    app->add_option("--seed", f.seed, "Random seed (fallback: $LAYERED_ASCENT_SEED)");
    app->add_option("--iters", f.iters, "Iteration budget");
    app->add_option("--episodes", f.episodes, "Episode budget of a recovery run");
    app->add_option("--alpha", f.alpha, "Step size (initial step for the hillclimber)");
    app->add_option("--fd-radius", f.fd_radius, "Central-difference radius h");
    app->add_option("--epsilon", f.epsilon, "Layer weight base");
    app->add_option("--tau", f.tau, "Repulsion weight");
    app->add_option("--sigma", f.sigma, "Repulsion kernel width");
    app->add_option("--normalize", f.normalize, "Per-point gradient normalization")->check(CLI::IsMember({"on", "off"}));
    app->add_option("--exact-front-threshold", f.exact_threshold, "Largest 3D front evaluated by inclusion-exclusion");
    app->add_flag("--recovery", f.recovery, "Enable stagnation recovery");
    app->add_flag("--no-recovery", f.no_recovery, "Disable stagnation recovery");
    app->add_option("--recovery-window", f.rec_window, "Stagnation window in episodes");
    app->add_option("--recovery-min-growth", f.rec_min_growth, "Minimum growth of J over the window");
    app->add_option("--recovery-step", f.rec_step, "Perturbation length");
    app->add_option("--freeze-tail", f.freeze_tail, "Final episodes without perturbations");
    app->add_option("--rho", f.rho, "Hillclimber step shrink factor");
    app->add_option("--alpha-min", f.alpha_min, "Hillclimber step floor");
    app->add_option("--retries", f.retries, "Hillclimber retries per iteration");
    app->add_option("--sample-stride", f.stride, "Trace sampling stride");
    app->add_option("--format", f.format, "Trace format")->check(CLI::IsMember({"csv", "json"}));
    app->add_flag("--dry-run", f.dry_run, "Print the resolved manifest and exit");
}

std::string default_preset(ProblemName p) {
    switch (p) {
    case ProblemName::Triangle: return "triangle-line";
    case ProblemName::SummedQuadratic: return "quadratic-perturbed";
    case ProblemName::Supersphere: return "supersphere";
    }
    return "triangle-line";
}

std::optional<std::uint64_t> env_seed() {
    const char* s = std::getenv("LAYERED_ASCENT_SEED");
    if (!s || !*s) return std::nullopt;
    try {
        std::size_t used = 0;
        const auto v = std::stoull(s, &used);
        if (used != std::string(s).size() || std::string(s).front() == '-') throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw UsageError(std::string("LAYERED_ASCENT_SEED is not an unsigned integer: '") + s + "'");
    }
}

RunManifest base_manifest(const std::optional<std::string>& preset, const std::optional<std::string>& problem) {
    std::optional<ProblemName> wanted;
    if (problem) {
        if (*problem == "static") throw UsageError("--problem static is only available through a preset");
        wanted = parse_problem(*problem);
    }
    const std::string name = preset ? *preset : default_preset(wanted.value_or(ProblemName::Triangle));
    RunManifest m = load_preset(name);
    if (wanted && m.problem != wanted)
        throw UsageError("--problem " + *problem + " conflicts with preset '" + m.name + "' (problem " +
                         (m.problem ? std::string(to_string(*m.problem)) : std::string("static")) + ")");
    return m;
}

void apply(RunManifest& m, const Flags& f) {
    const bool supersphere = m.problem == ProblemName::Supersphere;
    if (f.gamma) {
        if (!supersphere) throw UsageError("--gamma applies to the supersphere problem only");
        m.gamma = *f.gamma;
    }
    if (f.H) {
        if (m.start != StartKind::DasDennis && m.start != StartKind::LayeredBox)
            throw UsageError("--H applies to Das-Dennis and layered-box starts only");
        m.H = *f.H;
        if (!f.mu) m.mu.reset();
    }
    if (f.mu) {
        if (m.start == StartKind::Explicit || m.start == StartKind::QuadraticPerturbed)
            throw UsageError("--mu cannot resize a start set with fixed points");
        m.mu = *f.mu;
    }
    if (f.optimizer) {
        if (!m.problem && *f.optimizer != "none") throw UsageError("a static preset cannot be optimized");
        m.optimizer = parse_optimizer(*f.optimizer);
    }
    if (f.recovery && f.no_recovery) throw UsageError("--recovery and --no-recovery are exclusive");
    if (f.recovery) m.recovery = true;
    if (f.no_recovery) m.recovery = false;

    const bool hill = m.optimizer == Optimizer::Hillclimb;
    const bool grad = m.optimizer == Optimizer::Gradient;
    if (f.episodes) {
        if (!m.recovery || !grad) throw UsageError("--episodes requires --recovery with the gradient optimizer");
        m.episodes = *f.episodes;
    }
    if ((f.rec_window || f.rec_min_growth || f.rec_step || f.freeze_tail) && !m.recovery)
        throw UsageError("recovery parameters require --recovery");
    if (f.rec_window) m.recovery_cfg.window = *f.rec_window;
    if (f.rec_min_growth) m.recovery_cfg.min_growth = *f.rec_min_growth;
    if (f.rec_step) m.recovery_cfg.perturb_step = *f.rec_step;
    if (f.freeze_tail) m.recovery_cfg.freeze_tail = *f.freeze_tail;

    if ((f.rho || f.alpha_min || f.retries) && !hill) throw UsageError("--rho, --alpha-min and --retries need --optimizer hillclimb");
    if (f.rho) m.hillclimb.rho = *f.rho;
    if (f.alpha_min) m.hillclimb.alpha_min = *f.alpha_min;
    if (f.retries) m.hillclimb.retries = *f.retries;

    if ((f.fd_radius || f.normalize) && !grad) throw UsageError("--fd-radius and --normalize need the gradient optimizer");
    if (f.fd_radius) m.ascent.h = *f.fd_radius;
    if (f.normalize) m.ascent.normalize_per_point = *f.normalize == "on";
    if (f.alpha) {
        if (m.optimizer == Optimizer::None) throw UsageError("--alpha needs an optimizer");
        (hill ? m.hillclimb.alpha0 : m.ascent.alpha) = *f.alpha;
    }
    if (f.iters) {
        if (m.optimizer == Optimizer::None) throw UsageError("--iters needs an optimizer");
        if (m.recovery && grad) throw UsageError("recovery runs are sized by --episodes, not --iters");
        m.ascent.k_max = m.hillclimb.k_max = *f.iters;
    }

    if (f.indicator) m.surrogate.base = parse_base_indicator(*f.indicator);
    if (f.epsilon) m.surrogate.epsilon = *f.epsilon;
    if (f.tau) m.surrogate.tau = *f.tau;
    if (f.sigma) m.surrogate.sigma = *f.sigma;
    if (f.exact_threshold) m.surrogate.exact_threshold = *f.exact_threshold;

    if (f.seed) m.seed = *f.seed;
    else if (const auto s = env_seed()) m.seed = *s;
    if (f.stride) m.sample_stride = *f.stride;
    if (f.out) m.output_path = *f.out;
    if (f.format) m.format = parse_format(*f.format);
    else if (f.out && std::filesystem::path(*f.out).extension() == ".json") m.format = TraceFormat::Json;
    m.validate();
}

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6f", v);
    return buf;
}

void print_summary(std::ostream& os, const RunOutcome& o) {
    const auto& s = o.final;
    os << o.manifest.name << ": " << to_string(o.manifest.optimizer) << " on "
       << (o.manifest.problem ? to_string(*o.manifest.problem) : "static") << " ("
       << to_string(o.manifest.surrogate.base) << ")\n";
    os << "  iterations " << o.result.iterations << ", stop " << to_string(o.result.stop) << ", accepted "
       << o.result.accepted << ", perturbations " << o.result.perturbations << '\n';
    os << "  layers " << o.initial.layered.partition.profile() << " -> " << s.layered.partition.profile() << '\n';
    os << "  J " << fmt(o.initial.layered.value) << " -> " << fmt(s.layered.value) << '\n';
    os << "  first-layer HV " << fmt(o.initial.hv) << " -> " << fmt(s.hv) << '\n';
    os << "  first-layer Mag " << fmt(o.initial.mag) << " -> " << fmt(s.mag) << '\n';
    if (s.igd) os << "  IGD " << fmt(*o.initial.igd) << " -> " << fmt(*s.igd) << '\n';
    os << "  layer HV";
    for (double v : s.layer_hv) os << ' ' << format_double(v);
    os << "\n  layer Mag";
    for (double v : s.layer_mag) os << ' ' << format_double(v);
    os << '\n';
}

int cmd_run(Flags& f) {
    RunManifest m = base_manifest(f.preset, f.problem);
    apply(m, f);
    if (f.dry_run) {
        std::cout << manifest_to_json(m) << '\n';
        return 0;
    }
    const RunOutcome o = execute(m);
    if (m.output_path.empty()) {
        const auto sampled = sample_trace(o.result.trace, m.sample_stride);
        const bool mapped = !o.setup.surrogate.map.is_identity();
        if (m.format == TraceFormat::Csv) write_trace_csv(std::cout, sampled, mapped);
        else write_trace_json(std::cout, sampled, mapped);
        print_summary(std::cerr, o);
        return 0;
    }
    const auto files = write_run_outputs(o, m.output_path);
    print_summary(std::cout, o);
    for (const auto& p : files) std::cout << "  wrote " << p.string() << '\n';
    return 0;
}

struct Side {
    std::optional<std::string> indicator, optimizer;
};

int cmd_compare(Flags& f, const std::vector<std::string>& presets, const Side& a_side, const Side& b_side) {
    if (presets.size() > 2) throw UsageError("compare takes at most two presets");
    std::optional<std::string> pa = presets.size() > 0 ? std::optional(presets[0]) : f.preset;
    std::optional<std::string> pb = presets.size() > 1 ? std::optional(presets[1]) : pa;
    const auto out_dir = f.out;
    f.out.reset();

    auto side = [&](const std::optional<std::string>& p, const Side& s) {
        RunManifest m = base_manifest(p, f.problem);
        Flags g = f;
        if (s.indicator) g.indicator = s.indicator;
        if (s.optimizer) g.optimizer = s.optimizer;
        apply(m, g);
        return m;
    };
    RunManifest ma = side(pa, a_side), mb = side(pb, b_side);
    if (ma.problem != mb.problem) throw UsageError("compared runs must share a problem");
    if (ma.problem == ProblemName::Supersphere && ma.gamma != mb.gamma)
        throw UsageError("compared runs must share the supersphere exponent");
    if (ma.seed != mb.seed) throw UsageError("compared runs must share a seed (use --seed)");
    if (f.dry_run) {
        std::cout << manifest_to_json(ma) << '\n' << manifest_to_json(mb) << '\n';
        return 0;
    }
    const RunOutcome a = execute(ma), b = execute(mb);
    std::cout << compare_table(a, b);
    if (out_dir) {
        for (const auto& [o, tag] : {std::pair{&a, "a"}, std::pair{&b, "b"}}) {
            const auto files = write_run_outputs(*o, std::filesystem::path(*out_dir) / (std::string(tag) + ".csv"));
            for (const auto& p : files) std::cout << "wrote " << p.string() << '\n';
        }
    }
    return 0;
}

int cmd_presets() {
    const auto dir = preset_directory();
    std::vector<std::string> names;
    std::error_code ec;
    for (const auto& e : std::filesystem::directory_iterator(dir, ec))
        if (e.path().extension() == ".json") names.push_back(e.path().stem().string());
    if (ec) throw std::runtime_error("cannot list presets in '" + dir.string() + "'");
    std::sort(names.begin(), names.end());
    for (const auto& n : names) std::cout << n << '\n';
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Layered set-indicator ascent for Pareto-front approximation"};
    app.require_subcommand(1);

    Flags run_flags, cmp_flags;
    auto* run = app.add_subcommand("run", "Run one manifest and export its trace");
    add_shared(run, run_flags, true);
    run->add_option("--indicator", run_flags.indicator, "Base indicator")->check(CLI::IsMember({"mag", "hv"}));
    run->add_option("--optimizer", run_flags.optimizer, "Optimizer")
        ->check(CLI::IsMember({"gradient", "hillclimb", "none"}));
    run->add_option("--out", run_flags.out, "Trace file; summary and plot data are written next to it");

    auto* cmp = app.add_subcommand("compare", "Run two manifests and print a cross-evaluation table");
    std::vector<std::string> cmp_presets;
    Side a_side, b_side;
    cmp->add_option("presets", cmp_presets, "Preset A and optionally preset B (default: same as A)");
    add_shared(cmp, cmp_flags, true);
    cmp->add_option("--indicator", cmp_flags.indicator, "Base indicator of both runs")
        ->check(CLI::IsMember({"mag", "hv"}));
    cmp->add_option("--optimizer", cmp_flags.optimizer, "Optimizer of both runs")
        ->check(CLI::IsMember({"gradient", "hillclimb", "none"}));
    cmp->add_option("--a-indicator", a_side.indicator, "Base indicator of run A")->check(CLI::IsMember({"mag", "hv"}));
    cmp->add_option("--b-indicator", b_side.indicator, "Base indicator of run B")->check(CLI::IsMember({"mag", "hv"}));
    cmp->add_option("--a-optimizer", a_side.optimizer, "Optimizer of run A")
        ->check(CLI::IsMember({"gradient", "hillclimb"}));
    cmp->add_option("--b-optimizer", b_side.optimizer, "Optimizer of run B")
        ->check(CLI::IsMember({"gradient", "hillclimb"}));
    cmp->add_option("--out", cmp_flags.out, "Directory for a.csv and b.csv with their summaries");

    auto* lst = app.add_subcommand("presets", "List the available presets");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (run->parsed()) return cmd_run(run_flags);
        if (cmp->parsed()) return cmd_compare(cmp_flags, cmp_presets, a_side, b_side);
        if (lst->parsed()) return cmd_presets();
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    }
    return 2;
}
