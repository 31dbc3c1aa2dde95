#include "layered/report.hpp"

#include <json.hpp>

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace layered {

using nlohmann::json;
using nlohmann::ordered_json;

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

StepKind parse_step_kind(std::string_view t) {
    for (auto k : {StepKind::Initial, StepKind::Gradient, StepKind::Perturbation, StepKind::Accepted,
                   StepKind::Rejected})
        if (t == to_string(k)) return k;
    throw std::invalid_argument("unknown step kind '" + std::string(t) + "'");
}

namespace {

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (c == sep) {
            out.push_back(cur);
            cur.clear();
        } else if (c != '\r') {
            cur += c;
        }
    }
    out.push_back(cur);
    return out;
}

std::vector<std::size_t> parse_sizes(const std::string& s) {
    std::vector<std::size_t> out;
    if (s.empty()) return out;
    for (const auto& part : split(s, '+')) out.push_back(std::stoul(part));
    return out;
}

void require_shape(std::span<const TraceRecord> trace) {
    if (trace.empty()) throw std::invalid_argument("empty trace");
    for (const auto& r : trace)
        if (r.points.size() != trace.front().points.size() || r.points.dim() != trace.front().points.dim())
            throw std::invalid_argument("trace records differ in shape");
}

ordered_json to_json(const PointSet& p) {
    ordered_json rows = ordered_json::array();
    for (std::size_t i = 0; i < p.size(); ++i) rows.push_back(std::vector<double>(p[i].begin(), p[i].end()));
    return rows;
}

PointSet points_from_json(const json& rows) {
    if (!rows.is_array() || rows.empty()) throw std::invalid_argument("point list must be a nonempty array");
    PointSet p(rows.front().size());
    for (const auto& r : rows) {
        const auto v = r.get<std::vector<double>>();
        if (v.size() != p.dim()) throw std::invalid_argument("point list has mixed dimensions");
        p.push_back(v);
    }
    return p;
}

ordered_json snapshot_json(const IndicatorSnapshot& s) {
    ordered_json j;
    j["value"] = s.layered.value;
    j["indicator"] = s.layered.indicator;
    j["repulsion"] = s.layered.repulsion;
    j["layer_profile"] = s.layered.partition.profile();
    j["layer_values"] = s.layered.layer_values;
    j["layer_hv"] = s.layer_hv;
    j["layer_mag"] = s.layer_mag;
    j["hv"] = s.hv;
    j["mag"] = s.mag;
    if (s.igd) j["igd"] = *s.igd;
    else j["igd"] = nullptr;
    return j;
}

const PointSet& objective_view(const TraceRecord& r) {
    return r.objective_points.empty() ? r.points : r.objective_points;
}

}  // namespace

void write_trace_csv(std::ostream& os, std::span<const TraceRecord> trace, bool mapped) {
    require_shape(trace);
    const auto& first = trace.front();
    os << "iter,value,layer_sizes";
    for (std::size_t i = 0; i < first.points.size(); ++i)
        for (std::size_t k = 0; k < first.points.dim(); ++k) os << ",point_" << i << "_c" << k;
    if (mapped)
        for (std::size_t i = 0; i < first.objective_points.size(); ++i)
            for (std::size_t k = 0; k < first.objective_points.dim(); ++k) os << ",objective_" << i << "_c" << k;
    os << ",kind\n";
    for (const auto& r : trace) {
        os << r.iteration << ',' << format_double(r.value) << ',' << format_profile(r.layer_sizes);
        for (double c : r.points.flat()) os << ',' << format_double(c);
        if (mapped)
            for (double c : r.objective_points.flat()) os << ',' << format_double(c);
        os << ',' << to_string(r.kind) << '\n';
    }
}

void write_trace_json(std::ostream& os, std::span<const TraceRecord> trace, bool mapped) {
    // Written by hand so every number carries 17 significant digits, like the CSV.
    require_shape(trace);
    auto rows = [&](const PointSet& p) {
        os << '[';
        for (std::size_t i = 0; i < p.size(); ++i) {
            os << (i ? ",[" : "[");
            for (std::size_t k = 0; k < p.dim(); ++k) os << (k ? "," : "") << format_double(p(i, k));
            os << ']';
        }
        os << ']';
    };
    os << "[\n";
    for (std::size_t r = 0; r < trace.size(); ++r) {
        const auto& t = trace[r];
        os << " {\"iter\": " << t.iteration << ", \"value\": " << format_double(t.value) << ", \"layer_sizes\": [";
        for (std::size_t l = 0; l < t.layer_sizes.size(); ++l) os << (l ? "," : "") << t.layer_sizes[l];
        os << "], \"points\": ";
        rows(t.points);
        if (mapped) {
            os << ", \"objectives\": ";
            rows(t.objective_points);
        }
        os << ", \"kind\": \"" << to_string(t.kind) << "\"}" << (r + 1 < trace.size() ? ",\n" : "\n");
    }
    os << "]\n";
}

std::vector<TraceRecord> parse_trace_csv(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line)) throw std::invalid_argument("empty trace file");
    const auto header = split(line, ',');
    if (header.size() < 4 || header[0] != "iter" || header[1] != "value" || header[2] != "layer_sizes" ||
        header.back() != "kind")
        throw std::invalid_argument("unexpected trace header");
    std::size_t n_points = 0, dim = 0, n_obj = 0, obj_dim = 0, point_cols = 0, obj_cols = 0;
    for (std::size_t c = 3; c + 1 < header.size(); ++c) {
        unsigned i = 0, k = 0;
        if (std::sscanf(header[c].c_str(), "point_%u_c%u", &i, &k) == 2) {
            n_points = std::max<std::size_t>(n_points, i + 1);
            dim = std::max<std::size_t>(dim, k + 1);
            ++point_cols;
        } else if (std::sscanf(header[c].c_str(), "objective_%u_c%u", &i, &k) == 2) {
            n_obj = std::max<std::size_t>(n_obj, i + 1);
            obj_dim = std::max<std::size_t>(obj_dim, k + 1);
            ++obj_cols;
        } else {
            throw std::invalid_argument("unexpected trace column '" + header[c] + "'");
        }
    }
    if (point_cols != n_points * dim || obj_cols != n_obj * obj_dim)
        throw std::invalid_argument("trace header is not rectangular");

    std::vector<TraceRecord> out;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto cells = split(line, ',');
        if (cells.size() != header.size()) throw std::invalid_argument("trace row has the wrong column count");
        TraceRecord r;
        r.iteration = std::stoul(cells[0]);
        r.value = std::stod(cells[1]);
        r.layer_sizes = parse_sizes(cells[2]);
        std::vector<double> pc, oc;
        for (std::size_t c = 0; c < point_cols; ++c) pc.push_back(std::stod(cells[3 + c]));
        for (std::size_t c = 0; c < obj_cols; ++c) oc.push_back(std::stod(cells[3 + point_cols + c]));
        r.points = PointSet(dim, std::move(pc));
        if (obj_cols) r.objective_points = PointSet(obj_dim, std::move(oc));
        r.kind = parse_step_kind(cells.back());
        out.push_back(std::move(r));
    }
    return out;
}

std::vector<TraceRecord> parse_trace_json(const std::string& text) {
    const json arr = json::parse(text);
    if (!arr.is_array()) throw std::invalid_argument("trace JSON must be an array");
    std::vector<TraceRecord> out;
    for (const auto& j : arr) {
        TraceRecord r;
        r.iteration = j.at("iter").get<std::size_t>();
        r.value = j.at("value").get<double>();
        r.layer_sizes = j.at("layer_sizes").get<std::vector<std::size_t>>();
        r.points = points_from_json(j.at("points"));
        if (j.contains("objectives")) r.objective_points = points_from_json(j.at("objectives"));
        r.kind = parse_step_kind(j.at("kind").get<std::string>());
        out.push_back(std::move(r));
    }
    return out;
}

std::string summary_json(const RunOutcome& o) {
    ordered_json j;
    j["manifest"] = ordered_json::parse(manifest_to_json(o.manifest));
    j["iterations"] = o.result.iterations;
    j["stop"] = std::string(to_string(o.result.stop));
    j["accepted"] = o.result.accepted;
    j["perturbations"] = o.result.perturbations;
    if (!o.step_sizes.empty()) j["final_step_size"] = o.step_sizes.back();
    ordered_json profiles = ordered_json::array();
    for (const auto& r : sample_trace(o.result.trace, o.manifest.sample_stride))
        profiles.push_back({{"iter", r.iteration}, {"layer_sizes", format_profile(r.layer_sizes)}});
    j["layer_profiles"] = profiles;
    j["initial"] = snapshot_json(o.initial);
    j["final"] = snapshot_json(o.final);
    j["final_points"] = to_json(o.result.final_state);
    j["final_objectives"] = to_json(o.result.final_objectives);
    return j.dump(2) + "\n";
}

void write_plot_final(std::ostream& os, const RunOutcome& o) {
    const auto& Y = o.result.final_objectives;
    const auto& part = o.final.layered.partition;
    os << "# final objective vectors; columns: objectives..., layer, label\n";
    for (std::size_t l = 0; l < part.layers.size(); ++l) {
        if (l) os << "\n\n";
        for (std::size_t i : part.layers[l]) {
            for (double c : Y[i]) os << format_double(c) << ' ';
            os << l << ' ' << i << '\n';
        }
    }
}

void write_plot_paths(std::ostream& os, std::span<const TraceRecord> trace) {
    require_shape(trace);
    os << "# objective path per point; one index block per label; columns: iter, objectives...\n";
    const std::size_t n = trace.front().points.size();
    for (std::size_t i = 0; i < n; ++i) {
        if (i) os << "\n\n";
        for (const auto& r : trace) {
            os << r.iteration;
            for (double c : objective_view(r)[i]) os << ' ' << format_double(c);
            os << '\n';
        }
    }
}

std::vector<std::filesystem::path> write_run_outputs(const RunOutcome& o, const std::filesystem::path& trace_path) {
    const auto sampled = sample_trace(o.result.trace, o.manifest.sample_stride);
    const bool mapped = !o.setup.surrogate.map.is_identity();
    std::vector<std::filesystem::path> written;

    auto open = [&](const std::filesystem::path& p) {
        std::ofstream f(p, std::ios::binary);
        if (!f) throw std::runtime_error("cannot write '" + p.string() + "'");
        written.push_back(p);
        return f;
    };
    auto close = [](std::ofstream& f, const std::filesystem::path& p) {
        f.close();
        if (!f) throw std::runtime_error("error while writing '" + p.string() + "'");
    };

    if (trace_path.has_parent_path()) {
        std::error_code ec;
        std::filesystem::create_directories(trace_path.parent_path(), ec);
    }
    {
        auto f = open(trace_path);
        if (o.manifest.format == TraceFormat::Csv) write_trace_csv(f, sampled, mapped);
        else write_trace_json(f, sampled, mapped);
        close(f, trace_path);
    }
    const auto base = trace_path.parent_path() / trace_path.stem();
    const auto with = [&](const char* suffix) { return std::filesystem::path(base.string() + suffix); };
    {
        const auto p = with(".summary.json");
        auto f = open(p);
        f << summary_json(o);
        close(f, p);
    }
    {
        const auto p = with(".plot_final.dat");
        auto f = open(p);
        write_plot_final(f, o);
        close(f, p);
    }
    {
        const auto p = with(".plot_paths.dat");
        auto f = open(p);
        write_plot_paths(f, sampled);
        close(f, p);
    }
    return written;
}

std::string compare_table(const RunOutcome& a, const RunOutcome& b) {
    auto num = [](double v) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.6f", v);
        return std::string(buf);
    };
    const std::vector<std::string> head{"run", "indicator", "optimizer", "iters", "acc", "Mag0",
                                        "MagF", "HV0", "HVF", "IGDF", "layersF"};
    std::vector<std::vector<std::string>> rows{head};
    for (const auto* o : {&a, &b}) {
        rows.push_back({o == &a ? "A" : "B", std::string(to_string(o->manifest.surrogate.base)),
                        std::string(to_string(o->manifest.optimizer)), std::to_string(o->result.iterations),
                        std::to_string(o->result.accepted), num(o->initial.mag), num(o->final.mag),
                        num(o->initial.hv), num(o->final.hv), o->final.igd ? num(*o->final.igd) : "-",
                        o->final.layered.partition.profile()});
    }
    std::vector<std::size_t> width(head.size(), 0);
    for (const auto& r : rows)
        for (std::size_t c = 0; c < r.size(); ++c) width[c] = std::max(width[c], r[c].size());
    std::ostringstream os;
    for (const auto& r : rows) {
        for (std::size_t c = 0; c < r.size(); ++c) {
            if (c) os << "  ";
            os << std::setw(int(width[c])) << (c ? std::right : std::left) << r[c];
        }
        os << '\n';
    }
    return os.str();
}

}  // namespace layered
