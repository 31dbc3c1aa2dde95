#pragma once

#include "layered/manifest.hpp"

#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace layered {

/// Columns: iter, value, layer_sizes ("8+5+2"), point_<i>_c<k> for every
/// state coordinate, objective_<i>_c<k> when `mapped`, kind. Numbers are
/// printed with 17 significant digits so the file round-trips exactly.
void write_trace_csv(std::ostream& os, std::span<const TraceRecord> trace, bool mapped);
/// Array of {"iter","value","layer_sizes","points","objectives"?,"kind"}.
void write_trace_json(std::ostream& os, std::span<const TraceRecord> trace, bool mapped);

std::vector<TraceRecord> parse_trace_csv(const std::string& text);
std::vector<TraceRecord> parse_trace_json(const std::string& text);
StepKind parse_step_kind(std::string_view text);

/// Run summary: manifest, stop data, initial and final indicator snapshots,
/// final points.
std::string summary_json(const RunOutcome& outcome);

/// Final objective vectors with their layer index, one gnuplot block per layer.
void write_plot_final(std::ostream& os, const RunOutcome& outcome);
/// One gnuplot index block per point: its objective path over `trace`.
void write_plot_paths(std::ostream& os, std::span<const TraceRecord> trace);

/// Writes the trace to `trace_path` and, next to it, <stem>.summary.json,
/// <stem>.plot_final.dat and <stem>.plot_paths.dat. Returns the files
/// written. Throws std::runtime_error when a file cannot be written.
std::vector<std::filesystem::path> write_run_outputs(const RunOutcome& outcome,
                                                     const std::filesystem::path& trace_path);

/// Side-by-side final metrics of two runs.
std::string compare_table(const RunOutcome& a, const RunOutcome& b);

/// Round-trip text for a double (17 significant digits).
std::string format_double(double v);

}  // namespace layered
