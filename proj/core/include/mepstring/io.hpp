#pragma once

#include <filesystem>
#include <optional>
#include <string>

#include "mepstring/experiments.hpp"
#include "mepstring/solver.hpp"

namespace mepstring {

/// Shortest text that round-trips the value exactly, capped at 17
/// significant digits.
std::string format_double(double v);

// ---- strings and polylines ----
// CSV: one vertex per row, columns x0..x{d-1}.
// JSON: {"dim", "n_images", "images", "endpoints"}.

void write_string_csv(const StringOfImages& x, const std::filesystem::path&);
StringOfImages read_string_csv(const std::filesystem::path&);
void write_polyline_csv(const Polyline& p, const std::filesystem::path&);
Polyline read_polyline_csv(const std::filesystem::path&);

std::string string_to_json(const StringOfImages& x);
StringOfImages string_from_json(const std::string& text);

// ---- run reports ----

enum class ReportFormat { json, csv };

/// JSON carries the full report under a versioned schema; CSV carries the
/// iteration trace with the fixed header
/// step,sim_time,spacing,total_length,n_images,reparametrized,images_added,residual,d_to_reference
void emit_report(const RunReport& report, ReportFormat format,
                 const std::filesystem::path& path);

std::string report_to_json(const RunReport& report);
RunReport report_from_json(const std::string& text);

void write_trace_csv(const std::vector<IterationRecord>& iterations,
                     const std::filesystem::path& path);
std::vector<IterationRecord> read_trace_csv(const std::filesystem::path& path);

extern const char* const kTraceCsvHeader;

// ---- study tables and plot data ----

void write_study_csv(const StudyTable& table, const std::filesystem::path&);

/// Long-format CSV (series,x,y) for external plotting.
void write_plotdata(const RunReport& report, const std::filesystem::path&);
void write_plotdata(const StudyTable& table, const std::filesystem::path&);
void write_plotdata(const StabilityTrace& trace, const std::filesystem::path&);

// ---- run configuration ----

struct PotentialConfig {
  std::string name = "double-well";
  double a = 1.0;
  double c = 2.0;
  int dim = 2;
  std::optional<Box> box;
};

struct InitConfig {
  InitKind kind = InitKind::linear;
  int n_segments = 32;  // N; the string has N+1 images
  double amplitude = 0.1;
  unsigned seed = 1;
  std::optional<Vec> from;  // endpoint minima; defaults depend on potential
  std::optional<Vec> to;
};

struct OutputConfig {
  std::string report = "report.json";
  std::string trace;
  std::string plotdata;
};

struct RunConfigFile {
  PotentialConfig potential;
  SolverConfig solver;
  FlowOracleConfig oracle;
  InitConfig init;
  OutputConfig output;
};

/// Parses and validates a solve config. Throws ParseError on malformed JSON
/// and ValidationError carrying every violation (unknown keys, missing
/// required values, numeric range violations).
RunConfigFile parse_config(const std::string& text);

struct ReferenceConfig {
  std::string kind = "analytic";  // analytic | fine-run | file
  std::string path;
  int n_segments = 256;
  double dt_divisor = 4.0;
};

struct StudyConfigFile {
  PotentialConfig potential;
  SolverConfig solver;
  FlowOracleConfig oracle;
  InitConfig init;
  std::vector<double> grid_h;
  std::vector<double> grid_dt;
  std::vector<Scheme> schemes;
  ReferenceConfig reference;
  double sample_step = 1e-3;
};

StudyConfigFile parse_study_config(const std::string& text);

/// The built-in defaults, one "key = value" line each.
std::string print_defaults();

}  // namespace mepstring
