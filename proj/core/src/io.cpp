#include "mepstring/io.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace mepstring {

using nlohmann::json;

std::string format_double(double v) {
  char buf[64];
  for (int precision = 15; precision <= 17; ++precision) {
    std::snprintf(buf, sizeof(buf), "%.*g", precision, v);
    if (std::strtod(buf, nullptr) == v) return buf;
  }
  return buf;
}

namespace {

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open for writing: " + path.string());
  return out;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open for reading: " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_vec_json(std::ostream& out, const Vec& v) {
  out << '[';
  for (int i = 0; i < v.size(); ++i) {
    if (i > 0) out << ',';
    out << format_double(v[i]);
  }
  out << ']';
}

void write_points_json(std::ostream& out, const std::vector<Vec>& pts) {
  out << '[';
  for (size_t i = 0; i < pts.size(); ++i) {
    if (i > 0) out << ',';
    write_vec_json(out, pts[i]);
  }
  out << ']';
}

Vec vec_from_json(const json& j) {
  Vec v(static_cast<Eigen::Index>(j.size()));
  for (size_t i = 0; i < j.size(); ++i) {
    v[static_cast<Eigen::Index>(i)] = j[i].get<double>();
  }
  return v;
}

std::vector<Vec> points_from_json(const json& j) {
  std::vector<Vec> pts;
  pts.reserve(j.size());
  for (const auto& row : j) pts.push_back(vec_from_json(row));
  return pts;
}

void write_string_record(std::ostream& out, const StringOfImages& x) {
  out << "{\"dim\":" << x.dim() << ",\"n_images\":" << x.n_images()
      << ",\"images\":";
  write_points_json(out, x.images());
  out << ",\"endpoints\":";
  write_points_json(out, {x.endpoint_lo(), x.endpoint_hi()});
  out << '}';
}

StringOfImages string_record_from_json(const json& j) {
  std::vector<Vec> pts = points_from_json(j.at("images"));
  if (j.at("n_images").get<int>() != static_cast<int>(pts.size())) {
    throw ParseError("string record: n_images does not match images");
  }
  StringOfImages x(std::move(pts));
  if (j.at("dim").get<int>() != x.dim()) {
    throw ParseError("string record: dim does not match images");
  }
  return x;
}

void write_csv_points(const std::vector<Vec>& pts,
                      const std::filesystem::path& path) {
  auto out = open_out(path);
  const int d = static_cast<int>(pts.front().size());
  for (int j = 0; j < d; ++j) {
    if (j > 0) out << ',';
    out << 'x' << j;
  }
  out << '\n';
  for (const auto& p : pts) {
    for (int j = 0; j < d; ++j) {
      if (j > 0) out << ',';
      out << format_double(p[j]);
    }
    out << '\n';
  }
}

std::vector<Vec> read_csv_points(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open for reading: " + path.string());
  std::string line;
  if (!std::getline(in, line)) throw ParseError("empty vertex CSV");
  std::vector<Vec> pts;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<double> row;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      row.push_back(std::strtod(cell.c_str(), nullptr));
    }
    Vec v(static_cast<Eigen::Index>(row.size()));
    for (size_t i = 0; i < row.size(); ++i) {
      v[static_cast<Eigen::Index>(i)] = row[i];
    }
    pts.push_back(v);
  }
  return pts;
}

}  // namespace

void write_string_csv(const StringOfImages& x,
                      const std::filesystem::path& path) {
  write_csv_points(x.images(), path);
}

StringOfImages read_string_csv(const std::filesystem::path& path) {
  return StringOfImages(read_csv_points(path));
}

void write_polyline_csv(const Polyline& p, const std::filesystem::path& path) {
  write_csv_points(p.vertices(), path);
}

Polyline read_polyline_csv(const std::filesystem::path& path) {
  return Polyline(read_csv_points(path));
}

std::string string_to_json(const StringOfImages& x) {
  std::ostringstream out;
  write_string_record(out, x);
  return out.str();
}

StringOfImages string_from_json(const std::string& text) {
  try {
    return string_record_from_json(json::parse(text));
  } catch (const json::exception& e) {
    throw ParseError(e.what());
  }
}

const char* const kTraceCsvHeader =
    "step,sim_time,spacing,total_length,n_images,reparametrized,images_added,"
    "residual,d_to_reference";

void write_trace_csv(const std::vector<IterationRecord>& iterations,
                     const std::filesystem::path& path) {
  auto out = open_out(path);
  out << kTraceCsvHeader << '\n';
  for (const auto& rec : iterations) {
    out << rec.step << ',' << format_double(rec.sim_time) << ','
        << format_double(rec.spacing) << ','
        << format_double(rec.total_length) << ',' << rec.n_images << ','
        << (rec.reparametrized ? 1 : 0) << ',' << (rec.images_added ? 1 : 0)
        << ',' << format_double(rec.residual) << ',';
    if (rec.d_to_reference.has_value()) {
      out << format_double(*rec.d_to_reference);
    }
    out << '\n';
  }
}

std::vector<IterationRecord> read_trace_csv(
    const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open for reading: " + path.string());
  std::string line;
  if (!std::getline(in, line) || line != kTraceCsvHeader) {
    throw ParseError("trace CSV header mismatch");
  }
  std::vector<IterationRecord> out;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    cells.resize(9);  // trailing empty d_to_reference drops out of getline
    IterationRecord rec;
    rec.step = std::atol(cells[0].c_str());
    rec.sim_time = std::strtod(cells[1].c_str(), nullptr);
    rec.spacing = std::strtod(cells[2].c_str(), nullptr);
    rec.total_length = std::strtod(cells[3].c_str(), nullptr);
    rec.n_images = std::atoi(cells[4].c_str());
    rec.reparametrized = cells[5] == "1";
    rec.images_added = cells[6] == "1";
    rec.residual = std::strtod(cells[7].c_str(), nullptr);
    if (!cells[8].empty()) {
      rec.d_to_reference = std::strtod(cells[8].c_str(), nullptr);
    }
    out.push_back(rec);
  }
  return out;
}

std::string report_to_json(const RunReport& report) {
  std::ostringstream out;
  out << "{\"schema_version\":1";
  out << ",\"termination\":\"" << to_string(report.termination) << '"';
  out << ",\"error_message\":" << json(report.error_message).dump();
  out << ",\"settling_step\":" << report.settling_step;
  out << ",\"barrier\":";
  if (std::isfinite(report.barrier)) {
    out << format_double(report.barrier);
  } else {
    out << "null";
  }
  out << ",\"saddle\":";
  if (report.saddle.has_value()) {
    out << "{\"point\":";
    write_vec_json(out, report.saddle->point);
    out << ",\"kind\":\"" << to_string(report.saddle->classification.kind)
        << "\",\"eigenvalues\":";
    write_vec_json(out, report.saddle->classification.eigenvalues);
    out << '}';
  } else {
    out << "null";
  }
  out << ",\"final_string\":";
  write_string_record(out, report.final_string);
  out << ",\"iterations\":[";
  for (size_t i = 0; i < report.iterations.size(); ++i) {
    const auto& rec = report.iterations[i];
    if (i > 0) out << ',';
    out << "{\"step\":" << rec.step
        << ",\"sim_time\":" << format_double(rec.sim_time)
        << ",\"spacing\":" << format_double(rec.spacing)
        << ",\"total_length\":" << format_double(rec.total_length)
        << ",\"n_images\":" << rec.n_images << ",\"reparametrized\":"
        << (rec.reparametrized ? "true" : "false") << ",\"images_added\":"
        << (rec.images_added ? "true" : "false")
        << ",\"residual\":" << format_double(rec.residual)
        << ",\"d_to_reference\":";
    if (rec.d_to_reference.has_value()) {
      out << format_double(*rec.d_to_reference);
    } else {
      out << "null";
    }
    out << '}';
  }
  out << "]}";
  return out.str();
}

RunReport report_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ParseError(e.what());
  }
  RunReport report{.final_string =
                       string_record_from_json(j.at("final_string"))};
  const std::string term = j.at("termination").get<std::string>();
  if (term == "residual_met") {
    report.termination = Termination::residual_met;
  } else if (term == "displacement_met") {
    report.termination = Termination::displacement_met;
  } else if (term == "max_steps") {
    report.termination = Termination::max_steps;
  } else if (term == "error") {
    report.termination = Termination::error;
  } else {
    throw ParseError("unknown termination: " + term);
  }
  report.error_message = j.at("error_message").get<std::string>();
  report.settling_step = j.at("settling_step").get<long>();
  report.barrier = j.at("barrier").is_null()
                       ? std::numeric_limits<double>::quiet_NaN()
                       : j.at("barrier").get<double>();
  if (!j.at("saddle").is_null()) {
    SaddleInfo saddle;
    saddle.point = vec_from_json(j.at("saddle").at("point"));
    saddle.classification.eigenvalues =
        vec_from_json(j.at("saddle").at("eigenvalues"));
    const std::string kind = j.at("saddle").at("kind").get<std::string>();
    if (kind == "minimum") {
      saddle.classification.kind = CriticalKind::minimum;
    } else if (kind == "index_one_saddle") {
      saddle.classification.kind = CriticalKind::index_one_saddle;
    } else if (kind == "higher_index_or_degenerate") {
      saddle.classification.kind = CriticalKind::higher_index_or_degenerate;
    } else {
      saddle.classification.kind = CriticalKind::not_critical;
    }
    report.saddle = std::move(saddle);
  }
  for (const auto& row : j.at("iterations")) {
    IterationRecord rec;
    rec.step = row.at("step").get<long>();
    rec.sim_time = row.at("sim_time").get<double>();
    rec.spacing = row.at("spacing").get<double>();
    rec.total_length = row.at("total_length").get<double>();
    rec.n_images = row.at("n_images").get<int>();
    rec.reparametrized = row.at("reparametrized").get<bool>();
    rec.images_added = row.at("images_added").get<bool>();
    rec.residual = row.at("residual").get<double>();
    if (!row.at("d_to_reference").is_null()) {
      rec.d_to_reference = row.at("d_to_reference").get<double>();
    }
    report.iterations.push_back(rec);
  }
  return report;
}

void emit_report(const RunReport& report, ReportFormat format,
                 const std::filesystem::path& path) {
  if (format == ReportFormat::json) {
    auto out = open_out(path);
    out << report_to_json(report) << '\n';
  } else {
    write_trace_csv(report.iterations, path);
  }
}

void write_study_csv(const StudyTable& table,
                     const std::filesystem::path& path) {
  auto out = open_out(path);
  out << "h,dt,scheme,N_final,steps_to_settle,error_dH,residual,status\n";
  for (const auto& row : table.rows) {
    out << format_double(row.h) << ',' << format_double(row.dt) << ','
        << to_string(row.scheme) << ',' << row.n_final << ','
        << row.steps_to_settle << ',' << format_double(row.error_dh) << ','
        << format_double(row.residual) << ','
        << (row.ok ? "ok" : "failed") << '\n';
  }
}

namespace {

void write_plot_header(std::ostream& out) { out << "series,x,y\n"; }

void write_series_point(std::ostream& out, const std::string& name, double x,
                        double y) {
  out << name << ',' << format_double(x) << ',' << format_double(y) << '\n';
}

}  // namespace

void write_plotdata(const RunReport& report,
                    const std::filesystem::path& path) {
  auto out = open_out(path);
  write_plot_header(out);
  for (const auto& rec : report.iterations) {
    write_series_point(out, "residual", static_cast<double>(rec.step),
                       rec.residual);
    write_series_point(out, "spacing", static_cast<double>(rec.step),
                       rec.spacing);
    if (rec.d_to_reference.has_value()) {
      write_series_point(out, "d_to_reference",
                         static_cast<double>(rec.step), *rec.d_to_reference);
    }
  }
  for (const auto& img : report.final_string.images()) {
    write_series_point(out, "final_string", img[0],
                       img.size() > 1 ? img[1] : 0.0);
  }
}

void write_plotdata(const StudyTable& table,
                    const std::filesystem::path& path) {
  auto out = open_out(path);
  write_plot_header(out);
  for (const auto& row : table.rows) {
    if (!row.ok) continue;
    std::ostringstream name;
    name << "error_dH[" << to_string(row.scheme) << ";dt="
         << format_double(row.dt) << ']';
    write_series_point(out, name.str(), row.h, row.error_dh);
  }
}

void write_plotdata(const StabilityTrace& trace,
                    const std::filesystem::path& path) {
  auto out = open_out(path);
  write_plot_header(out);
  for (size_t i = 0; i < trace.times.size(); ++i) {
    write_series_point(out, "d_H", trace.times[i], trace.d_h[i]);
  }
}

// ---- config parsing ----

namespace {

class Validator {
 public:
  void reject_unknown_keys(const json& obj, const std::string& prefix,
                           std::initializer_list<const char*> allowed) {
    for (const auto& [key, value] : obj.items()) {
      (void)value;
      bool known = false;
      for (const char* a : allowed) {
        if (key == a) {
          known = true;
          break;
        }
      }
      if (!known) issues_.push_back(path(prefix, key) + ": unknown key");
    }
  }

  template <typename T>
  void load(const json& obj, const std::string& prefix, const char* key,
            T& target, const char* type_name) {
    if (!obj.contains(key)) return;
    try {
      target = obj.at(key).get<T>();
    } catch (const json::exception&) {
      issues_.push_back(path(prefix, key) + ": expected " +
                        std::string(type_name));
    }
  }

  void load_vec(const json& obj, const std::string& prefix, const char* key,
                std::optional<Vec>& target) {
    if (!obj.contains(key)) return;
    const json& arr = obj.at(key);
    if (!arr.is_array() || arr.empty()) {
      issues_.push_back(path(prefix, key) + ": expected a number array");
      return;
    }
    for (const auto& v : arr) {
      if (!v.is_number()) {
        issues_.push_back(path(prefix, key) + ": expected a number array");
        return;
      }
    }
    target = vec_from_json(arr);
  }

  void require(bool condition, const std::string& message) {
    if (!condition) issues_.push_back(message);
  }

  void add(const std::vector<std::string>& more) {
    issues_.insert(issues_.end(), more.begin(), more.end());
  }

  void finish() const {
    if (!issues_.empty()) throw ValidationError(issues_);
  }

 private:
  static std::string path(const std::string& prefix, const std::string& key) {
    return prefix.empty() ? key : prefix + "." + key;
  }

  std::vector<std::string> issues_;
};

json parse_json(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw ParseError(e.what());
  }
}

void load_potential_block(const json& root, Validator& v,
                          PotentialConfig& out) {
  if (!root.contains("potential")) return;
  const json& p = root.at("potential");
  if (!p.is_object()) {
    v.require(false, "potential: expected an object");
    return;
  }
  v.reject_unknown_keys(p, "potential", {"name", "a", "c", "dim", "box"});
  v.load(p, "potential", "name", out.name, "string");
  v.load(p, "potential", "a", out.a, "number");
  v.load(p, "potential", "c", out.c, "number");
  v.load(p, "potential", "dim", out.dim, "integer");
  v.require(out.dim >= 1, "potential.dim: must be >= 1");
  v.require(out.name == "quadratic" || out.name == "double-well" ||
                out.name == "mueller-brown",
            "potential.name: expected quadratic, double-well, or "
            "mueller-brown");
  if (p.contains("box")) {
    const json& b = p.at("box");
    if (!b.is_object()) {
      v.require(false, "potential.box: expected an object");
      return;
    }
    v.reject_unknown_keys(b, "potential.box", {"lo", "hi"});
    std::optional<Vec> lo, hi;
    v.load_vec(b, "potential.box", "lo", lo);
    v.load_vec(b, "potential.box", "hi", hi);
    if (lo.has_value() && hi.has_value()) {
      if (lo->size() != hi->size()) {
        v.require(false, "potential.box: lo and hi must match in length");
      } else {
        bool ordered = true;
        for (int i = 0; i < lo->size(); ++i) {
          if (!((*lo)[i] < (*hi)[i])) ordered = false;
        }
        v.require(ordered, "potential.box: lo must be strictly below hi");
        if (ordered) out.box = Box{*lo, *hi};
      }
    } else {
      v.require(false, "potential.box: both lo and hi are required");
    }
  }
}

void load_solver_block(const json& root, Validator& v, SolverConfig& out) {
  if (!root.contains("solver")) return;
  const json& s = root.at("solver");
  if (!s.is_object()) {
    v.require(false, "solver: expected an object");
    return;
  }
  v.reject_unknown_keys(s, "solver",
                        {"h", "K", "dt", "integrator", "max_steps",
                         "tol_residual", "tol_displacement", "grad_tol",
                         "eig_tol"});
  v.load(s, "solver", "h", out.h, "number");
  v.load(s, "solver", "K", out.K, "number");
  v.load(s, "solver", "dt", out.integrator.dt, "number");
  v.load(s, "solver", "max_steps", out.max_steps, "integer");
  v.load(s, "solver", "tol_residual", out.tol_residual, "number");
  v.load(s, "solver", "tol_displacement", out.tol_displacement, "number");
  v.load(s, "solver", "grad_tol", out.grad_tol, "number");
  v.load(s, "solver", "eig_tol", out.eig_tol, "number");
  if (s.contains("integrator")) {
    std::string name;
    v.load(s, "solver", "integrator", name, "string");
    try {
      out.integrator.scheme = scheme_from_string(name);
    } catch (const Error&) {
      v.require(false, "solver.integrator: expected euler, heun, or rk4");
    }
  }
}

void load_oracle_block(const json& root, Validator& v, FlowOracleConfig& out) {
  if (!root.contains("oracle")) return;
  const json& o = root.at("oracle");
  if (!o.is_object()) {
    v.require(false, "oracle: expected an object");
    return;
  }
  v.reject_unknown_keys(o, "oracle", {"abs_tol", "rel_tol", "max_substeps"});
  v.load(o, "oracle", "abs_tol", out.abs_tol, "number");
  v.load(o, "oracle", "rel_tol", out.rel_tol, "number");
  v.load(o, "oracle", "max_substeps", out.max_substeps, "integer");
  v.require(out.abs_tol > 0, "oracle.abs_tol: must be > 0");
  v.require(out.rel_tol > 0, "oracle.rel_tol: must be > 0");
  v.require(out.max_substeps > 0, "oracle.max_substeps: must be > 0");
}

void load_init_block(const json& root, Validator& v, InitConfig& out) {
  if (!root.contains("init")) return;
  const json& i = root.at("init");
  if (!i.is_object()) {
    v.require(false, "init: expected an object");
    return;
  }
  v.reject_unknown_keys(i, "init",
                        {"kind", "n_images", "amplitude", "seed", "from",
                         "to"});
  if (i.contains("kind")) {
    std::string name;
    v.load(i, "init", "kind", name, "string");
    try {
      out.kind = init_kind_from_string(name);
    } catch (const Error&) {
      v.require(false, "init.kind: expected linear, arc, or perturbed");
    }
  }
  v.load(i, "init", "n_images", out.n_segments, "integer");
  v.load(i, "init", "amplitude", out.amplitude, "number");
  v.load(i, "init", "seed", out.seed, "integer");
  v.load_vec(i, "init", "from", out.from);
  v.load_vec(i, "init", "to", out.to);
  v.require(out.n_segments >= 2, "init.n_images: must be >= 2");
  v.require(out.amplitude >= 0, "init.amplitude: must be >= 0");
}

void load_output_block(const json& root, Validator& v, OutputConfig& out) {
  if (!root.contains("output")) return;
  const json& o = root.at("output");
  if (!o.is_object()) {
    v.require(false, "output: expected an object");
    return;
  }
  v.reject_unknown_keys(o, "output", {"report", "trace", "plotdata"});
  v.load(o, "output", "report", out.report, "string");
  v.load(o, "output", "trace", out.trace, "string");
  v.load(o, "output", "plotdata", out.plotdata, "string");
}

}  // namespace

RunConfigFile parse_config(const std::string& text) {
  const json root = parse_json(text);
  if (!root.is_object()) throw ParseError("config root must be an object");
  Validator v;
  v.reject_unknown_keys(root, "",
                        {"potential", "solver", "oracle", "init", "output"});
  RunConfigFile cfg;
  load_potential_block(root, v, cfg.potential);
  load_solver_block(root, v, cfg.solver);
  load_oracle_block(root, v, cfg.oracle);
  load_init_block(root, v, cfg.init);
  load_output_block(root, v, cfg.output);
  v.add(cfg.solver.validate());
  v.finish();
  return cfg;
}

StudyConfigFile parse_study_config(const std::string& text) {
  const json root = parse_json(text);
  if (!root.is_object()) throw ParseError("config root must be an object");
  Validator v;
  v.reject_unknown_keys(root, "",
                        {"potential", "solver", "oracle", "init", "study"});
  StudyConfigFile cfg;
  InitConfig init;
  load_potential_block(root, v, cfg.potential);
  load_solver_block(root, v, cfg.solver);
  load_oracle_block(root, v, cfg.oracle);
  load_init_block(root, v, init);
  cfg.init = init;
  if (root.contains("study")) {
    const json& s = root.at("study");
    if (!s.is_object()) {
      v.require(false, "study: expected an object");
    } else {
      v.reject_unknown_keys(
          s, "study",
          {"grid_h", "grid_dt", "schemes", "reference", "sample_step"});
      v.load(s, "study", "grid_h", cfg.grid_h, "number array");
      v.load(s, "study", "grid_dt", cfg.grid_dt, "number array");
      v.load(s, "study", "sample_step", cfg.sample_step, "number");
      if (s.contains("schemes")) {
        std::vector<std::string> names;
        v.load(s, "study", "schemes", names, "string array");
        for (const auto& n : names) {
          try {
            cfg.schemes.push_back(scheme_from_string(n));
          } catch (const Error&) {
            v.require(false, "study.schemes: unknown scheme " + n);
          }
        }
      }
      if (s.contains("reference")) {
        const json& ref = s.at("reference");
        if (!ref.is_object()) {
          v.require(false, "study.reference: expected an object");
        } else {
          v.reject_unknown_keys(ref, "study.reference",
                                {"kind", "path", "n_images", "dt_divisor"});
          v.load(ref, "study.reference", "kind", cfg.reference.kind, "string");
          v.load(ref, "study.reference", "path", cfg.reference.path, "string");
          v.load(ref, "study.reference", "n_images", cfg.reference.n_segments,
                 "integer");
          v.load(ref, "study.reference", "dt_divisor",
                 cfg.reference.dt_divisor, "number");
          v.require(cfg.reference.kind == "analytic" ||
                        cfg.reference.kind == "fine-run" ||
                        cfg.reference.kind == "file",
                    "study.reference.kind: expected analytic, fine-run, or "
                    "file");
        }
      }
    }
  }
  v.require(!cfg.grid_h.empty(), "study.grid_h: at least one value required");
  v.require(!cfg.grid_dt.empty(),
            "study.grid_dt: at least one value required");
  for (const double h : cfg.grid_h) {
    v.require(h > 0, "study.grid_h: entries must be > 0");
  }
  for (const double dt : cfg.grid_dt) {
    v.require(dt > 0, "study.grid_dt: entries must be > 0");
  }
  if (cfg.schemes.empty()) cfg.schemes.push_back(Scheme::euler);
  v.add(cfg.solver.validate());
  v.finish();
  return cfg;
}

std::string print_defaults() {
  const RunConfigFile cfg;
  std::ostringstream out;
  out << "potential.name = " << cfg.potential.name << '\n';
  out << "potential.a = " << format_double(cfg.potential.a) << '\n';
  out << "potential.c = " << format_double(cfg.potential.c) << '\n';
  out << "potential.dim = " << cfg.potential.dim << '\n';
  out << "solver.h = " << format_double(cfg.solver.h) << '\n';
  out << "solver.K = " << format_double(cfg.solver.K) << '\n';
  out << "solver.dt = " << format_double(cfg.solver.integrator.dt) << '\n';
  out << "solver.integrator = " << to_string(cfg.solver.integrator.scheme)
      << '\n';
  out << "solver.max_steps = " << cfg.solver.max_steps << '\n';
  out << "solver.tol_residual = " << format_double(cfg.solver.tol_residual)
      << '\n';
  out << "solver.tol_displacement = "
      << format_double(cfg.solver.tol_displacement) << '\n';
  out << "solver.grad_tol = " << format_double(cfg.solver.grad_tol) << '\n';
  out << "solver.eig_tol = " << format_double(cfg.solver.eig_tol) << '\n';
  out << "oracle.abs_tol = " << format_double(cfg.oracle.abs_tol) << '\n';
  out << "oracle.rel_tol = " << format_double(cfg.oracle.rel_tol) << '\n';
  out << "oracle.max_substeps = " << cfg.oracle.max_substeps << '\n';
  out << "init.kind = " << to_string(cfg.init.kind) << '\n';
  out << "init.n_images = " << cfg.init.n_segments << '\n';
  out << "init.amplitude = " << format_double(cfg.init.amplitude) << '\n';
  out << "init.seed = " << cfg.init.seed << '\n';
  out << "output.report = " << cfg.output.report << '\n';
  return out.str();
}

}  // namespace mepstring
