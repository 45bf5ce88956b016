// mep-string: compute minimum energy paths with the simplified and improved
// string method, and run the verification suites against the built-in
// potentials.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "mepstring/checks.hpp"
#include "mepstring/experiments.hpp"
#include "mepstring/io.hpp"

namespace ms = mepstring;

namespace {

int worker_count() {
  const char* env = std::getenv("MEP_STRING_THREADS");
  if (env != nullptr) {
    const long n = std::atol(env);
    if (n > 0) return static_cast<int>(n);
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? static_cast<int>(hw) : 1;
}

ms::Potential build_potential(const ms::PotentialConfig& cfg) {
  return ms::make_potential_by_name(cfg.name, cfg.a, cfg.c, cfg.dim,
                                    cfg.box.has_value() ? &*cfg.box : nullptr);
}

/// Endpoint minima: explicit values win, otherwise the built-in defaults.
std::pair<ms::Vec, ms::Vec> resolve_endpoints(const ms::Potential& p,
                                              const ms::InitConfig& init) {
  if (init.from.has_value() && init.to.has_value()) {
    return {*init.from, *init.to};
  }
  if (p.name() == "double-well") {
    ms::Vec a(2), b(2);
    a << -1.0, 0.0;
    b << 1.0, 0.0;
    return {a, b};
  }
  if (p.name() == "mueller-brown") {
    ms::Vec a(2), b(2);
    a << -0.558, 1.442;
    b << -0.050, 0.467;
    return {ms::newton_refine_critical(p, a), ms::newton_refine_critical(p, b)};
  }
  throw ms::Error("potential '" + p.name() +
                  "' has no default endpoints; pass init.from/init.to "
                  "(--from/--to)");
}

ms::Vec parse_point(const std::string& text) {
  std::vector<double> vals;
  std::stringstream ss(text);
  std::string cell;
  while (std::getline(ss, cell, ',')) {
    vals.push_back(std::strtod(cell.c_str(), nullptr));
  }
  ms::Vec v(static_cast<Eigen::Index>(vals.size()));
  for (size_t i = 0; i < vals.size(); ++i) {
    v[static_cast<Eigen::Index>(i)] = vals[i];
  }
  return v;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ms::IoError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

ms::Polyline build_reference(const ms::StudyConfigFile& cfg,
                             const ms::Potential& p, const ms::Vec& m_lo,
                             const ms::Vec& m_hi) {
  if (cfg.reference.kind == "file") {
    return ms::read_polyline_csv(cfg.reference.path);
  }
  if (cfg.reference.kind == "analytic") {
    return ms::Polyline({m_lo, m_hi});
  }
  // fine-run proxy: high image count, dt well below the study grid
  ms::SolverConfig fine = cfg.solver;
  fine.integrator.dt =
      *std::min_element(cfg.grid_dt.begin(), cfg.grid_dt.end()) /
      cfg.reference.dt_divisor;
  fine.h = 1.15 * (m_hi - m_lo).norm() / cfg.reference.n_segments;
  const ms::StringOfImages x0 =
      ms::initial_string(p, m_lo, m_hi, cfg.reference.n_segments,
                         cfg.init.kind, cfg.init.amplitude, cfg.init.seed,
                         fine);
  const ms::RunReport report = ms::run(fine, p, x0);
  if (report.termination == ms::Termination::error) {
    throw ms::Error("reference fine run failed: " + report.error_message);
  }
  return ms::interpolant(report.final_string);
}

int cmd_solve(const ms::RunConfigFile& cfg) {
  const ms::Potential p = build_potential(cfg.potential);
  const auto [m_lo, m_hi] = resolve_endpoints(p, cfg.init);
  const ms::StringOfImages x0 =
      ms::initial_string(p, m_lo, m_hi, cfg.init.n_segments, cfg.init.kind,
                         cfg.init.amplitude, cfg.init.seed, cfg.solver);
  const ms::RunReport report = ms::run(cfg.solver, p, x0);

  if (!cfg.output.report.empty()) {
    ms::emit_report(report, ms::ReportFormat::json, cfg.output.report);
  }
  if (!cfg.output.trace.empty()) {
    ms::write_trace_csv(report.iterations, cfg.output.trace);
  }
  if (!cfg.output.plotdata.empty()) {
    ms::write_plotdata(report, cfg.output.plotdata);
  }

  std::cout << "termination: " << ms::to_string(report.termination) << '\n';
  std::cout << "steps: " << report.iterations.size() << '\n';
  if (report.saddle.has_value()) {
    std::cout << "saddle:";
    for (int i = 0; i < report.saddle->point.size(); ++i) {
      std::cout << ' ' << ms::format_double(report.saddle->point[i]);
    }
    std::cout << " (" << ms::to_string(report.saddle->classification.kind)
              << ")\n";
    std::cout << "barrier: " << ms::format_double(report.barrier) << '\n';
  }
  if (report.termination == ms::Termination::error) {
    std::cerr << "error: " << report.error_message << '\n';
  }
  return report.termination == ms::Termination::residual_met ||
                 report.termination == ms::Termination::displacement_met
             ? 0
             : 1;
}

int cmd_study(const ms::StudyConfigFile& cfg, const std::string& out_path,
              const std::string& plot_path) {
  const ms::Potential p = build_potential(cfg.potential);
  const auto [m_lo, m_hi] = resolve_endpoints(p, cfg.init);
  const ms::Polyline reference = build_reference(cfg, p, m_lo, m_hi);

  ms::InitSpec init;
  init.m_lo = m_lo;
  init.m_hi = m_hi;
  init.kind = cfg.init.kind;
  init.amplitude = cfg.init.amplitude;
  init.seed = cfg.init.seed;
  init.n_segments_hint = cfg.init.n_segments;

  ms::StudyTable table =
      ms::convergence_study(cfg.grid_h, cfg.grid_dt, cfg.schemes, cfg.solver,
                            p, reference, init, worker_count(),
                            cfg.sample_step);
  table.reference_descriptor = cfg.reference.kind;
  ms::write_study_csv(table, out_path);
  if (!plot_path.empty()) ms::write_plotdata(table, plot_path);

  bool all_ok = true;
  for (const auto& row : table.rows) {
    if (!row.ok) {
      all_ok = false;
      std::cerr << "cell (h=" << row.h << ", dt=" << row.dt
                << ") failed: " << row.error << '\n';
    }
  }
  std::cout << table.rows.size() << " cells -> " << out_path << '\n';
  return all_ok ? 0 : 1;
}

int cmd_probe(const std::string& kind, const ms::RunConfigFile& cfg,
              const std::string& out_path, const std::string& plot_path) {
  const ms::Potential p = build_potential(cfg.potential);
  const auto [m_lo, m_hi] = resolve_endpoints(p, cfg.init);
  const ms::Polyline reference({m_lo, m_hi});
  std::ostringstream out;

  if (kind == "stability") {
    const ms::StabilityTrace trace = ms::stability_probe(
        p, reference, cfg.init.amplitude, 201, 10.0, 20, cfg.oracle);
    out << "{\"schema_version\":1,\"probe\":\"stability\",\"amplitude\":"
        << ms::format_double(trace.perturbation_amplitude)
        << ",\"times\":[";
    for (size_t i = 0; i < trace.times.size(); ++i) {
      if (i > 0) out << ',';
      out << ms::format_double(trace.times[i]);
    }
    out << "],\"d_H\":[";
    for (size_t i = 0; i < trace.d_h.size(); ++i) {
      if (i > 0) out << ',';
      out << ms::format_double(trace.d_h[i]);
    }
    out << "]}";
    if (!plot_path.empty()) ms::write_plotdata(trace, plot_path);
  } else if (kind == "one-sided") {
    const auto rows = ms::one_sided_lemma_probe(
        p, reference, {0.1, 0.05, 0.025, 0.0125}, 50, cfg.init.seed);
    out << "{\"schema_version\":1,\"probe\":\"one-sided\",\"rows\":[";
    for (size_t i = 0; i < rows.size(); ++i) {
      if (i > 0) out << ',';
      out << "{\"eta\":" << ms::format_double(rows[i].eta)
          << ",\"max_forward\":" << ms::format_double(rows[i].max_forward)
          << ",\"max_reverse\":" << ms::format_double(rows[i].max_reverse)
          << '}';
    }
    out << "]}";
  } else if (kind == "lemmas") {
    const ms::Potential quad = ms::make_quadratic_well(2);
    const ms::Potential dwell = ms::make_double_well();
    const ms::ScalingReport rep =
        ms::lemma_scaling_checks(quad, dwell, cfg.solver);
    out << "{\"schema_version\":1,\"probe\":\"lemmas\",\"commutation\":{"
        << "\"slope_m\":" << ms::format_double(rep.commute.slope_m)
        << ",\"slope_dt\":" << ms::format_double(rep.commute.slope_dt)
        << ",\"spacings\":[";
    for (size_t i = 0; i < rep.commute.spacings.size(); ++i) {
      if (i > 0) out << ',';
      out << ms::format_double(rep.commute.spacings[i]);
    }
    out << "],\"dts\":[";
    for (size_t i = 0; i < rep.commute.dts.size(); ++i) {
      if (i > 0) out << ',';
      out << ms::format_double(rep.commute.dts[i]);
    }
    out << "],\"err\":[";
    for (size_t i = 0; i < rep.commute.err.size(); ++i) {
      if (i > 0) out << ',';
      out << '[';
      for (size_t j = 0; j < rep.commute.err[i].size(); ++j) {
        if (j > 0) out << ',';
        out << ms::format_double(rep.commute.err[i][j]);
      }
      out << ']';
    }
    out << "]},\"spacing_growth\":{\"ok\":"
        << (rep.spacing_growth_ok ? "true" : "false") << ",\"detail\":"
        << nlohmann::json(rep.spacing_growth_detail).dump()
        << "},\"truncation\":{\"slope_euler_quadratic\":"
        << ms::format_double(rep.truncation_slope_euler_quadratic)
        << ",\"slope_euler_double_well\":"
        << ms::format_double(rep.truncation_slope_euler_double_well) << "}}";
  } else {
    throw ms::Error("unknown probe kind: " + kind);
  }

  if (out_path.empty()) {
    std::cout << out.str() << '\n';
  } else {
    std::ofstream f(out_path);
    if (!f) throw ms::IoError("cannot open " + out_path);
    f << out.str() << '\n';
    std::cout << "probe " << kind << " -> " << out_path << '\n';
  }
  return 0;
}

int cmd_check(const std::string& out_path) {
  ms::CheckOptions opts;
  opts.threads = worker_count();
  const auto results = ms::run_check_suite(opts);
  bool all_pass = true;
  std::ostringstream json;
  json << "{\"schema_version\":1,\"checks\":[";
  for (size_t i = 0; i < results.size(); ++i) {
    const auto& r = results[i];
    all_pass = all_pass && r.pass;
    std::cout << (r.pass ? "[PASS] " : "[FAIL] ") << r.name << ": "
              << r.detail << '\n';
    if (i > 0) json << ',';
    json << "{\"name\":" << nlohmann::json(r.name).dump()
         << ",\"pass\":" << (r.pass ? "true" : "false")
         << ",\"detail\":" << nlohmann::json(r.detail).dump() << '}';
  }
  json << "],\"all_pass\":" << (all_pass ? "true" : "false") << '}';
  if (!out_path.empty()) {
    std::ofstream f(out_path);
    if (!f) throw ms::IoError("cannot open " + out_path);
    f << json.str() << '\n';
  }
  std::cout << (all_pass ? "all checks passed" : "some checks FAILED")
            << '\n';
  return all_pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"minimum energy paths via the string method"};
  app.require_subcommand(1);

  // ---- solve ----
  auto* solve = app.add_subcommand("solve", "relax one string to an MEP");
  std::string cfg_path, potential_name, init_name, integ_name;
  std::string out_path, trace_path, plot_path, from_str, to_str;
  double a = 0, c = 0, h = 0, K = 0, dt = 0, amplitude = 0;
  double tol_res = 0, tol_disp = 0;
  long max_steps = 0;
  int n_images = 0;
  unsigned seed = 0;
  bool print_defaults_flag = false;
  solve->add_option("--config", cfg_path, "JSON config file");
  solve->add_option("--potential", potential_name,
                    "quadratic | double-well | mueller-brown");
  solve->add_option("--a", a, "double-well quartic coefficient");
  solve->add_option("--c", c, "double-well transverse stiffness");
  solve->add_option("--h", h, "target image spacing");
  solve->add_option("--K", K, "spacing trigger multiplier (> 1)");
  solve->add_option("--dt", dt, "time step");
  solve->add_option("--integrator", integ_name, "euler | heun | rk4");
  solve->add_option("--n-images", n_images, "segment count N (N+1 images)");
  solve->add_option("--init", init_name, "linear | arc | perturbed");
  solve->add_option("--amplitude", amplitude, "init bulge/noise amplitude");
  solve->add_option("--seed", seed, "init noise seed");
  solve->add_option("--max-steps", max_steps, "iteration cap");
  solve->add_option("--tol-residual", tol_res, "MEP residual target");
  solve->add_option("--tol-displacement", tol_disp,
                    "displacement rate target");
  solve->add_option("--from", from_str, "lower endpoint, comma separated");
  solve->add_option("--to", to_str, "upper endpoint, comma separated");
  solve->add_option("--out", out_path, "report JSON path");
  solve->add_option("--trace", trace_path, "iteration trace CSV path");
  solve->add_option("--plotdata", plot_path, "long-format plot CSV path");
  solve->add_flag("--print-defaults", print_defaults_flag,
                  "print built-in defaults and exit");

  // ---- study ----
  auto* study = app.add_subcommand("study", "(h, dt) refinement study");
  std::string study_cfg, study_out = "table.csv", study_plot;
  study->add_option("--config", study_cfg, "study JSON config")->required();
  study->add_option("--out", study_out, "study table CSV path");
  study->add_option("--plotdata", study_plot, "long-format plot CSV path");

  // ---- probe ----
  auto* probe = app.add_subcommand("probe", "stability and scaling probes");
  std::string probe_kind, probe_out, probe_plot, probe_cfg;
  probe->add_option("--kind", probe_kind, "stability | one-sided | lemmas")
      ->required();
  probe->add_option("--config", probe_cfg, "JSON config file");
  probe->add_option("--out", probe_out, "report JSON path");
  probe->add_option("--plotdata", probe_plot, "long-format plot CSV path");

  // ---- check ----
  auto* check = app.add_subcommand(
      "check", "run the full verification suite, print pass/fail per check");
  std::string check_out;
  check->add_option("--out", check_out, "check report JSON path");

  CLI11_PARSE(app, argc, argv);

  try {
    if (solve->parsed()) {
      if (print_defaults_flag) {
        std::cout << ms::print_defaults();
        return 0;
      }
      ms::RunConfigFile cfg = cfg_path.empty()
                                  ? ms::RunConfigFile{}
                                  : ms::parse_config(read_file(cfg_path));
      if (solve->count("--potential") > 0) cfg.potential.name = potential_name;
      if (solve->count("--a") > 0) cfg.potential.a = a;
      if (solve->count("--c") > 0) cfg.potential.c = c;
      if (solve->count("--h") > 0) cfg.solver.h = h;
      if (solve->count("--K") > 0) cfg.solver.K = K;
      if (solve->count("--dt") > 0) cfg.solver.integrator.dt = dt;
      if (solve->count("--integrator") > 0) {
        cfg.solver.integrator.scheme = ms::scheme_from_string(integ_name);
      }
      if (solve->count("--n-images") > 0) cfg.init.n_segments = n_images;
      if (solve->count("--init") > 0) {
        cfg.init.kind = ms::init_kind_from_string(init_name);
      }
      if (solve->count("--amplitude") > 0) cfg.init.amplitude = amplitude;
      if (solve->count("--seed") > 0) cfg.init.seed = seed;
      if (solve->count("--max-steps") > 0) cfg.solver.max_steps = max_steps;
      if (solve->count("--tol-residual") > 0) cfg.solver.tol_residual = tol_res;
      if (solve->count("--tol-displacement") > 0) {
        cfg.solver.tol_displacement = tol_disp;
      }
      if (solve->count("--from") > 0) cfg.init.from = parse_point(from_str);
      if (solve->count("--to") > 0) cfg.init.to = parse_point(to_str);
      if (solve->count("--out") > 0) cfg.output.report = out_path;
      if (solve->count("--trace") > 0) cfg.output.trace = trace_path;
      if (solve->count("--plotdata") > 0) cfg.output.plotdata = plot_path;
      {
        const auto issues = cfg.solver.validate();
        if (!issues.empty()) throw ms::ValidationError(issues);
      }
      return cmd_solve(cfg);
    }
    if (study->parsed()) {
      return cmd_study(ms::parse_study_config(read_file(study_cfg)),
                       study_out, study_plot);
    }
    if (probe->parsed()) {
      ms::RunConfigFile cfg = probe_cfg.empty()
                                  ? ms::RunConfigFile{}
                                  : ms::parse_config(read_file(probe_cfg));
      if (probe_kind == "stability" && probe_cfg.empty()) {
        cfg.init.amplitude = 0.1;
      }
      return cmd_probe(probe_kind, cfg, probe_out, probe_plot);
    }
    if (check->parsed()) {
      return cmd_check(check_out);
    }
  } catch (const ms::ValidationError& e) {
    std::cerr << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
