#include "mepstring/checks.hpp"

#include <cmath>
#include <cstdio>
#include <random>
#include <sstream>

#include "mepstring/experiments.hpp"

namespace mepstring {

namespace {

std::string num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

Polyline segment_reference() {
  Vec a(2), b(2);
  a << -1.0, 0.0;
  b << 1.0, 0.0;
  return Polyline({a, b});
}

/// Seeded random string: random-walk images with log-uniform segment scales.
StringOfImages random_string(unsigned seed) {
  std::mt19937 rng(seed);
  const int dims[] = {2, 3, 5};
  const int d = dims[rng() % 3];
  std::uniform_int_distribution<int> n_dist(4, 64);
  const int n = n_dist(rng);
  std::uniform_real_distribution<double> coord(-1.0, 1.0);
  std::uniform_real_distribution<double> log_scale(std::log(0.005),
                                                   std::log(0.5));
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::vector<Vec> pts;
  Vec x(d);
  for (int j = 0; j < d; ++j) x[j] = coord(rng);
  pts.push_back(x);
  for (int i = 0; i < n; ++i) {
    Vec dir(d);
    for (int j = 0; j < d; ++j) dir[j] = gauss(rng);
    if (dir.norm() == 0) dir[0] = 1;
    x = pts.back() + std::exp(log_scale(rng)) * dir.normalized();
    pts.push_back(x);
  }
  return StringOfImages(std::move(pts));
}

}  // namespace

CheckResult check_reparametrization_error_bound() {
  CheckResult r{.name = "reparametrization-error-bound"};
  const int kTrials = 1000;
  int violations = 0;
  double worst_margin = -1e300;
  for (int trial = 0; trial < kTrials; ++trial) {
    const StringOfImages x = random_string(90000u + static_cast<unsigned>(trial));
    const StringOfImages rx = reparametrize(x);
    const double m = spacing(x);
    const double total = arc_lengths(x).lengths.back();
    const double dh = hausdorff_distance(interpolant(x), interpolant(rx),
                                         total / 800.0);
    const double margin = dh - (0.5 * m + 1e-12);
    worst_margin = std::max(worst_margin, margin);
    if (margin > 0) ++violations;
  }
  r.pass = violations == 0;
  r.detail = "d_H(Ix, IRx) <= m(x)/2 + 1e-12 over " + std::to_string(kTrials) +
             " random strings (d in {2,3,5}, N in 4..64); violations: " +
             std::to_string(violations) +
             ", worst margin: " + num(worst_margin);
  return r;
}

CheckResult check_spacing_growth_bound() {
  CheckResult r{.name = "spacing-growth-bound"};
  const Potential quad = make_quadratic_well(3);
  bool ok = true;
  std::ostringstream detail;
  detail << "m(S^n x) <= K m(x) for n <= floor(log(K)/dt) on the quadratic "
            "well (L = 1), 100 strings per cell:";
  for (const double K : {1.2, 1.5, 2.0}) {
    for (const double dt : {1e-2, 1e-3}) {
      std::string cell;
      const bool cell_ok = spacing_growth_probe(
          quad, 1.0, K, dt, Scheme::euler, 100,
          9000u + static_cast<unsigned>(1000 * K), &cell);
      ok = ok && cell_ok;
      detail << " [K=" << num(K) << ", dt=" << num(dt) << ": "
             << (cell_ok ? "ok" : cell) << "]";
    }
  }
  r.pass = ok;
  r.detail = detail.str();
  return r;
}

CheckResult check_commutation_scaling() {
  CheckResult r{.name = "commutation-scaling"};
  const Potential dwell = make_double_well();
  const CommuteSweep sweep = commute_sweep(
      dwell, {0.4, 0.2, 0.1, 0.05},
      {1e-1, std::pow(10.0, -1.5), 1e-2, std::pow(10.0, -2.5), 1e-3});
  const bool m_ok = std::abs(sweep.slope_m - 2.0) <= 0.2;
  const bool dt_ok = std::abs(sweep.slope_dt - 1.0) <= 0.2;
  r.pass = m_ok && dt_ok;
  r.detail = "d_H(S_dt Ix, I S_dt x) slopes on the double well: in m(x) " +
             num(sweep.slope_m) + " (want 2.0 +- 0.2), in dt " +
             num(sweep.slope_dt) + " (want 1.0 +- 0.2)";
  return r;
}

CheckResult check_truncation_order() {
  CheckResult r{.name = "truncation-order"};
  const std::vector<double> dts = {1e-1, 1e-2, 1e-3, 1e-4};
  const Potential quad = make_quadratic_well(2);
  const Potential dwell = make_double_well();
  const double s_quad =
      log_log_slope(dts, truncation_errors(quad, Scheme::euler, dts));
  const double s_dwell =
      log_log_slope(dts, truncation_errors(dwell, Scheme::euler, dts));
  r.pass = std::abs(s_quad - 2.0) <= 0.1 && std::abs(s_dwell - 2.0) <= 0.1;
  r.detail = "euler one-step error slope vs reference flow over dt in "
             "[1e-4, 1e-1]: quadratic " +
             num(s_quad) + ", double well " + num(s_dwell) +
             " (want 2.0 +- 0.1)";
  return r;
}

CheckResult check_refinement_convergence() {
  CheckResult r{.name = "refinement-convergence"};
  const Potential dwell = make_double_well();
  const Polyline reference = segment_reference();
  InitSpec init;
  init.m_lo = reference.vertex(0);
  init.m_hi = reference.vertex(1);
  init.kind = InitKind::arc;
  init.amplitude = 0.3;
  init.seed = 1;
  init.n_segments_hint = 4;

  SolverConfig base;
  base.K = 1.5;
  base.max_steps = 100000;
  base.tol_residual = 1e-6;
  base.tol_displacement = 1e-8;

  const std::vector<std::pair<double, double>> chain = {
      {0.2, 4e-3}, {0.1, 2e-3}, {0.05, 1e-3}, {0.025, 5e-4}};
  std::vector<double> errs;
  std::ostringstream table;
  for (const auto& [h, dt] : chain) {
    const StudyTable cell = convergence_study(
        {h}, {dt}, {Scheme::euler}, base, dwell, reference, init, 1, 1e-4);
    const StudyRow& row = cell.rows.front();
    if (!row.ok) {
      r.pass = false;
      r.detail = "cell (h=" + num(h) + ", dt=" + num(dt) +
                 ") failed: " + row.error;
      return r;
    }
    errs.push_back(row.error_dh);
    table << " (h=" << num(h) << ", dt=" << num(dt)
          << "): d_H=" << num(row.error_dh);
  }

  bool monotone = true;
  for (size_t i = 1; i < errs.size(); ++i) {
    if (errs[i] > 1.2 * errs[i - 1]) monotone = false;
  }
  const bool ratio_ok = errs.back() <= errs.front() / 4.0;

  SolverConfig finest = base;
  finest.h = chain.back().first;
  finest.integrator.dt = chain.back().second;
  const StringOfImages x0 =
      initial_string(dwell, init.m_lo, init.m_hi, 4, init.kind,
                     init.amplitude, init.seed, finest);
  const RunReport report = run(finest, dwell, x0);
  const bool saddle_ok =
      report.saddle.has_value() && report.saddle->point.norm() <= 2e-3;
  const bool barrier_ok = std::abs(report.barrier - 1.0) <= 2e-3;

  r.pass = monotone && ratio_ok && saddle_ok && barrier_ok;
  std::ostringstream d;
  d << "refinement chain" << table.str() << "; non-increasing (20% slack): "
    << (monotone ? "yes" : "NO") << "; finest <= coarsest/4: "
    << (ratio_ok ? "yes" : "NO") << " (ratio " << num(errs.back() / errs.front())
    << "); saddle |x|=" << num(report.saddle ? report.saddle->point.norm() : -1)
    << " (want <= 2e-3): " << (saddle_ok ? "yes" : "NO") << "; |barrier-1|="
    << num(std::abs(report.barrier - 1.0)) << " (want <= 2e-3): "
    << (barrier_ok ? "yes" : "NO");
  r.detail = d.str();
  return r;
}

CheckResult check_stability() {
  CheckResult r{.name = "stability"};
  const Potential dwell = make_double_well();
  const Polyline reference = segment_reference();
  const FlowOracleConfig oracle{1e-12, 1e-12, 10'000'000};

  const StabilityTrace noise =
      stability_probe(dwell, reference, 0.0, 201, 10.0, 20, oracle);
  double floor = 0;
  for (const double v : noise.d_h) floor = std::max(floor, v);

  const StabilityTrace trace =
      stability_probe(dwell, reference, 0.1, 201, 10.0, 20, oracle);
  const double final_dh = trace.d_h.back();
  bool monotone = true;
  for (size_t k = 1; k + 1 < trace.times.size(); ++k) {
    if (trace.times[k] < 1.0) continue;  // transient exempt
    if (trace.d_h[k + 1] > 1.05 * trace.d_h[k]) monotone = false;
  }
  const bool end_ok = trace.d_h.back() <= trace.d_h.front();

  r.pass = final_dh <= 0.01 && monotone && end_ok && floor <= 1e-6;
  r.detail = "amplitude 0.1, horizon 10: final d_H=" + num(final_dh) +
             " (want <= 0.01); non-increasing after t=1 (5% slack): " +
             (monotone ? "yes" : "NO") +
             "; d_H(end) <= d_H(0): " + (end_ok ? "yes" : "NO") +
             "; amplitude-0 noise floor=" + num(floor) + " (want <= 1e-6)";
  return r;
}

CheckResult check_trajectory_containment() {
  CheckResult r{.name = "trajectory-containment"};
  const Potential dwell = make_double_well();
  const Polyline reference = segment_reference();
  SolverConfig cfg;
  cfg.h = 0.1;
  cfg.K = 1.5;
  cfg.integrator.dt = 1e-3;
  cfg.max_steps = 20000;
  cfg.tol_residual = 1e-6;

  double worst_init = 0;
  double worst_iter = 0;
  bool ok = true;
  std::string failure;
  for (unsigned s = 1; s <= 20 && ok; ++s) {
    const double amplitude = 0.2 * static_cast<double>(s) / 20.0;
    const StringOfImages x0 =
        initial_string(dwell, reference.vertex(0), reference.vertex(1), 21,
                       InitKind::perturbed, amplitude, s, cfg);
    const double d0 = hausdorff_distance(interpolant(x0), reference, 5e-3);
    worst_init = std::max(worst_init, d0);
    if (d0 > 0.2) {
      ok = false;
      failure = "initialization " + std::to_string(s) + " has d_H=" + num(d0);
      break;
    }
    const RunReport report = run(cfg, dwell, x0, &reference, 5e-3);
    if (report.termination == Termination::error) {
      ok = false;
      failure = "run " + std::to_string(s) + ": " + report.error_message;
      break;
    }
    for (const auto& rec : report.iterations) {
      if (rec.d_to_reference.has_value()) {
        worst_iter = std::max(worst_iter, *rec.d_to_reference);
      }
    }
    if (worst_iter > 0.4) {
      ok = false;
      failure = "iterate left the 0.4 tube in run " + std::to_string(s);
      break;
    }
  }
  r.pass = ok;
  r.detail = ok ? "20 seeded runs with d_H(Ix0, M) <= 0.2 (worst " +
                      num(worst_init) + ") stayed within d_H <= 0.4 (worst " +
                      num(worst_iter) + ")"
                : failure;
  return r;
}

CheckResult check_one_sided_distance_bound() {
  CheckResult r{.name = "one-sided-distance-bound"};
  const Potential dwell = make_double_well();
  const Polyline reference = segment_reference();
  const std::vector<double> etas = {0.1, 0.05, 0.025, 0.0125};
  const auto rows = one_sided_lemma_probe(dwell, reference, etas, 50, 7);
  bool monotone = true;
  for (size_t i = 1; i < rows.size(); ++i) {
    if (rows[i].max_reverse > rows[i - 1].max_reverse) monotone = false;
  }
  bool bound_ok = true;
  std::ostringstream table;
  for (const auto& row : rows) {
    table << " eta=" << num(row.eta) << ": d(M,phi)<=" << num(row.max_reverse);
    if (row.eta == 0.05 && row.max_reverse > 0.15) bound_ok = false;
  }
  r.pass = monotone && bound_ok;
  r.detail = "max reverse distance over 50 curves per eta:" + table.str() +
             "; non-increasing as eta halves: " + (monotone ? "yes" : "NO") +
             "; eta=0.05 bound 0.15: " + (bound_ok ? "yes" : "NO");
  return r;
}

CheckResult check_mueller_brown_self_consistency() {
  CheckResult r{.name = "mueller-brown-self-consistency"};
  const Potential mb = make_mueller_brown();
  Vec a0(2), b0(2);
  a0 << -0.558, 1.442;
  b0 << -0.050, 0.467;
  const Vec m_lo = newton_refine_critical(mb, a0);
  const Vec m_hi = newton_refine_critical(mb, b0);

  auto run_at = [&](int n_segments, double dt) {
    SolverConfig cfg;
    cfg.h = 1.15 * (m_hi - m_lo).norm() / n_segments;
    cfg.K = 1.5;
    cfg.integrator.dt = dt;
    cfg.max_steps = static_cast<long>(std::llround(0.1 / dt));
    cfg.tol_residual = 0;      // fixed-horizon run
    cfg.tol_displacement = 0;
    const StringOfImages x0 = initial_string(
        mb, m_lo, m_hi, n_segments, InitKind::linear, 0.0, 1, cfg);
    return std::make_pair(run(cfg, mb, x0), cfg.h);
  };

  const auto [coarse, h_coarse] = run_at(64, 1e-4);
  const auto [fine, h_fine] = run_at(256, 2.5e-5);
  if (!coarse.saddle || !fine.saddle) {
    r.pass = false;
    r.detail = "saddle location failed on a run";
    return r;
  }
  const double rel_barrier =
      std::abs(coarse.barrier - fine.barrier) / std::abs(fine.barrier);
  const double dh = hausdorff_distance(interpolant(coarse.final_string),
                                       interpolant(fine.final_string),
                                       h_coarse / 10.0);
  const double saddle_gap =
      (coarse.saddle->point - fine.saddle->point).norm();
  r.pass = rel_barrier <= 0.01 && dh <= 2.0 * h_coarse;
  r.detail = "barrier coarse=" + num(coarse.barrier) +
             " fine=" + num(fine.barrier) + " rel diff=" + num(rel_barrier) +
             " (want <= 0.01); d_H(final strings)=" + num(dh) +
             " (want <= " + num(2.0 * h_coarse) +
             "); saddle gap=" + num(saddle_gap);
  return r;
}

std::vector<CheckResult> run_check_suite(const CheckOptions& opts) {
  (void)opts;
  std::vector<CheckResult> out;
  out.push_back(check_reparametrization_error_bound());
  out.push_back(check_spacing_growth_bound());
  out.push_back(check_commutation_scaling());
  out.push_back(check_truncation_order());
  out.push_back(check_refinement_convergence());
  out.push_back(check_stability());
  out.push_back(check_trajectory_containment());
  out.push_back(check_one_sided_distance_bound());
  out.push_back(check_mueller_brown_self_consistency());
  return out;
}

}  // namespace mepstring
