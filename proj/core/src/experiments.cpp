#include "mepstring/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <random>
#include <thread>

namespace mepstring {

double log_log_slope(const std::vector<double>& x,
                     const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) {
    throw Error("log_log_slope needs two equal-length samples");
  }
  const auto n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (size_t i = 0; i < x.size(); ++i) {
    const double lx = std::log(x[i]);
    const double ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

namespace {

/// Vertices of a polyline as a string, for arc-position queries.
StringOfImages as_string(const Polyline& p) {
  return StringOfImages(p.vertices());
}

/// n_vertices points at equal normalized arc positions along the polyline.
std::vector<Vec> sample_polyline(const Polyline& poly, int n_vertices) {
  const StringOfImages s = as_string(poly);
  std::vector<Vec> out;
  out.reserve(static_cast<size_t>(n_vertices));
  for (int i = 0; i < n_vertices; ++i) {
    const double t = static_cast<double>(i) / (n_vertices - 1);
    out.push_back(point_at_arc(s, t));
  }
  return out;
}

/// Deterministic unit vector orthogonal to the local (central-difference)
/// tangent at vertex i of a sampled curve.
Vec local_orthogonal(const std::vector<Vec>& pts, size_t i) {
  const size_t lo = i > 0 ? i - 1 : i;
  const size_t hi = i + 1 < pts.size() ? i + 1 : i;
  Vec tangent = pts[hi] - pts[lo];
  const double len = tangent.norm();
  if (len == 0) {
    Vec v = Vec::Zero(pts[i].size());
    v[0] = 1.0;
    return v;
  }
  tangent /= len;
  int k = 0;
  double best = std::abs(tangent[0]);
  for (int j = 1; j < tangent.size(); ++j) {
    if (std::abs(tangent[j]) < best) {
      best = std::abs(tangent[j]);
      k = j;
    }
  }
  Vec v = Vec::Zero(tangent.size());
  v[k] = 1.0;
  v -= v.dot(tangent) * tangent;
  return v.normalized();
}

}  // namespace

StudyTable convergence_study(const std::vector<double>& grid_h,
                             const std::vector<double>& grid_dt,
                             const std::vector<Scheme>& schemes,
                             const SolverConfig& base, const Potential& p,
                             const Polyline& reference, const InitSpec& init,
                             int n_threads, double sample_step) {
  StudyTable table;
  for (const Scheme scheme : schemes) {
    for (const double h : grid_h) {
      for (const double dt : grid_dt) {
        StudyRow row;
        row.h = h;
        row.dt = dt;
        row.scheme = scheme;
        table.rows.push_back(row);
      }
    }
  }

  auto run_cell = [&](StudyRow& row) {
    try {
      SolverConfig cfg = base;
      cfg.h = row.h;
      cfg.integrator.dt = row.dt;
      cfg.integrator.scheme = row.scheme;
      const StringOfImages x0 =
          initial_string(p, init.m_lo, init.m_hi,
                         std::max(init.n_segments_hint, 2), init.kind,
                         init.amplitude, init.seed, cfg);
      const RunReport report = run(cfg, p, x0);
      if (report.termination == Termination::error) {
        row.ok = false;
        row.error = report.error_message;
        return;
      }
      row.n_final = report.final_string.n_segments();
      row.steps_to_settle = report.settling_step;
      row.residual = report.iterations.empty()
                         ? 0.0
                         : report.iterations.back().residual;
      row.error_dh = hausdorff_distance(interpolant(report.final_string),
                                        reference, sample_step);
      row.ok = true;
    } catch (const Error& e) {
      row.ok = false;
      row.error = e.what();
    }
  };

  if (n_threads <= 1 || table.rows.size() <= 1) {
    for (auto& row : table.rows) run_cell(row);
  } else {
    std::atomic<size_t> next{0};
    const size_t workers =
        std::min<size_t>(static_cast<size_t>(n_threads), table.rows.size());
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        while (true) {
          const size_t i = next.fetch_add(1);
          if (i >= table.rows.size()) break;
          run_cell(table.rows[i]);
        }
      });
    }
    for (auto& t : pool) t.join();
  }
  return table;
}

StabilityTrace stability_probe(const Potential& p, const Polyline& m_ref,
                               double amplitude, int n_vertices,
                               double horizon_t, int n_checkpoints,
                               const FlowOracleConfig& oracle) {
  if (n_vertices < 3) throw Error("stability_probe needs >= 3 vertices");
  if (n_checkpoints < 1) throw Error("stability_probe needs >= 1 checkpoint");
  std::vector<Vec> pts = sample_polyline(m_ref, n_vertices);
  // deterministic orthogonal half-sine displacement profile
  for (size_t i = 1; i + 1 < pts.size(); ++i) {
    const double t = static_cast<double>(i) / (pts.size() - 1);
    const Vec v = local_orthogonal(pts, i);
    pts[i] += amplitude * std::sin(M_PI * t) * v;
  }
  for (const auto& q : pts) {
    if (!p.domain().contains(q)) {
      throw Error("perturbed curve leaves the computational box");
    }
  }

  const double sample_step = m_ref.length() / 2000.0;
  StabilityTrace trace;
  trace.perturbation_amplitude = amplitude;
  trace.times.push_back(0.0);
  trace.d_h.push_back(
      hausdorff_distance(Polyline(pts), m_ref, sample_step));
  double reached = 0;
  for (int k = 1; k <= n_checkpoints; ++k) {
    const double target = horizon_t * k / n_checkpoints;
    for (auto& q : pts) {
      q = reference_flow(oracle, p, q, target - reached);
    }
    reached = target;
    trace.times.push_back(target);
    trace.d_h.push_back(
        hausdorff_distance(Polyline(pts), m_ref, sample_step));
  }
  return trace;
}

std::vector<OneSidedRow> one_sided_lemma_probe(const Potential& p,
                                               const Polyline& m_ref,
                                               const std::vector<double>& etas,
                                               int n_samples, unsigned seed) {
  (void)p;
  constexpr int kVertices = 129;
  const std::vector<Vec> on_ref = sample_polyline(m_ref, kVertices);
  std::vector<OneSidedRow> out;
  for (size_t row_idx = 0; row_idx < etas.size(); ++row_idx) {
    const double eta = etas[row_idx];
    if (!(eta > 0)) throw Error("eta values must be positive");
    const double step = std::min(eta / 10.0, m_ref.length() / 500.0);
    OneSidedRow row;
    row.eta = eta;
    for (int s = 0; s < n_samples; ++s) {
      std::mt19937 rng(seed + 1000003u * static_cast<unsigned>(row_idx) +
                       static_cast<unsigned>(s));
      std::uniform_real_distribution<double> unit(-1.0, 1.0);
      std::uniform_real_distribution<double> frac(0.5, 1.0);
      std::array<double, 4> coeff;
      for (auto& c : coeff) c = unit(rng);
      double peak = 0;
      for (size_t i = 1; i + 1 < on_ref.size(); ++i) {
        const double t = static_cast<double>(i) / (on_ref.size() - 1);
        double prof = 0;
        for (int m = 0; m < 4; ++m) {
          prof += coeff[static_cast<size_t>(m)] * std::sin((m + 1) * M_PI * t);
        }
        peak = std::max(peak, std::abs(prof));
      }
      if (peak == 0) peak = 1;
      double scale = eta * frac(rng) / peak;

      double forward = 0;
      std::vector<Vec> phi;
      bool accepted = false;
      for (int attempt = 0; attempt < 20; ++attempt) {
        phi = on_ref;
        for (size_t i = 1; i + 1 < phi.size(); ++i) {
          const double t = static_cast<double>(i) / (phi.size() - 1);
          double prof = 0;
          for (int m = 0; m < 4; ++m) {
            prof +=
                coeff[static_cast<size_t>(m)] * std::sin((m + 1) * M_PI * t);
          }
          phi[i] += scale * prof * local_orthogonal(on_ref, i);
        }
        forward = one_sided_distance(Polyline(phi), m_ref, step);
        if (forward <= eta) {
          accepted = true;
          break;
        }
        scale *= 0.8 * eta / forward;
      }
      if (!accepted) {
        throw SamplingFailure("could not sample a curve within eta = " +
                              std::to_string(eta));
      }
      row.max_forward = std::max(row.max_forward, forward);
      row.max_reverse = std::max(
          row.max_reverse, one_sided_distance(m_ref, Polyline(phi), step));
    }
    out.push_back(row);
  }
  return out;
}

namespace {

/// Semicircular string between the double-well minima with spacing close to
/// the target. Constant curvature keeps the spacing-scaling measurement in
/// its asymptotic regime down to the largest tested spacing.
StringOfImages arc_string(double target_spacing) {
  const int n =
      std::max(4, static_cast<int>(std::ceil(M_PI / target_spacing)));
  std::vector<Vec> pts;
  pts.reserve(static_cast<size_t>(n) + 1);
  for (int i = 0; i <= n; ++i) {
    const double theta = M_PI - M_PI * static_cast<double>(i) / n;
    Vec q(2);
    q << std::cos(theta), std::sin(theta);
    pts.push_back(q);
  }
  return StringOfImages(std::move(pts));
}

/// Distance from a point to a dense, simple, ordered polyline, using a
/// coarse vertex scan followed by an exact window search. Valid when the
/// polyline does not approach itself, which holds for the evolved arcs
/// measured here.
double point_to_dense_polyline(const Vec& q, const std::vector<Vec>& v,
                               int stride, int window) {
  const int n = static_cast<int>(v.size());
  int best_i = 0;
  double best = std::numeric_limits<double>::infinity();
  for (int i = 0; i < n; i += stride) {
    const double d2 = (q - v[static_cast<size_t>(i)]).squaredNorm();
    if (d2 < best) {
      best = d2;
      best_i = i;
    }
  }
  const int lo = std::max(0, best_i - window);
  const int hi = std::min(n - 2, best_i + window);
  double out = std::numeric_limits<double>::infinity();
  for (int i = lo; i <= hi; ++i) {
    const Vec& a = v[static_cast<size_t>(i)];
    const Vec ab = v[static_cast<size_t>(i) + 1] - a;
    const double len2 = ab.squaredNorm();
    double d;
    if (len2 == 0) {
      d = (q - a).norm();
    } else {
      const double t = std::clamp((q - a).dot(ab) / len2, 0.0, 1.0);
      d = (q - a - t * ab).norm();
    }
    out = std::min(out, d);
  }
  return out;
}

/// Hausdorff distance between a dense polyline (ordered samples of a smooth
/// curve) and a coarse polyline, accurate to roughly the dense resolution.
double dense_coarse_hausdorff(const std::vector<Vec>& dense,
                              const Polyline& coarse, double sample_step) {
  // dense -> coarse: exact distances from dense vertices
  double sup = 0;
  for (const auto& q : dense) {
    double best = std::numeric_limits<double>::infinity();
    const auto& cv = coarse.vertices();
    for (size_t i = 0; i + 1 < cv.size(); ++i) {
      const Vec ab = cv[i + 1] - cv[i];
      const double len2 = ab.squaredNorm();
      double d;
      if (len2 == 0) {
        d = (q - cv[i]).norm();
      } else {
        const double t = std::clamp((q - cv[i]).dot(ab) / len2, 0.0, 1.0);
        d = (q - cv[i] - t * ab).norm();
      }
      best = std::min(best, d);
    }
    sup = std::max(sup, best);
  }
  // coarse -> dense: sampled along coarse, windowed search into dense
  const int stride = 50;
  const int window = 120;
  const auto& cv = coarse.vertices();
  for (size_t i = 0; i + 1 < cv.size(); ++i) {
    const double seg = (cv[i + 1] - cv[i]).norm();
    const int n = std::max(1, static_cast<int>(std::ceil(seg / sample_step)));
    for (int k = 0; k <= n; ++k) {
      const double t = static_cast<double>(k) / n;
      const Vec q = (1.0 - t) * cv[i] + t * cv[i + 1];
      sup = std::max(sup, point_to_dense_polyline(q, dense, stride, window));
    }
  }
  return sup;
}

}  // namespace

CommuteSweep commute_sweep(const Potential& double_well,
                           const std::vector<double>& spacings,
                           const std::vector<double>& dts) {
  CommuteSweep sweep;
  sweep.spacings = spacings;
  sweep.dts = dts;
  const FlowOracleConfig oracle{1e-11, 1e-11, 10'000'000};
  constexpr int kDense = 20000;
  constexpr double kStep = 1e-4;
  for (const double m : spacings) {
    const StringOfImages x = arc_string(m);
    const std::vector<Vec> dense =
        sample_polyline(interpolant(x), kDense + 1);
    std::vector<double> row;
    for (const double dt : dts) {
      std::vector<Vec> evolved_dense = dense;
      for (auto& q : evolved_dense) {
        q = reference_flow(oracle, double_well, q, dt);
      }
      std::vector<Vec> evolved_images = x.images();
      for (auto& q : evolved_images) {
        q = reference_flow(oracle, double_well, q, dt);
      }
      row.push_back(dense_coarse_hausdorff(evolved_dense,
                                           Polyline(evolved_images), kStep));
    }
    sweep.err.push_back(row);
  }
  // bivariate least squares: log E = c + p log m + q log dt
  const size_t nm = spacings.size();
  const size_t nd = dts.size();
  Mat design(nm * nd, 3);
  Vec rhs(nm * nd);
  for (size_t i = 0; i < nm; ++i) {
    for (size_t j = 0; j < nd; ++j) {
      const auto r = static_cast<Eigen::Index>(i * nd + j);
      design(r, 0) = 1.0;
      design(r, 1) = std::log(spacings[i]);
      design(r, 2) = std::log(dts[j]);
      rhs(r) = std::log(sweep.err[i][j]);
    }
  }
  const Vec sol = design.colPivHouseholderQr().solve(rhs);
  sweep.slope_m = sol[1];
  sweep.slope_dt = sol[2];
  return sweep;
}

bool spacing_growth_probe(const Potential& p, double lipschitz, double K,
                          double dt, Scheme scheme, int n_strings,
                          unsigned seed, std::string* detail) {
  const double tau = std::log(K) / lipschitz;
  const long n_max = static_cast<long>(std::floor(tau / dt));
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> unit(-1.5, 1.5);
  IntegratorSpec spec{scheme, dt};
  for (int trial = 0; trial < n_strings; ++trial) {
    std::vector<Vec> pts;
    const int n_img = 5 + trial % 12;
    for (int i = 0; i < n_img; ++i) {
      Vec q(p.dim());
      for (int j = 0; j < q.size(); ++j) q[j] = unit(rng);
      pts.push_back(q);
    }
    StringOfImages x(pts);
    const double bound = K * spacing(x);
    for (long n = 1; n <= n_max; ++n) {
      x = advance_string(spec, p, x);
      if (spacing(x) > bound) {
        if (detail != nullptr) {
          *detail = "violated at trial " + std::to_string(trial) + ", step " +
                    std::to_string(n) + " of " + std::to_string(n_max);
        }
        return false;
      }
    }
  }
  if (detail != nullptr) {
    *detail = "held over " + std::to_string(n_strings) + " strings for " +
              std::to_string(n_max) + " steps";
  }
  return true;
}

std::vector<double> truncation_errors(const Potential& p, Scheme scheme,
                                      const std::vector<double>& dts,
                                      unsigned seed, int n_points) {
  const FlowOracleConfig tight{1e-12, 1e-12, 10'000'000};
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> unit(-0.9, 0.9);
  std::vector<Vec> pts;
  for (int i = 0; i < n_points; ++i) {
    Vec q(p.dim());
    for (int j = 0; j < q.size(); ++j) q[j] = unit(rng);
    pts.push_back(q);
  }
  std::vector<double> errs;
  for (const double dt : dts) {
    IntegratorSpec spec{scheme, dt};
    double worst = 0;
    for (const auto& q : pts) {
      const Vec exact = reference_flow(tight, p, q, dt);
      worst = std::max(worst, (exact - step(spec, p, q)).norm());
    }
    errs.push_back(worst);
  }
  return errs;
}

ScalingReport lemma_scaling_checks(const Potential& quadratic,
                                   const Potential& double_well,
                                   const SolverConfig& cfg) {
  ScalingReport report;
  report.commute = commute_sweep(
      double_well, {0.4, 0.2, 0.1, 0.05},
      {1e-1, std::pow(10.0, -1.5), 1e-2, std::pow(10.0, -2.5), 1e-3});
  report.spacing_growth_ok = spacing_growth_probe(
      quadratic, 1.0, cfg.K, cfg.integrator.dt, cfg.integrator.scheme, 20,
      2024, &report.spacing_growth_detail);
  report.truncation_dts = {1e-1, 1e-2, 1e-3, 1e-4};
  report.truncation_slope_euler_quadratic = log_log_slope(
      report.truncation_dts,
      truncation_errors(quadratic, Scheme::euler, report.truncation_dts));
  report.truncation_slope_euler_double_well = log_log_slope(
      report.truncation_dts,
      truncation_errors(double_well, Scheme::euler, report.truncation_dts));
  return report;
}

}  // namespace mepstring
