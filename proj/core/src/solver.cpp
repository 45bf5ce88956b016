#include "mepstring/solver.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace mepstring {

std::vector<std::string> SolverConfig::validate() const {
  std::vector<std::string> issues;
  if (!(h > 0)) issues.push_back("solver.h: h > 0 required");
  if (!(K > 1)) issues.push_back("solver.K: K > 1 required");
  if (!(integrator.dt > 0)) issues.push_back("solver.dt: dt > 0 required");
  if (max_steps < 1) issues.push_back("solver.max_steps: at least 1 required");
  if (tol_displacement < 0) {
    issues.push_back("solver.tol_displacement: must be >= 0");
  }
  if (tol_residual < 0) issues.push_back("solver.tol_residual: must be >= 0");
  if (!(grad_tol > 0)) issues.push_back("solver.grad_tol: must be > 0");
  if (!(eig_tol > 0)) issues.push_back("solver.eig_tol: must be > 0");
  return issues;
}

const char* to_string(Termination t) {
  switch (t) {
    case Termination::residual_met: return "residual_met";
    case Termination::displacement_met: return "displacement_met";
    case Termination::max_steps: return "max_steps";
    case Termination::error: return "error";
  }
  return "unknown";
}

const char* to_string(InitKind k) {
  switch (k) {
    case InitKind::linear: return "linear";
    case InitKind::arc: return "arc";
    case InitKind::perturbed: return "perturbed";
  }
  return "unknown";
}

InitKind init_kind_from_string(const std::string& name) {
  if (name == "linear") return InitKind::linear;
  if (name == "arc") return InitKind::arc;
  if (name == "perturbed") return InitKind::perturbed;
  throw Error("unknown init kind: " + name +
              " (expected linear, arc, or perturbed)");
}

namespace {

/// Deterministic unit vector orthogonal to the chord: the coordinate axis
/// least aligned with the chord, Gram-Schmidt projected.
Vec orthogonal_direction(const Vec& chord) {
  const Vec u = chord.normalized();
  int k = 0;
  double best = std::abs(u[0]);
  for (int i = 1; i < u.size(); ++i) {
    if (std::abs(u[i]) < best) {
      best = std::abs(u[i]);
      k = i;
    }
  }
  Vec v = Vec::Zero(u.size());
  v[k] = 1.0;
  v -= v.dot(u) * u;
  return v.normalized();
}

double effective_grad_tol(const SolverConfig& cfg, const Potential& p) {
  return std::max(cfg.grad_tol, p.classification_floor());
}

double effective_eig_tol(const SolverConfig& cfg, const Potential& p) {
  return std::max(cfg.eig_tol, p.classification_floor());
}

}  // namespace

StringOfImages initial_string(const Potential& p, const Vec& m_lo,
                              const Vec& m_hi, int n_segments, InitKind kind,
                              double amplitude, unsigned seed,
                              const SolverConfig& cfg) {
  if (n_segments < 2) throw Error("initial_string needs N >= 2");
  const double gtol = effective_grad_tol(cfg, p);
  const double etol = effective_eig_tol(cfg, p);
  for (const Vec* m : {&m_lo, &m_hi}) {
    const auto cls = classify_critical_point(p, *m, gtol, etol);
    if (cls.kind != CriticalKind::minimum) {
      throw NotAMinimum("initial_string endpoint classifies as " +
                        std::string(to_string(cls.kind)));
    }
  }

  const int N = n_segments;
  const Vec chord = m_hi - m_lo;
  std::vector<Vec> pts(static_cast<size_t>(N) + 1);
  switch (kind) {
    case InitKind::linear: {
      for (int i = 0; i <= N; ++i) {
        const double t = static_cast<double>(i) / N;
        pts[static_cast<size_t>(i)] = m_lo + t * chord;
      }
      break;
    }
    case InitKind::arc: {
      const Vec mid = 0.5 * (m_lo + m_hi);
      const Vec half = 0.5 * chord;
      const Vec v = orthogonal_direction(chord);
      for (int i = 0; i <= N; ++i) {
        const double theta = M_PI * static_cast<double>(i) / N;
        pts[static_cast<size_t>(i)] =
            mid - std::cos(theta) * half + amplitude * std::sin(theta) * v;
      }
      break;
    }
    case InitKind::perturbed: {
      std::mt19937 rng(seed);
      std::uniform_real_distribution<double> unit(-1.0, 1.0);
      const std::array<double, 3> coeff = {unit(rng), unit(rng), unit(rng)};
      const Vec v = orthogonal_direction(chord);
      // normalize so the largest per-image displacement equals amplitude
      double peak = 0;
      for (int i = 1; i < N; ++i) {
        const double t = static_cast<double>(i) / N;
        double prof = 0;
        for (int m = 0; m < 3; ++m) {
          prof += coeff[static_cast<size_t>(m)] * std::sin((m + 1) * M_PI * t);
        }
        peak = std::max(peak, std::abs(prof));
      }
      const double scale = peak > 0 ? amplitude / peak : 0.0;
      for (int i = 0; i <= N; ++i) {
        const double t = static_cast<double>(i) / N;
        double prof = 0;
        for (int m = 0; m < 3; ++m) {
          prof += coeff[static_cast<size_t>(m)] * std::sin((m + 1) * M_PI * t);
        }
        pts[static_cast<size_t>(i)] = m_lo + t * chord + scale * prof * v;
      }
      break;
    }
  }
  pts.front() = m_lo;
  pts.back() = m_hi;
  StringOfImages x(std::move(pts));

  if (spacing(x) > cfg.h) {
    const double total = arc_lengths(x).lengths.back();
    const int n_new = static_cast<int>(std::ceil(total / cfg.h));
    x = resample(x, std::max(n_new, N));
  }
  return x;
}

StepOutcome string_method_step(const StringOfImages& x,
                               const SolverConfig& cfg, const Potential& p) {
  StringOfImages y = advance_string(cfg.integrator, p, x);
  IterationRecord rec;
  if (spacing(y) > cfg.K * cfg.h) {  // strict trigger: equality does not fire
    const ArcProfile prof = arc_lengths(y);
    const double total = prof.lengths.back();
    if (total / y.n_segments() <= cfg.h) {
      y = reparametrize(y);
      rec.reparametrized = true;
    } else {
      const int n_new = static_cast<int>(std::ceil(total / cfg.h));
      y = resample(y, n_new);
      rec.images_added = true;
    }
  }
  rec.spacing = spacing(y);
  rec.total_length = arc_lengths(y).lengths.back();
  rec.n_images = y.n_images();
  rec.residual = mep_residual(y, p, effective_grad_tol(cfg, p));
  return StepOutcome{std::move(y), rec};
}

long settling_step(const std::vector<IterationRecord>& iterations) {
  if (iterations.empty()) return 0;
  size_t best = iterations.size() - 1;
  double suffix_max = iterations.back().residual;
  for (size_t i = iterations.size(); i-- > 0;) {
    suffix_max = std::max(suffix_max, iterations[i].residual);
    if (iterations[i].residual >= suffix_max) best = i;
  }
  return iterations[best].step;
}

SaddleInfo locate_saddle(const StringOfImages& x, const Potential& p,
                         const SolverConfig& cfg) {
  if (x.n_segments() < 4) throw Error("locate_saddle needs N >= 4");
  const int n = x.n_images();
  std::vector<double> energy(static_cast<size_t>(n));
  int imax = 0;
  for (int i = 0; i < n; ++i) {
    energy[static_cast<size_t>(i)] = p.energy(x.image(i));
    if (energy[static_cast<size_t>(i)] > energy[static_cast<size_t>(imax)]) {
      imax = i;
    }
  }
  if (imax == 0 || imax == n - 1) {
    throw NoInteriorMax(
        "maximum energy sits at an endpoint; no barrier separates the "
        "endpoints");
  }

  const ArcProfile prof = arc_lengths(x);
  const double a0 = prof.normalized[static_cast<size_t>(imax - 1)];
  const double a1 = prof.normalized[static_cast<size_t>(imax)];
  const double a2 = prof.normalized[static_cast<size_t>(imax + 1)];
  const double v0 = energy[static_cast<size_t>(imax - 1)];
  const double v1 = energy[static_cast<size_t>(imax)];
  const double v2 = energy[static_cast<size_t>(imax + 1)];

  double beta = a1;
  if (a1 > a0 && a2 > a1) {
    const double d1 = (v1 - v0) / (a1 - a0);
    const double d2 = (v2 - v1) / (a2 - a1);
    const double dd = (d2 - d1) / (a2 - a0);
    if (dd < 0) {
      beta = 0.5 * (a0 + a1) - d1 / (2 * dd);
      beta = std::clamp(beta, a0, a2);
    }
  }

  SaddleInfo out;
  out.point = point_at_arc(x, beta);
  out.classification = classify_critical_point(
      p, out.point, effective_grad_tol(cfg, p), effective_eig_tol(cfg, p));
  return out;
}

RunReport run(const SolverConfig& cfg, const Potential& p,
              const StringOfImages& x0, const Polyline* reference,
              double ref_sample_step) {
  {
    const auto issues = cfg.validate();
    if (!issues.empty()) throw ValidationError(issues);
  }
  RunReport report{.final_string = x0};
  StringOfImages x = x0;
  Termination termination = Termination::max_steps;

  for (long n = 1; n <= cfg.max_steps; ++n) {
    StepOutcome outcome{x, {}};
    try {
      outcome = string_method_step(x, cfg, p);
    } catch (const DomainEscape& e) {
      report.termination = Termination::error;
      report.error_message = e.what();
      report.final_string = x;
      report.settling_step = settling_step(report.iterations);
      return report;
    }
    IterationRecord& rec = outcome.record;
    rec.step = n;
    rec.sim_time = static_cast<double>(n) * cfg.integrator.dt;
    if (reference != nullptr) {
      rec.d_to_reference = hausdorff_distance(interpolant(outcome.string),
                                              *reference, ref_sample_step);
    }

    bool displacement_met = false;
    if (!rec.reparametrized && !rec.images_added) {
      double max_move = 0;
      for (int i = 0; i < x.n_images(); ++i) {
        max_move = std::max(max_move,
                            (outcome.string.image(i) - x.image(i)).norm());
      }
      displacement_met = max_move / cfg.integrator.dt < cfg.tol_displacement;
    }

    x = std::move(outcome.string);
    report.iterations.push_back(rec);

    if (displacement_met) {
      termination = Termination::displacement_met;
      break;
    }
    if (rec.residual < cfg.tol_residual) {
      termination = Termination::residual_met;
      break;
    }
  }

  report.final_string = std::move(x);
  report.termination = termination;
  report.settling_step = settling_step(report.iterations);
  try {
    report.saddle = locate_saddle(report.final_string, p, cfg);
    const double v_lo = p.energy(report.final_string.endpoint_lo());
    const double v_hi = p.energy(report.final_string.endpoint_hi());
    report.barrier = p.energy(report.saddle->point) - std::min(v_lo, v_hi);
  } catch (const NoInteriorMax&) {
    report.saddle.reset();
  }
  return report;
}

}  // namespace mepstring
