#pragma once

#include <string>
#include <vector>

#include "mepstring/solver.hpp"

namespace mepstring {

/// Fixed initialization shared by every cell of a study.
struct InitSpec {
  Vec m_lo;
  Vec m_hi;
  InitKind kind = InitKind::perturbed;
  double amplitude = 0.1;
  unsigned seed = 1;
  int n_segments_hint = 32;  // lower bound; cells refine to ceil(length/h)
};

struct StudyRow {
  double h = 0;
  double dt = 0;
  Scheme scheme = Scheme::euler;
  int n_final = 0;
  long steps_to_settle = 0;
  double error_dh = 0;
  double residual = 0;
  bool ok = true;
  std::string error;
};

struct StudyTable {
  std::vector<StudyRow> rows;  // keyed uniquely by (h, dt, scheme)
  std::string reference_descriptor;
};

/// Runs the solver once per (h, dt, scheme) cell from the fixed
/// initialization and records the final Hausdorff distance to the reference
/// curve. Solver errors mark the row failed instead of aborting the study.
/// Cells are independent; n_threads > 1 runs them in a worker pool with a
/// deterministic, keyed row order.
StudyTable convergence_study(const std::vector<double>& grid_h,
                             const std::vector<double>& grid_dt,
                             const std::vector<Scheme>& schemes,
                             const SolverConfig& base, const Potential& p,
                             const Polyline& reference, const InitSpec& init,
                             int n_threads = 1, double sample_step = 1e-3);

struct StabilityTrace {
  std::vector<double> times;
  std::vector<double> d_h;  // Hausdorff distance to the reference curve
  double perturbation_amplitude = 0;
};

/// Samples the reference curve at n_vertices, displaces each interior vertex
/// orthogonally by a deterministic sinusoidal profile of the given
/// amplitude, evolves every vertex with the reference flow, and records the
/// Hausdorff distance to the reference at n_checkpoints times up to
/// horizon_t.
StabilityTrace stability_probe(const Potential& p, const Polyline& m_ref,
                               double amplitude, int n_vertices,
                               double horizon_t, int n_checkpoints,
                               const FlowOracleConfig& oracle);

struct OneSidedRow {
  double eta = 0;           // bound imposed on d(curve, M)
  double max_forward = 0;   // measured max d(curve, M) over the samples
  double max_reverse = 0;   // measured max d(M, curve) over the samples
};

/// For each eta, rejection-samples 50 seeded perturbed curves phi between
/// the endpoints of m_ref with d(phi, M) <= eta and records the worst
/// reverse distance d(M, phi). The reverse distances must shrink with eta.
std::vector<OneSidedRow> one_sided_lemma_probe(const Potential& p,
                                               const Polyline& m_ref,
                                               const std::vector<double>& etas,
                                               int n_samples = 50,
                                               unsigned seed = 7);

/// Sweep of the evolve/interpolate commutation error
/// d_H(S_dt Ix, I S_dt x) over string spacings and time steps, with fitted
/// log-log exponents.
struct CommuteSweep {
  std::vector<double> spacings;
  std::vector<double> dts;
  std::vector<std::vector<double>> err;  // [spacing][dt]
  double slope_m = 0;
  double slope_dt = 0;
};

/// Measures the commutation error on a constant-curvature string between
/// the double-well minima, evolving a dense sampling of Ix with the
/// reference flow.
CommuteSweep commute_sweep(const Potential& double_well,
                           const std::vector<double>& spacings,
                           const std::vector<double>& dts);

/// Verifies m(Sbar^n x) <= K m(x) for all n <= floor(log(K)/(L dt)) over
/// seeded random strings on a potential with Lipschitz constant L.
bool spacing_growth_probe(const Potential& p, double lipschitz, double K,
                          double dt, Scheme scheme, int n_strings,
                          unsigned seed, std::string* detail = nullptr);

/// Max one-step deviation between the scheme and the reference flow over
/// seeded base points, per dt value.
std::vector<double> truncation_errors(const Potential& p, Scheme scheme,
                                      const std::vector<double>& dts,
                                      unsigned seed = 42, int n_points = 10);

/// Measured scaling exponents and sweep tables for the discretization
/// diagnostics: commutation of evolution with interpolation, spacing growth
/// under repeated steps, and integrator truncation order.
struct ScalingReport {
  CommuteSweep commute;
  bool spacing_growth_ok = false;
  std::string spacing_growth_detail;
  std::vector<double> truncation_dts;
  double truncation_slope_euler_quadratic = 0;
  double truncation_slope_euler_double_well = 0;
};

ScalingReport lemma_scaling_checks(const Potential& quadratic,
                                   const Potential& double_well,
                                   const SolverConfig& cfg);

/// Least-squares slope of log(y) against log(x).
double log_log_slope(const std::vector<double>& x,
                     const std::vector<double>& y);

/// First index from which the residual column never again exceeds its value
/// at that index.
long settling_step(const std::vector<IterationRecord>& iterations);

}  // namespace mepstring
