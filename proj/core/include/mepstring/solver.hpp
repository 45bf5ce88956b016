#pragma once

#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "mepstring/geometry.hpp"
#include "mepstring/integrator.hpp"
#include "mepstring/potential.hpp"

namespace mepstring {

struct SolverConfig {
  double h = 0.1;    // target image spacing
  double K = 1.5;    // spacing trigger multiplier, > 1
  IntegratorSpec integrator{};
  long max_steps = 100000;
  double tol_displacement = 1e-8;  // max |x^{n+1}-x^n| / dt below this stops
  double tol_residual = 1e-6;      // MEP residual below this stops
  double grad_tol = 1e-8;
  double eig_tol = 1e-8;

  /// Returns every violated constraint (empty when valid).
  std::vector<std::string> validate() const;
};

struct IterationRecord {
  long step = 0;
  double sim_time = 0;      // step * dt
  double spacing = 0;       // m(x^{n+1}) after trigger handling
  double total_length = 0;
  int n_images = 0;
  bool reparametrized = false;
  bool images_added = false;
  double residual = 0;
  std::optional<double> d_to_reference;
};

enum class Termination { residual_met, displacement_met, max_steps, error };

const char* to_string(Termination t);

struct SaddleInfo {
  Vec point;
  CriticalPointClass classification;
};

struct RunReport {
  StringOfImages final_string;
  std::vector<IterationRecord> iterations;
  std::optional<SaddleInfo> saddle;
  double barrier = std::numeric_limits<double>::quiet_NaN();
  Termination termination = Termination::error;
  std::string error_message;
  /// First step from which the residual never again exceeds its value there.
  long settling_step = 0;
};

enum class InitKind { linear, arc, perturbed };

const char* to_string(InitKind k);
InitKind init_kind_from_string(const std::string& name);

/// Builds an initial string between two minima. Endpoints must classify as
/// minima under the configured tolerances (NotAMinimum). If the construction
/// violates m(x0) <= h, the string is resampled to ceil(length/h) segments.
///   linear    — equally spaced points on the chord,
///   arc       — half-ellipse bulging by `amplitude` orthogonally to the chord,
///   perturbed — linear plus seeded orthogonal sinusoidal noise.
StringOfImages initial_string(const Potential& p, const Vec& m_lo,
                              const Vec& m_hi, int n_segments, InitKind kind,
                              double amplitude, unsigned seed,
                              const SolverConfig& cfg);

struct StepOutcome {
  StringOfImages string;
  IterationRecord record;
};

/// One iteration of the string method: advance all images, then if the
/// spacing exceeds K h either reparametrize (mean segment <= h) or add
/// images (resample to ceil(length/h) segments).
StepOutcome string_method_step(const StringOfImages& x,
                               const SolverConfig& cfg, const Potential& p);

/// Full loop: iterates string_method_step until the displacement criterion
/// holds on a step without reparametrization/addition, the residual drops
/// below tol_residual, or max_steps is reached. When a reference curve is
/// given, each record carries d_H(Ix^n, reference) sampled at
/// ref_sample_step. DomainEscape aborts with a partial report
/// (termination = error).
RunReport run(const SolverConfig& cfg, const Potential& p,
              const StringOfImages& x0, const Polyline* reference = nullptr,
              double ref_sample_step = 1e-3);

/// Finds the maximum-energy interior image, refines it with one quadratic
/// fit of V over the three bracketing images' normalized arc positions, and
/// classifies the refined point. Throws NoInteriorMax when the maximum sits
/// at an endpoint.
SaddleInfo locate_saddle(const StringOfImages& x, const Potential& p,
                         const SolverConfig& cfg);

}  // namespace mepstring
