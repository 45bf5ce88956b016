#pragma once

#include "mepstring/geometry.hpp"
#include "mepstring/potential.hpp"

namespace mepstring {

enum class Scheme { euler, heun, rk4 };

const char* to_string(Scheme s);
Scheme scheme_from_string(const std::string& name);

/// Fixed-step explicit integrator for xdot = -grad V(x).
struct IntegratorSpec {
  Scheme scheme = Scheme::euler;
  double dt = 1e-3;

  /// Local truncation order q: one-step error is O(dt^q).
  int order_q() const {
    switch (scheme) {
      case Scheme::euler: return 2;
      case Scheme::heun: return 3;
      case Scheme::rk4: return 5;
    }
    return 2;
  }
};

/// Tolerances for the adaptive high-order reference flow that stands in for
/// the exact gradient flow in all diagnostics.
struct FlowOracleConfig {
  double abs_tol = 1e-10;
  double rel_tol = 1e-10;
  long max_substeps = 10'000'000;
};

/// One step of the chosen scheme. Critical points are exact fixed points.
Vec step(const IntegratorSpec& spec, const Potential& p, const Vec& x);

/// Approximates the exact flow S_t(x) with an embedded adaptive
/// Dormand-Prince 5(4) pair. Throws StepLimit when max_substeps is exhausted
/// before reaching t.
Vec reference_flow(const FlowOracleConfig& cfg, const Potential& p, Vec x,
                   double t);

/// Advances every image independently by one step and re-pins the endpoints
/// bitwise. Step errors are rethrown with the offending image index.
StringOfImages advance_string(const IntegratorSpec& spec, const Potential& p,
                              const StringOfImages& x);

}  // namespace mepstring
