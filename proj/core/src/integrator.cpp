#include "mepstring/integrator.hpp"

#include <algorithm>
#include <cmath>

namespace mepstring {

const char* to_string(Scheme s) {
  switch (s) {
    case Scheme::euler: return "euler";
    case Scheme::heun: return "heun";
    case Scheme::rk4: return "rk4";
  }
  return "unknown";
}

Scheme scheme_from_string(const std::string& name) {
  if (name == "euler") return Scheme::euler;
  if (name == "heun") return Scheme::heun;
  if (name == "rk4") return Scheme::rk4;
  throw Error("unknown integrator: " + name +
              " (expected euler, heun, or rk4)");
}

Vec step(const IntegratorSpec& spec, const Potential& p, const Vec& x) {
  const double dt = spec.dt;
  Vec out;
  switch (spec.scheme) {
    case Scheme::euler: {
      out = x - dt * p.gradient(x);
      break;
    }
    case Scheme::heun: {
      const Vec k1 = -p.gradient(x);
      const Vec k2 = -p.gradient(x + dt * k1);
      out = x + 0.5 * dt * (k1 + k2);
      break;
    }
    case Scheme::rk4: {
      const Vec k1 = -p.gradient(x);
      const Vec k2 = -p.gradient(x + 0.5 * dt * k1);
      const Vec k3 = -p.gradient(x + 0.5 * dt * k2);
      const Vec k4 = -p.gradient(x + dt * k3);
      out = x + (dt / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4);
      break;
    }
  }
  if (!out.allFinite()) {
    throw NonFinite("integrator step produced a non-finite point");
  }
  p.check_escape(out);
  return out;
}

namespace {

// Dormand-Prince 5(4) coefficients.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187,
                 a53 = 64448.0 / 6561, a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                 a64 = 49.0 / 176, a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                 b5 = -2187.0 / 6784, b6 = 11.0 / 84;
// embedded 4th-order weights
constexpr double e1 = 5179.0 / 57600, e3 = 7571.0 / 16695, e4 = 393.0 / 640,
                 e5 = -92097.0 / 339200, e6 = 187.0 / 2100, e7 = 1.0 / 40;

}  // namespace

Vec reference_flow(const FlowOracleConfig& cfg, const Potential& p, Vec x,
                   double t) {
  if (cfg.abs_tol <= 0 || cfg.rel_tol <= 0) {
    throw Error("oracle tolerances must be positive");
  }
  if (t < 0) throw Error("reference_flow needs t >= 0");
  if (t == 0) return x;

  auto f = [&p](const Vec& y) -> Vec { return -p.gradient(y); };

  double time = 0;
  Vec k1 = f(x);
  // initial step from the gradient scale
  double h = std::min(t, 0.01 * (1.0 + x.norm()) / (1.0 + k1.norm()));
  long substeps = 0;
  const int d = static_cast<int>(x.size());
  Vec y2(d), y3(d), y4(d), y5(d), y6(d), ynew(d), err(d);

  while (time < t) {
    if (++substeps > cfg.max_substeps) {
      throw StepLimit("reference flow exceeded " +
                      std::to_string(cfg.max_substeps) + " substeps");
    }
    h = std::min(h, t - time);
    y2 = x + h * (a21 * k1);
    const Vec k2 = f(y2);
    y3 = x + h * (a31 * k1 + a32 * k2);
    const Vec k3 = f(y3);
    y4 = x + h * (a41 * k1 + a42 * k2 + a43 * k3);
    const Vec k4 = f(y4);
    y5 = x + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4);
    const Vec k5 = f(y5);
    y6 = x + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5);
    const Vec k6 = f(y6);
    ynew = x + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
    const Vec k7 = f(ynew);
    err = h * ((b1 - e1) * k1 + (b3 - e3) * k3 + (b4 - e4) * k4 +
               (b5 - e5) * k5 + (b6 - e6) * k6 - e7 * k7);

    double scale = 0;
    for (int i = 0; i < d; ++i) {
      const double tol =
          cfg.abs_tol +
          cfg.rel_tol * std::max(std::abs(x[i]), std::abs(ynew[i]));
      scale += (err[i] / tol) * (err[i] / tol);
    }
    const double err_norm = std::sqrt(scale / d);

    if (err_norm <= 1.0) {
      time += h;
      x = ynew;
      k1 = k7;  // FSAL
      if (!x.allFinite()) {
        throw NonFinite("reference flow produced a non-finite point");
      }
    }
    const double factor =
        (err_norm == 0) ? 5.0
                        : std::clamp(0.9 * std::pow(err_norm, -0.2), 0.2, 5.0);
    h *= factor;
    if (h <= 0 || !std::isfinite(h)) {
      throw StepLimit("reference flow step size underflowed");
    }
  }
  return x;
}

StringOfImages advance_string(const IntegratorSpec& spec, const Potential& p,
                              const StringOfImages& x) {
  std::vector<Vec> out;
  out.reserve(static_cast<size_t>(x.n_images()));
  out.push_back(x.endpoint_lo());
  for (int i = 1; i < x.n_segments(); ++i) {
    const std::string where = " (image " + std::to_string(i) + ")";
    try {
      out.push_back(step(spec, p, x.image(i)));
    } catch (const DomainEscape& e) {
      throw DomainEscape(e.what() + where);
    } catch (const NonFinite& e) {
      throw NonFinite(e.what() + where);
    }
  }
  out.push_back(x.endpoint_hi());
  return StringOfImages(std::move(out));
}

}  // namespace mepstring
