#include "mepstring/potential.hpp"

#include <cmath>
#include <utility>

namespace mepstring {

bool Box::contains(const Vec& x) const {
  for (int i = 0; i < dim(); ++i) {
    if (x[i] < lo[i] || x[i] > hi[i]) return false;
  }
  return true;
}

double Box::distance_outside(const Vec& x) const {
  double sq = 0;
  for (int i = 0; i < dim(); ++i) {
    const double below = lo[i] - x[i];
    const double above = x[i] - hi[i];
    const double excess = std::max({below, above, 0.0});
    sq += excess * excess;
  }
  return std::sqrt(sq);
}

Box Box::cube(int dim, double lo_val, double hi_val) {
  Box b;
  b.lo = Vec::Constant(dim, lo_val);
  b.hi = Vec::Constant(dim, hi_val);
  return b;
}

namespace {

void require_finite(double v, const char* what) {
  if (!std::isfinite(v)) {
    throw NonFinite(std::string(what) + " evaluated to a non-finite value");
  }
}

void require_finite(const Eigen::Ref<const Mat>& m, const char* what) {
  if (!m.allFinite()) {
    throw NonFinite(std::string(what) + " evaluated to a non-finite value");
  }
}

/// Symmetrized central difference of the gradient, step 1e-4.
Mat fd_hessian(const Potential::GradientFn& grad, const Vec& x) {
  constexpr double kStep = 1e-4;
  const int d = static_cast<int>(x.size());
  Mat jac(d, d);
  Vec xp = x, xm = x;
  for (int j = 0; j < d; ++j) {
    xp[j] += kStep;
    xm[j] -= kStep;
    jac.col(j) = (grad(xp) - grad(xm)) / (2 * kStep);
    xp[j] = x[j];
    xm[j] = x[j];
  }
  return 0.5 * (jac + jac.transpose());
}

}  // namespace

Potential::Potential(std::string name, int dim, EnergyFn energy,
                     GradientFn gradient, HessianFn hessian, Box domain)
    : name_(std::move(name)),
      dim_(dim),
      energy_(std::move(energy)),
      gradient_(std::move(gradient)),
      hessian_(std::move(hessian)),
      domain_(std::move(domain)),
      analytic_hessian_(true) {}

Potential::Potential(std::string name, int dim, EnergyFn energy,
                     GradientFn gradient, Box domain)
    : name_(std::move(name)),
      dim_(dim),
      energy_(std::move(energy)),
      gradient_(std::move(gradient)),
      domain_(std::move(domain)),
      analytic_hessian_(false) {
  GradientFn g = gradient_;
  hessian_ = [g](const Vec& x) { return fd_hessian(g, x); };
}

double Potential::energy(const Vec& x) const {
  const double v = energy_(x);
  require_finite(v, "energy");
  return v;
}

Vec Potential::gradient(const Vec& x) const {
  Vec g = gradient_(x);
  require_finite(g, "gradient");
  return g;
}

Mat Potential::hessian(const Vec& x) const {
  Mat h = hessian_(x);
  require_finite(h, "hessian");
  return h;
}

void Potential::check_escape(const Vec& x) const {
  const double excess = domain_.distance_outside(x);
  if (excess > 0.1 * domain_.diagonal()) {
    throw DomainEscape("point left the computational box by " +
                       std::to_string(excess) + " (10% of diagonal is " +
                       std::to_string(0.1 * domain_.diagonal()) + ")");
  }
}

const char* to_string(CriticalKind kind) {
  switch (kind) {
    case CriticalKind::minimum: return "minimum";
    case CriticalKind::index_one_saddle: return "index_one_saddle";
    case CriticalKind::higher_index_or_degenerate:
      return "higher_index_or_degenerate";
    case CriticalKind::not_critical: return "not_critical";
  }
  return "unknown";
}

CriticalPointClass classify_critical_point(const Potential& p, const Vec& x,
                                           double grad_tol, double eig_tol) {
  if (grad_tol <= 0 || eig_tol <= 0) {
    throw Error("classification tolerances must be positive");
  }
  CriticalPointClass out;
  Eigen::SelfAdjointEigenSolver<Mat> es(p.hessian(x));
  out.eigenvalues = es.eigenvalues();  // ascending
  if (p.gradient(x).norm() > grad_tol) {
    out.kind = CriticalKind::not_critical;
    return out;
  }
  int negative = 0;
  int positive = 0;
  for (int i = 0; i < out.eigenvalues.size(); ++i) {
    if (out.eigenvalues[i] < -eig_tol) ++negative;
    if (out.eigenvalues[i] > eig_tol) ++positive;
  }
  const int d = static_cast<int>(out.eigenvalues.size());
  if (positive == d) {
    out.kind = CriticalKind::minimum;
  } else if (negative == 1 && positive == d - 1) {
    out.kind = CriticalKind::index_one_saddle;
  } else {
    out.kind = CriticalKind::higher_index_or_degenerate;
  }
  return out;
}

double estimate_lipschitz(const Potential& p, const Box& box,
                          int grid_per_axis) {
  if (grid_per_axis < 2) throw Error("grid_per_axis must be >= 2");
  const int d = box.dim();
  std::vector<int> idx(static_cast<size_t>(d), 0);
  Vec x(d);
  double best = 0;
  Eigen::SelfAdjointEigenSolver<Mat> es;
  while (true) {
    for (int i = 0; i < d; ++i) {
      const double t = static_cast<double>(idx[static_cast<size_t>(i)]) /
                       (grid_per_axis - 1);
      x[i] = box.lo[i] + t * (box.hi[i] - box.lo[i]);
    }
    es.compute(p.hessian(x), Eigen::EigenvaluesOnly);
    best = std::max(best, es.eigenvalues().cwiseAbs().maxCoeff());
    int k = 0;
    while (k < d && ++idx[static_cast<size_t>(k)] == grid_per_axis) {
      idx[static_cast<size_t>(k)] = 0;
      ++k;
    }
    if (k == d) break;
  }
  return best;
}

Vec newton_refine_critical(const Potential& p, Vec x, int max_iters) {
  for (int i = 0; i < max_iters; ++i) {
    const Vec g = p.gradient(x);
    if (g.norm() < 1e-12) break;
    x -= p.hessian(x).ldlt().solve(g);
  }
  return x;
}

Potential make_quadratic_well(int dim, Box domain) {
  if (domain.lo.size() == 0) domain = Box::cube(dim, -2.0, 2.0);
  return Potential(
      "quadratic", dim,
      [](const Vec& x) { return 0.5 * x.squaredNorm(); },
      [](const Vec& x) { return x; },
      [dim](const Vec&) { return Mat::Identity(dim, dim); },
      std::move(domain));
}

Potential make_double_well(double a, double c, Box domain) {
  if (domain.lo.size() == 0) domain = Box::cube(2, -2.0, 2.0);
  return Potential(
      "double-well", 2,
      [a, c](const Vec& p) {
        const double x = p[0], y = p[1];
        return a * (x * x - 1) * (x * x - 1) + 0.5 * c * y * y;
      },
      [a, c](const Vec& p) {
        Vec g(2);
        g[0] = 4 * a * p[0] * (p[0] * p[0] - 1);
        g[1] = c * p[1];
        return g;
      },
      [a, c](const Vec& p) {
        Mat h = Mat::Zero(2, 2);
        h(0, 0) = 12 * a * p[0] * p[0] - 4 * a;
        h(1, 1) = c;
        return h;
      },
      std::move(domain));
}

MuellerBrownParams MuellerBrownParams::standard() {
  MuellerBrownParams p;
  p.A = {-200.0, -100.0, -170.0, 15.0};
  p.a = {-1.0, -1.0, -6.5, 0.7};
  p.b = {0.0, 0.0, 11.0, 0.6};
  p.c = {-10.0, -10.0, -6.5, 0.7};
  p.x0 = {1.0, 0.0, -0.5, -1.0};
  p.y0 = {0.0, 0.5, 1.5, 1.0};
  return p;
}

Potential make_mueller_brown(const MuellerBrownParams& params, Box domain) {
  if (domain.lo.size() == 0) {
    domain.lo = Vec(2);
    domain.hi = Vec(2);
    domain.lo << -1.5, -0.2;
    domain.hi << 1.2, 2.0;
  }
  return Potential(
      "mueller-brown", 2,
      [params](const Vec& p) {
        double v = 0;
        for (int i = 0; i < 4; ++i) {
          const auto k = static_cast<size_t>(i);
          const double dx = p[0] - params.x0[k];
          const double dy = p[1] - params.y0[k];
          v += params.A[k] * std::exp(params.a[k] * dx * dx +
                                      params.b[k] * dx * dy +
                                      params.c[k] * dy * dy);
        }
        return v;
      },
      [params](const Vec& p) {
        Vec g = Vec::Zero(2);
        for (int i = 0; i < 4; ++i) {
          const auto k = static_cast<size_t>(i);
          const double dx = p[0] - params.x0[k];
          const double dy = p[1] - params.y0[k];
          const double e = params.A[k] * std::exp(params.a[k] * dx * dx +
                                                  params.b[k] * dx * dy +
                                                  params.c[k] * dy * dy);
          g[0] += e * (2 * params.a[k] * dx + params.b[k] * dy);
          g[1] += e * (params.b[k] * dx + 2 * params.c[k] * dy);
        }
        return g;
      },
      [params](const Vec& p) {
        Mat h = Mat::Zero(2, 2);
        for (int i = 0; i < 4; ++i) {
          const auto k = static_cast<size_t>(i);
          const double dx = p[0] - params.x0[k];
          const double dy = p[1] - params.y0[k];
          const double e = params.A[k] * std::exp(params.a[k] * dx * dx +
                                                  params.b[k] * dx * dy +
                                                  params.c[k] * dy * dy);
          const double u = 2 * params.a[k] * dx + params.b[k] * dy;
          const double w = params.b[k] * dx + 2 * params.c[k] * dy;
          h(0, 0) += e * (u * u + 2 * params.a[k]);
          h(0, 1) += e * (u * w + params.b[k]);
          h(1, 1) += e * (w * w + 2 * params.c[k]);
        }
        h(1, 0) = h(0, 1);
        return h;
      },
      std::move(domain));
}

Potential make_potential_by_name(const std::string& name, double a, double c,
                                 int dim, const Box* box_override) {
  Box box;
  if (box_override != nullptr) box = *box_override;
  if (name == "quadratic") return make_quadratic_well(dim, box);
  if (name == "double-well") return make_double_well(a, c, box);
  if (name == "mueller-brown") {
    return make_mueller_brown(MuellerBrownParams::standard(), box);
  }
  throw Error("unknown potential name: " + name +
              " (expected quadratic, double-well, or mueller-brown)");
}

}  // namespace mepstring
