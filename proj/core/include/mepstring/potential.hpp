#pragma once

#include <Eigen/Dense>

#include <array>
#include <functional>
#include <string>

#include "mepstring/errors.hpp"

namespace mepstring {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

/// Axis-aligned computational box.
struct Box {
  Vec lo;
  Vec hi;

  int dim() const { return static_cast<int>(lo.size()); }
  double diagonal() const { return (hi - lo).norm(); }
  bool contains(const Vec& x) const;
  /// Euclidean distance from x to the box (0 inside).
  double distance_outside(const Vec& x) const;

  static Box cube(int dim, double lo_val, double hi_val);
};

/// Differentiable scalar field on R^d with analytic (or finite-difference
/// fallback) derivatives, restricted to a computational box. Immutable after
/// construction; every member function is pure and safe to call concurrently.
class Potential {
 public:
  using EnergyFn = std::function<double(const Vec&)>;
  using GradientFn = std::function<Vec(const Vec&)>;
  using HessianFn = std::function<Mat(const Vec&)>;

  /// Analytic Hessian variant.
  Potential(std::string name, int dim, EnergyFn energy, GradientFn gradient,
            HessianFn hessian, Box domain);

  /// Energy+gradient only; the Hessian falls back to a symmetrized central
  /// difference of the gradient (step 1e-4) and classification tolerances
  /// widen accordingly.
  Potential(std::string name, int dim, EnergyFn energy, GradientFn gradient,
            Box domain);

  double energy(const Vec& x) const;   // throws NonFinite
  Vec gradient(const Vec& x) const;    // throws NonFinite
  Mat hessian(const Vec& x) const;     // throws NonFinite

  const std::string& name() const { return name_; }
  int dim() const { return dim_; }
  const Box& domain() const { return domain_; }
  bool analytic_hessian() const { return analytic_hessian_; }

  /// Smallest tolerance at which critical-point classification is meaningful
  /// for this potential (wider when the Hessian is finite-difference).
  double classification_floor() const {
    return analytic_hessian_ ? 0.0 : 1e-4;
  }

  /// Throws DomainEscape when x lies outside the box by more than 10% of the
  /// box diagonal. Evaluation closer to the box is permitted.
  void check_escape(const Vec& x) const;

 private:
  std::string name_;
  int dim_;
  EnergyFn energy_;
  GradientFn gradient_;
  HessianFn hessian_;
  Box domain_;
  bool analytic_hessian_;
};

enum class CriticalKind {
  minimum,
  index_one_saddle,
  higher_index_or_degenerate,
  not_critical,
};

const char* to_string(CriticalKind kind);

struct CriticalPointClass {
  CriticalKind kind = CriticalKind::not_critical;
  Vec eigenvalues;  // spectrum of the Hessian, sorted ascending
};

/// Classifies x by gradient norm and Hessian spectrum. Points with
/// |grad V| > grad_tol are not_critical; otherwise the signature of the
/// spectrum against eig_tol decides.
CriticalPointClass classify_critical_point(const Potential& p, const Vec& x,
                                           double grad_tol, double eig_tol);

/// Estimates the Lipschitz constant of grad V on the box as the maximum
/// Hessian spectral norm over an inclusive grid with grid_per_axis points
/// per axis.
double estimate_lipschitz(const Potential& p, const Box& box,
                          int grid_per_axis);

/// Newton iteration on grad V = 0 from a starting guess. Converges to the
/// critical point whose basin contains the guess; used to pin endpoint
/// minima to machine precision.
Vec newton_refine_critical(const Potential& p, Vec x, int max_iters = 50);

// ---- built-in potentials ----

/// V(x) = |x|^2 / 2 in any dimension. Exact flow S_t(x) = exp(-t) x.
Potential make_quadratic_well(int dim, Box domain = {});

/// V(x, y) = a (x^2 - 1)^2 + (c/2) y^2. Minima at (+-1, 0), index-one saddle
/// at the origin; the minimum energy path is the segment [-1, 1] x {0}.
Potential make_double_well(double a = 1.0, double c = 2.0, Box domain = {});

/// Four-Gaussian surface parameters; the standard set ships in
/// data/mueller_brown.json.
struct MuellerBrownParams {
  std::array<double, 4> A;
  std::array<double, 4> a;
  std::array<double, 4> b;
  std::array<double, 4> c;
  std::array<double, 4> x0;
  std::array<double, 4> y0;

  static MuellerBrownParams standard();
};

Potential make_mueller_brown(const MuellerBrownParams& params =
                                 MuellerBrownParams::standard(),
                             Box domain = {});

/// Lookup by CLI/config name: "quadratic", "double-well", "mueller-brown".
/// a/c apply to the double well, dim to the quadratic well; a non-empty box
/// overrides the built-in default.
Potential make_potential_by_name(const std::string& name, double a, double c,
                                 int dim, const Box* box_override = nullptr);

}  // namespace mepstring
