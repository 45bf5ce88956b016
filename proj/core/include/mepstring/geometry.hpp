#pragma once

#include <vector>

#include "mepstring/potential.hpp"

namespace mepstring {

/// Ordered images x_0..x_N with pinned endpoints. The first and last images
/// are the endpoints by definition and never drift: every operation that
/// produces a new string copies them bitwise.
class StringOfImages {
 public:
  explicit StringOfImages(std::vector<Vec> images);

  int dim() const { return static_cast<int>(images_.front().size()); }
  /// N (number of segments). There are N+1 images.
  int n_segments() const { return static_cast<int>(images_.size()) - 1; }
  int n_images() const { return static_cast<int>(images_.size()); }

  const Vec& image(int i) const { return images_[static_cast<size_t>(i)]; }
  const std::vector<Vec>& images() const { return images_; }
  const Vec& endpoint_lo() const { return images_.front(); }
  const Vec& endpoint_hi() const { return images_.back(); }

 private:
  std::vector<Vec> images_;
};

/// Piecewise-linear curve for distance computations.
class Polyline {
 public:
  explicit Polyline(std::vector<Vec> vertices);

  int dim() const { return static_cast<int>(vertices_.front().size()); }
  int n_vertices() const { return static_cast<int>(vertices_.size()); }
  const Vec& vertex(int i) const { return vertices_[static_cast<size_t>(i)]; }
  const std::vector<Vec>& vertices() const { return vertices_; }
  double length() const;

 private:
  std::vector<Vec> vertices_;
};

/// Cumulative and normalized arc length along a string.
struct ArcProfile {
  std::vector<double> lengths;     // lengths[i] = sum of |x_k - x_{k-1}|, k<=i
  std::vector<double> normalized;  // lengths[i] / lengths[N]
};

/// Throws DegenerateString when the total length is zero.
ArcProfile arc_lengths(const StringOfImages& x);

/// m(x) = max_i |x_i - x_{i-1}|.
double spacing(const StringOfImages& x);

/// Piecewise-linear interpolant through (knots[i], x_i) evaluated at beta.
/// Knots must be strictly increasing (BadKnots) and beta must lie inside
/// [knots.front(), knots.back()] (OutOfRange). Exact at knots.
Vec interpolate(const std::vector<double>& knots, const StringOfImages& x,
                double beta);

/// The curve Ix: the polyline through the images of x.
Polyline interpolant(const StringOfImages& x);

/// R(x): same number of images placed at equal normalized arc length along
/// Ix. Endpoints unchanged bitwise; never increases the spacing.
StringOfImages reparametrize(const StringOfImages& x);

/// Places n_segments_new+1 images at normalized arc positions i/n_segments_new
/// along Ix. Guarantees spacing <= total length / n_segments_new.
StringOfImages resample(const StringOfImages& x, int n_segments_new);

/// Point on Ix at a normalized arc position in [0, 1]. Unlike interpolate,
/// tolerates coincident consecutive images (zero arc contribution).
Vec point_at_arc(const StringOfImages& x, double normalized_position);

/// sup over points sampled along A at arc spacing <= sample_step (vertices
/// always included) of the exact point-to-polyline distance to B. The result
/// underestimates the true one-sided distance d(A, B) by at most
/// sample_step/2 because the distance to B is 1-Lipschitz along A.
double one_sided_distance(const Polyline& A, const Polyline& B,
                          double sample_step);

/// max of the two one-sided distances; symmetric by construction.
double hausdorff_distance(const Polyline& A, const Polyline& B,
                          double sample_step);

/// Default sampling step used by callers that do not fix one: a tenth of the
/// shortest nonzero segment of either polyline.
double default_sample_step(const Polyline& A, const Polyline& B);

/// Max over interior images of the component of grad V orthogonal to the
/// central-difference tangent. Images whose gradient norm is within grad_tol
/// of zero (critical points) are skipped. Zero exactly on a string that lies
/// along a minimum energy path.
double mep_residual(const StringOfImages& x, const Potential& p,
                    double grad_tol = 1e-8);

}  // namespace mepstring
