#include "mepstring/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace mepstring {

namespace {

void require_same_dim(const std::vector<Vec>& pts, const char* what) {
  if (pts.empty()) throw Error(std::string(what) + " must not be empty");
  const auto d = pts.front().size();
  for (const auto& p : pts) {
    if (p.size() != d) {
      throw Error(std::string(what) + " has mixed dimensions");
    }
    if (!p.allFinite()) {
      throw NonFinite(std::string(what) + " contains a non-finite coordinate");
    }
  }
}

/// Piecewise-linear interpolation with non-decreasing knots; ties contribute
/// zero-width intervals (the value at a tie is the later image). Used by
/// reparametrize/resample, which must tolerate coincident images.
Vec interp_monotone(const std::vector<double>& knots,
                    const std::vector<Vec>& pts, double beta) {
  const size_t n = knots.size();
  if (beta <= knots.front()) return pts.front();
  if (beta >= knots.back()) return pts.back();
  // last interval [knots[i], knots[i+1]] with knots[i] <= beta
  auto it = std::upper_bound(knots.begin(), knots.end(), beta);
  size_t i = static_cast<size_t>(it - knots.begin()) - 1;
  while (i + 1 < n && knots[i + 1] <= knots[i]) ++i;  // skip zero-width
  const double w = knots[i + 1] - knots[i];
  if (w <= 0) return pts[i];
  const double t0 = (knots[i + 1] - beta) / w;
  const double t1 = (beta - knots[i]) / w;
  return t0 * pts[i] + t1 * pts[i + 1];
}

double point_segment_distance(const Vec& p, const Vec& a, const Vec& b) {
  const Vec ab = b - a;
  const double len2 = ab.squaredNorm();
  if (len2 == 0) return (p - a).norm();
  const double t = std::clamp((p - a).dot(ab) / len2, 0.0, 1.0);
  return (p - a - t * ab).norm();
}

double point_polyline_distance(const Vec& p, const Polyline& poly) {
  double best = std::numeric_limits<double>::infinity();
  const auto& v = poly.vertices();
  for (size_t i = 0; i + 1 < v.size(); ++i) {
    best = std::min(best, point_segment_distance(p, v[i], v[i + 1]));
  }
  return best;
}

}  // namespace

StringOfImages::StringOfImages(std::vector<Vec> images)
    : images_(std::move(images)) {
  require_same_dim(images_, "string images");
  if (images_.size() < 2) {
    throw Error("a string needs at least two images (N >= 1)");
  }
}

Polyline::Polyline(std::vector<Vec> vertices) : vertices_(std::move(vertices)) {
  require_same_dim(vertices_, "polyline vertices");
  if (vertices_.size() < 2) {
    throw Error("a polyline needs at least two vertices");
  }
}

double Polyline::length() const {
  double total = 0;
  for (size_t i = 0; i + 1 < vertices_.size(); ++i) {
    total += (vertices_[i + 1] - vertices_[i]).norm();
  }
  return total;
}

ArcProfile arc_lengths(const StringOfImages& x) {
  const auto& imgs = x.images();
  ArcProfile out;
  out.lengths.resize(imgs.size());
  out.lengths[0] = 0;
  for (size_t i = 1; i < imgs.size(); ++i) {
    out.lengths[i] = out.lengths[i - 1] + (imgs[i] - imgs[i - 1]).norm();
  }
  const double total = out.lengths.back();
  if (total <= 0) {
    throw DegenerateString("all images coincide: total arc length is zero");
  }
  out.normalized.resize(imgs.size());
  for (size_t i = 0; i < imgs.size(); ++i) {
    out.normalized[i] = out.lengths[i] / total;
  }
  out.normalized.back() = 1.0;
  return out;
}

double spacing(const StringOfImages& x) {
  double m = 0;
  const auto& imgs = x.images();
  for (size_t i = 1; i < imgs.size(); ++i) {
    m = std::max(m, (imgs[i] - imgs[i - 1]).norm());
  }
  return m;
}

Vec interpolate(const std::vector<double>& knots, const StringOfImages& x,
                double beta) {
  if (knots.size() != static_cast<size_t>(x.n_images())) {
    throw BadKnots("knot count must match image count");
  }
  for (size_t i = 1; i < knots.size(); ++i) {
    if (!(knots[i] > knots[i - 1])) {
      throw BadKnots("knots must be strictly increasing");
    }
  }
  if (beta < knots.front() || beta > knots.back()) {
    throw OutOfRange("interpolation parameter outside the knot range");
  }
  // exact at knots
  for (size_t i = 0; i < knots.size(); ++i) {
    if (beta == knots[i]) return x.image(static_cast<int>(i));
  }
  return interp_monotone(knots, x.images(), beta);
}

Polyline interpolant(const StringOfImages& x) { return Polyline(x.images()); }

StringOfImages reparametrize(const StringOfImages& x) {
  return resample(x, x.n_segments());
}

StringOfImages resample(const StringOfImages& x, int n_segments_new) {
  if (n_segments_new < 1) throw Error("resample needs at least one segment");
  const ArcProfile prof = arc_lengths(x);  // DegenerateString on zero length
  std::vector<Vec> out;
  out.reserve(static_cast<size_t>(n_segments_new) + 1);
  out.push_back(x.endpoint_lo());
  for (int i = 1; i < n_segments_new; ++i) {
    const double beta = static_cast<double>(i) / n_segments_new;
    out.push_back(interp_monotone(prof.normalized, x.images(), beta));
  }
  out.push_back(x.endpoint_hi());
  return StringOfImages(std::move(out));
}

Vec point_at_arc(const StringOfImages& x, double normalized_position) {
  if (normalized_position < 0 || normalized_position > 1) {
    throw OutOfRange("normalized arc position must lie in [0, 1]");
  }
  const ArcProfile prof = arc_lengths(x);
  return interp_monotone(prof.normalized, x.images(), normalized_position);
}

double one_sided_distance(const Polyline& A, const Polyline& B,
                          double sample_step) {
  if (sample_step <= 0) throw Error("sample_step must be positive");
  const auto& v = A.vertices();
  double sup = point_polyline_distance(v.front(), B);
  for (size_t i = 0; i + 1 < v.size(); ++i) {
    const double seg = (v[i + 1] - v[i]).norm();
    const int n = std::max(1, static_cast<int>(std::ceil(seg / sample_step)));
    for (int k = 1; k <= n; ++k) {
      const double t = static_cast<double>(k) / n;
      const Vec p = (1.0 - t) * v[i] + t * v[i + 1];
      sup = std::max(sup, point_polyline_distance(p, B));
    }
  }
  return sup;
}

double hausdorff_distance(const Polyline& A, const Polyline& B,
                          double sample_step) {
  return std::max(one_sided_distance(A, B, sample_step),
                  one_sided_distance(B, A, sample_step));
}

double default_sample_step(const Polyline& A, const Polyline& B) {
  double min_seg = std::numeric_limits<double>::infinity();
  for (const Polyline* poly : {&A, &B}) {
    const auto& v = poly->vertices();
    for (size_t i = 0; i + 1 < v.size(); ++i) {
      const double seg = (v[i + 1] - v[i]).norm();
      if (seg > 0) min_seg = std::min(min_seg, seg);
    }
  }
  if (!std::isfinite(min_seg)) {
    throw DegenerateString("both polylines have zero length");
  }
  return min_seg / 10.0;
}

double mep_residual(const StringOfImages& x, const Potential& p,
                    double grad_tol) {
  if (x.n_segments() < 2) {
    throw Error("mep_residual needs at least two segments");
  }
  double worst = 0;
  for (int i = 1; i < x.n_segments(); ++i) {
    const Vec g = p.gradient(x.image(i));
    if (g.norm() <= grad_tol) continue;  // critical points are exempt
    const Vec chord = x.image(i + 1) - x.image(i - 1);
    const double len = chord.norm();
    if (len < 1e-14) {
      throw DegenerateTangent("central-difference tangent vanished at image " +
                              std::to_string(i));
    }
    const Vec t = chord / len;
    worst = std::max(worst, (g - g.dot(t) * t).norm());
  }
  return worst;
}

}  // namespace mepstring
