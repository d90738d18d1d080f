#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>

#include "utri/error.hpp"

namespace utri {

/// Homogeneous coordinates of a point of the projective plane (image point,
/// epipole).
using ImagePoint = Eigen::Vector3d;
/// Homogeneous coordinates of a point of projective 3-space (world point,
/// focal point).
using WorldPoint = Eigen::Vector4d;

inline constexpr double kIncidenceTol = 1e-8;

namespace detail {
// Entries below this fraction of the norm are skipped when choosing the sign.
inline constexpr double kSignThreshold = 1e-12;
}  // namespace detail

/// Unit Euclidean norm with the first non-negligible coordinate positive.
/// Already normalized input is returned bit-for-bit unchanged.
template <typename Derived>
typename Derived::PlainObject normalize(const Eigen::MatrixBase<Derived>& p) {
  const double norm = p.norm();
  if (!(norm > 0.0) || !std::isfinite(norm)) {
    throw Error(ErrorCode::kDegenerateInput,
                "cannot normalize a zero or non-finite vector");
  }
  typename Derived::PlainObject out = p;
  if (std::abs(norm - 1.0) > 4 * std::numeric_limits<double>::epsilon()) {
    out /= norm;
  }
  for (Eigen::Index i = 0; i < out.size(); ++i) {
    if (std::abs(out[i]) > detail::kSignThreshold) {
      if (out[i] < 0.0) out = -out;
      break;
    }
  }
  return out;
}

/// 1 - |<a,b>| / (|a||b|); zero for projectively equal points.
template <typename A, typename B>
double projective_distance(const Eigen::MatrixBase<A>& a,
                           const Eigen::MatrixBase<B>& b) {
  const double na = a.norm();
  const double nb = b.norm();
  if (!(na > 0.0) || !(nb > 0.0)) {
    throw Error(ErrorCode::kDegenerateInput, "zero vector in comparison");
  }
  return std::max(0.0, 1.0 - std::abs(a.dot(b)) / (na * nb));
}

template <typename A, typename B>
bool proj_equal(const Eigen::MatrixBase<A>& a, const Eigen::MatrixBase<B>& b,
                double tol = kIncidenceTol) {
  return projective_distance(a, b) < tol;
}

/// Euclidean distance between normalized representatives, insensitive to the
/// sign ambiguity. Used to cluster nearby projective points.
template <typename A, typename B>
double chordal_distance(const Eigen::MatrixBase<A>& a,
                        const Eigen::MatrixBase<B>& b) {
  const auto an = a / a.norm();
  const auto bn = b / b.norm();
  return std::min((an - bn).norm(), (an + bn).norm());
}

double collinear_det(const ImagePoint& p, const ImagePoint& q,
                     const ImagePoint& r);

double coplanar_det(const WorldPoint& p, const WorldPoint& q,
                    const WorldPoint& r, const WorldPoint& s);

/// Smallest singular value of the normalized 4x3 matrix [p q r]; zero iff the
/// three points of P^3 lie on a common line.
double collinearity_measure(const WorldPoint& p, const WorldPoint& q,
                            const WorldPoint& r);

/// A line of P^3 in Plücker coordinates (p01, p02, p03, p12, p13, p23).
struct PluckerLine {
  Eigen::Matrix<double, 6, 1> coords;

  /// p01*p23 - p02*p13 + p03*p12, on the unit-normalized coordinates.
  double plucker_relation() const;
  /// Orthonormal basis (columns) of the 2-dimensional subspace of R^4 that
  /// represents the line.
  Eigen::Matrix<double, 4, 2> span_basis() const;
  /// Distance of the normalized point from the line's subspace; zero when the
  /// point is incident.
  double incidence_residual(const WorldPoint& x) const;
};

PluckerLine line_through(const WorldPoint& x, const WorldPoint& y);

/// Reciprocal Plücker product of the unit-normalized coordinates. Vanishes iff
/// the lines are coplanar.
double reciprocal_product(const PluckerLine& a, const PluckerLine& b);

/// Intersection of two coplanar lines; std::nullopt when the lines are skew
/// at tolerance `tol`. Throws kDegenerateInput for identical lines.
std::optional<WorldPoint> lines_meet(const PluckerLine& a, const PluckerLine& b,
                                     double tol = kIncidenceTol);

}  // namespace utri
