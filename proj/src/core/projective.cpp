#include "utri/projective.hpp"

namespace utri {

double collinear_det(const ImagePoint& p, const ImagePoint& q,
                     const ImagePoint& r) {
  Eigen::Matrix3d m;
  m << normalize(p), normalize(q), normalize(r);
  return m.determinant();
}

double coplanar_det(const WorldPoint& p, const WorldPoint& q,
                    const WorldPoint& r, const WorldPoint& s) {
  Eigen::Matrix4d m;
  m << normalize(p), normalize(q), normalize(r), normalize(s);
  return m.determinant();
}

double collinearity_measure(const WorldPoint& p, const WorldPoint& q,
                            const WorldPoint& r) {
  Eigen::Matrix<double, 4, 3> m;
  m << normalize(p), normalize(q), normalize(r);
  return m.jacobiSvd().singularValues()(2);
}

double PluckerLine::plucker_relation() const {
  const auto p = normalize(coords);
  return p(0) * p(5) - p(1) * p(4) + p(2) * p(3);
}

Eigen::Matrix<double, 4, 2> PluckerLine::span_basis() const {
  // Primal Plücker matrix X Y^T - Y X^T; its column space is the line.
  const auto& p = coords;
  Eigen::Matrix4d l;
  l << 0.0, p(0), p(1), p(2),
       -p(0), 0.0, p(3), p(4),
       -p(1), -p(3), 0.0, p(5),
       -p(2), -p(4), -p(5), 0.0;
  Eigen::JacobiSVD<Eigen::Matrix4d> svd(l, Eigen::ComputeFullU);
  return svd.matrixU().leftCols<2>();
}

double PluckerLine::incidence_residual(const WorldPoint& x) const {
  const Eigen::Matrix<double, 4, 2> u = span_basis();
  const WorldPoint xn = x.normalized();
  return (xn - u * (u.transpose() * xn)).norm();
}

PluckerLine line_through(const WorldPoint& x, const WorldPoint& y) {
  const WorldPoint a = normalize(x);
  const WorldPoint b = normalize(y);
  if (projective_distance(a, b) < kIncidenceTol * kIncidenceTol) {
    throw Error(ErrorCode::kDegenerateInput,
                "line_through: points are projectively equal");
  }
  PluckerLine line;
  auto pij = [&](int i, int j) { return a(i) * b(j) - a(j) * b(i); };
  line.coords << pij(0, 1), pij(0, 2), pij(0, 3), pij(1, 2), pij(1, 3),
      pij(2, 3);
  return line;
}

double reciprocal_product(const PluckerLine& a, const PluckerLine& b) {
  const auto p = a.coords.normalized();
  const auto q = b.coords.normalized();
  return p(0) * q(5) - p(1) * q(4) + p(2) * q(3) + p(3) * q(2) -
         p(4) * q(1) + p(5) * q(0);
}

std::optional<WorldPoint> lines_meet(const PluckerLine& a, const PluckerLine& b,
                                     double tol) {
  if (chordal_distance(a.coords, b.coords) < tol) {
    throw Error(ErrorCode::kDegenerateInput,
                "lines_meet: identical lines meet in infinitely many points");
  }
  if (std::abs(reciprocal_product(a, b)) > tol) return std::nullopt;

  Eigen::Matrix4d stacked;
  stacked << a.span_basis(), -b.span_basis();
  Eigen::JacobiSVD<Eigen::Matrix4d> svd(stacked, Eigen::ComputeFullV);
  const Eigen::Vector4d c = svd.matrixV().col(3);
  const WorldPoint p = a.span_basis() * c.head<2>();
  return normalize(p);
}

}  // namespace utri
