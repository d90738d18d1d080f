#include "utri/triangulation.hpp"

#include <string>

namespace utri {

namespace {

std::vector<int> iota_indices(std::size_t n) {
  std::vector<int> v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = static_cast<int>(i);
  return v;
}

std::string dim_message(const char* what, int dim) {
  return std::string(what) + " (kernel dimension " + std::to_string(dim) + ")";
}

/// Least-squares scales and the residual of the completed kernel vector.
void finish_result(const StackedSystem& sys, std::span<const SymConfig> ns,
                   TriangulationResult& r) {
  const auto k = static_cast<Eigen::Index>(sys.sigma.size());
  const Eigen::VectorXd vm = r.m_delta.entries();
  r.scales.resize(k);
  const Eigen::Index rows = sys.b.rows() / k;
  for (Eigen::Index i = 0; i < k; ++i) {
    const Eigen::VectorXd image = sys.b.block(i * rows, 0, rows, sys.world_cols) * vm;
    r.scales(i) = image.dot(normalize(ns[static_cast<std::size_t>(i)].entries()));
  }
  Eigen::VectorXd full(sys.b.cols());
  full << vm, -r.scales;
  r.residual = (sys.b * full).norm() / sys.b.norm() + r.rank2_distance;
}

void attach_points(const CameraRig& rig, TriangulationResult& r,
                   double tol_rank) {
  if (r.m_delta.order() != 2) return;
  try {
    r.points = split_rank2(r.m_delta, std::sqrt(tol_rank));
  } catch (const Error&) {
    r.points.reset();
  }
  if (r.points && rig.size() == 2) {
    const WorldPoint x = r.points->first;
    const WorldPoint y = r.points->second;
    r.ambiguous = std::abs(coplanar_det(x, y, rig[0].focal(), rig[1].focal())) <
                  kIncidenceTol;
  }
}

const Eigen::Matrix<double, 5, 5>& interpolation_inverse() {
  static const Eigen::Matrix<double, 5, 5> inv = [] {
    const double nodes[5] = {-2.0, -1.0, 1.0, 2.0, 3.0};
    Eigen::Matrix<double, 5, 5> v;
    for (int i = 0; i < 5; ++i) {
      for (int k = 0; k < 5; ++k) v(i, k) = std::pow(nodes[i], k);
    }
    return Eigen::Matrix<double, 5, 5>(v.inverse());
  }();
  return inv;
}

}  // namespace

Eigen::MatrixXd stacked_lifted(const CameraRig& rig, std::span<const int> sigma,
                               int order) {
  const auto rows = static_cast<Eigen::Index>(sym_size(order, 3));
  const auto cols = static_cast<Eigen::Index>(sym_size(order, 4));
  Eigen::MatrixXd a(rows * static_cast<Eigen::Index>(sigma.size()), cols);
  for (std::size_t i = 0; i < sigma.size(); ++i) {
    a.middleRows(static_cast<Eigen::Index>(i) * rows, rows) =
        lift_matrix(rig[static_cast<std::size_t>(sigma[i])].unit_matrix(), order)
            .matrix;
  }
  return a;
}

StackedSystem build_B(const CameraRig& rig, std::span<const SymConfig> ns,
                      std::span<const int> sigma) {
  if (ns.size() != sigma.size() || ns.size() < 2) {
    throw Error(ErrorCode::kShape,
                "stacked system needs one observation per selected view, at "
                "least two views");
  }
  const int order = ns[0].order();
  for (const auto& n : ns) {
    if (n.order() != order) throw Error(ErrorCode::kShape, "mixed tensor orders");
    if (n.dim() != 3) throw Error(ErrorCode::kShape, "image tensors have dim 3");
  }
  for (int s : sigma) {
    if (s < 0 || static_cast<std::size_t>(s) >= rig.size()) {
      throw Error(ErrorCode::kOutOfRange, "view index outside the rig");
    }
  }
  StackedSystem sys;
  sys.sigma.assign(sigma.begin(), sigma.end());
  sys.order = order;
  const auto rows = static_cast<Eigen::Index>(sym_size(order, 3));
  sys.world_cols = static_cast<Eigen::Index>(sym_size(order, 4));
  const auto k = static_cast<Eigen::Index>(sigma.size());
  sys.b = Eigen::MatrixXd::Zero(k * rows, sys.world_cols + k);
  sys.b.leftCols(sys.world_cols) = stacked_lifted(rig, sigma, order);
  for (Eigen::Index i = 0; i < k; ++i) {
    sys.b.block(i * rows, sys.world_cols + i, rows, 1) =
        normalize(ns[static_cast<std::size_t>(i)].entries());
  }
  return sys;
}

std::array<double, 5> pencil_quartic(const Eigen::Matrix4d& m1,
                                     const Eigen::Matrix4d& m2) {
  const double nodes[5] = {-2.0, -1.0, 1.0, 2.0, 3.0};
  Eigen::Matrix<double, 5, 1> values;
  for (int i = 0; i < 5; ++i) {
    values(i) = (nodes[i] * m1 + (1.0 - nodes[i]) * m2).determinant();
  }
  const Eigen::Matrix<double, 5, 1> a = interpolation_inverse() * values;
  return {a(0), a(1), a(2), a(3), a(4)};
}

DoubleRootFit fit_double_roots(const std::array<double, 5>& a, double tol) {
  DoubleRootFit fit;
  for (double v : a) fit.scale = std::max(fit.scale, std::abs(v));
  if (fit.scale <= tol) {
    throw Error(ErrorCode::kAmbiguousTriangulation,
                "determinant pencil vanishes identically: the pair is coplanar "
                "with the baseline and has a second reconstruction");
  }
  if (std::abs(a[4]) <= tol * fit.scale) {
    throw Error(ErrorCode::kDegenerateConfiguration,
                "determinant pencil has a root at infinity");
  }
  fit.low_order = std::max(std::abs(a[0]), std::abs(a[1])) / fit.scale;
  fit.discriminant =
      std::abs(a[2] * a[4] - a[3] * a[3] / 4.0) / (fit.scale * fit.scale);
  fit.c = -a[3] / (2.0 * a[4]);
  if (fit.low_order > tol || fit.discriminant > tol) {
    throw Error(ErrorCode::kAmbiguousTriangulation,
                "determinant pencil is not of the form a^2 (a - c)^2 "
                "(low-order " + std::to_string(fit.low_order) +
                    ", discriminant " + std::to_string(fit.discriminant) + ")");
  }
  return fit;
}

TriangulationResult triangulate_two_view(const CameraRig& rig,
                                         const SymConfig& n1,
                                         const SymConfig& n2,
                                         const TriangulationOptions& opts) {
  if (rig.size() < 2) throw Error(ErrorCode::kShape, "two views required");
  if (n1.order() != 2 || n2.order() != 2) {
    throw Error(ErrorCode::kUnsupportedConfiguration,
                "two-view triangulation is defined for two points (m = 2)");
  }
  const std::vector<SymConfig> ns{n1, n2};
  const std::vector<int> sigma{0, 1};
  const StackedSystem sys = build_B(rig, ns, sigma);

  const RankInfo info = numerical_rank(sys.b, opts.tol_rank);
  const int kernel_dim = static_cast<int>(sys.b.cols()) - info.rank;
  if (kernel_dim < 2) {
    throw Error(ErrorCode::kOffVariety,
                dim_message("observations are off the unlabeled two-view variety",
                            kernel_dim),
                kernel_dim);
  }
  if (kernel_dim > 2) {
    throw Error(ErrorCode::kDegenerateConfiguration,
                dim_message("two-view kernel too large; an observation is "
                            "degenerate for this camera pair",
                            kernel_dim),
                kernel_dim);
  }

  const SymConfig f12 = unlabeled_focal_point(rig, sigma);
  Eigen::VectorXd fvec = Eigen::VectorXd::Zero(sys.b.cols());
  fvec.head(sys.world_cols) = f12.entries();

  // The kernel direction orthogonal to the focal component.
  const Eigen::MatrixXd kernel = smallest_right_singular_vectors(sys.b, 2);
  const Eigen::Vector2d c = kernel.transpose() * fvec;
  Eigen::VectorXd w = kernel * Eigen::Vector2d(-c(1), c(0));
  w.normalize();

  const Eigen::Matrix4d m = unvectorize(w.head(sys.world_cols), 2, 4).matrix();
  const Eigen::Matrix4d f = f12.matrix();
  DoubleRootFit fit;
  try {
    fit = fit_double_roots(pencil_quartic(m, f), opts.tol_rank);
  } catch (const Error& e) {
    throw Error(e.code(), e.what(), kernel_dim);
  }
  const Eigen::Matrix4d m_delta = fit.c * m + (1.0 - fit.c) * f;

  TriangulationResult r{.m_delta = SymConfig::from_matrix(m_delta).normalized()};
  r.kernel_dim = kernel_dim;
  const auto& s = info.singular_values;
  r.gap_ratio = s[s.size() - 3] / std::max(s[s.size() - 2], 1e-300);
  finish_result(sys, ns, r);
  for (Eigen::Index i = 0; i < r.scales.size(); ++i) {
    if (std::abs(r.scales(i)) < opts.tol_residual) {
      throw Error(ErrorCode::kDegenerateConfiguration,
                  "reconstruction projects to zero in view " +
                      std::to_string(i + 1) +
                      " (observation contains the epipole)",
                  kernel_dim);
    }
  }
  if (r.residual > opts.tol_residual) {
    throw Error(ErrorCode::kOffVariety,
                "two-view reconstruction residual " + std::to_string(r.residual) +
                    " exceeds tolerance",
                kernel_dim);
  }
  attach_points(rig, r, opts.tol_rank);
  return r;
}

TriangulationResult triangulate_multiview(const CameraRig& rig,
                                          std::span<const SymConfig> ns,
                                          const TriangulationOptions& opts) {
  if (ns.size() != rig.size()) {
    throw Error(ErrorCode::kShape, "one observation per camera required");
  }
  const std::vector<int> sigma = iota_indices(ns.size());
  const StackedSystem sys = build_B(rig, ns, sigma);
  const RankInfo info = numerical_rank(sys.b, opts.tol_rank);
  const int kernel_dim = static_cast<int>(sys.b.cols()) - info.rank;
  if (kernel_dim > 1) {
    throw Error(ErrorCode::kDegenerateConfiguration,
                dim_message("stacked system has a multi-dimensional kernel",
                            kernel_dim),
                kernel_dim);
  }
  const Eigen::VectorXd v = smallest_right_singular_vectors(sys.b, 1).col(0);
  const Eigen::VectorXd tail = v.tail(static_cast<Eigen::Index>(ns.size()));
  if (tail.cwiseAbs().maxCoeff() < opts.tol_residual * v.norm()) {
    throw Error(ErrorCode::kInconsistentData,
                "kernel vector has all scales zero", kernel_dim);
  }
  SymConfig m(sys.order, 4, v.head(sys.world_cols));
  double moved = 0.0;
  if (sys.order == 2) {
    const SymConfig projected = nearest_rank2(m);
    moved = projective_distance(m.entries(), projected.entries());
    m = projected;
  }
  TriangulationResult r{.m_delta = m.normalized()};
  r.kernel_dim = kernel_dim;
  r.rank2_distance = moved;
  const auto& s = info.singular_values;
  r.gap_ratio = s[s.size() - 2] / std::max(s[s.size() - 1], 1e-300);
  finish_result(sys, ns, r);
  attach_points(rig, r, opts.tol_rank);
  r.ambiguous = false;
  return r;
}

TriangulationResult triangulate(const CameraRig& rig,
                                std::span<const SymConfig> ns,
                                const TriangulationOptions& opts) {
  if (ns.empty() || ns.size() != rig.size()) {
    throw Error(ErrorCode::kShape, "one observation per camera required");
  }
  const int order = ns[0].order();
  const auto n = static_cast<int>(ns.size());
  if (n < 2) throw Error(ErrorCode::kShape, "at least two views required");
  if (order == 2 && n == 2) return triangulate_two_view(rig, ns[0], ns[1], opts);
  if (n < order) {
    throw Error(ErrorCode::kUnsupportedConfiguration,
                "order " + std::to_string(order) + " with " + std::to_string(n) +
                    " views: the kernel is at least two-dimensional");
  }
  return triangulate_multiview(rig, ns, opts);
}

std::vector<std::pair<double, SymConfig>> pencil_rank2_points(
    const SymConfig& m1, const SymConfig& m2, double tol) {
  if (m1.order() != 2 || m2.order() != 2 || m1.dim() != 4 || m2.dim() != 4) {
    throw Error(ErrorCode::kShape, "pencils of symmetric 4x4 matrices only");
  }
  const Eigen::Matrix4d a = m1.matrix();
  const Eigen::Matrix4d b = m2.matrix();
  if (numerical_rank(b, tol).rank != 2) {
    throw Error(ErrorCode::kPreconditionViolation,
                "pencil base point must have rank 2");
  }
  if (numerical_rank(a, tol).rank == 2 && numerical_rank(a - b, tol).rank != 4) {
    throw Error(ErrorCode::kPreconditionViolation,
                "rank-2 pencil ends must have a full-rank difference");
  }
  DoubleRootFit fit;
  try {
    fit = fit_double_roots(pencil_quartic(a, b), tol);
  } catch (const Error& e) {
    throw Error(ErrorCode::kPreconditionViolation, e.what());
  }
  std::vector<std::pair<double, SymConfig>> out;
  out.emplace_back(0.0, m2);
  out.emplace_back(fit.c, SymConfig::from_matrix(fit.c * a + (1.0 - fit.c) * b));
  if (out[1].first < out[0].first) std::swap(out[0], out[1]);
  return out;
}

}  // namespace utri
