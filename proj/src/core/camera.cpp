#include "utri/camera.hpp"

#include <string>

namespace utri {

Camera::Camera(const Matrix34& matrix, double tol_rank) : matrix_(matrix) {
  if (!matrix.allFinite()) {
    throw Error(ErrorCode::kInvalidCamera, "camera matrix is not finite");
  }
  const RankInfo info = numerical_rank(matrix, tol_rank);
  if (info.rank < 3) {
    throw Error(ErrorCode::kInvalidCamera,
                "camera matrix has rank " + std::to_string(info.rank));
  }
  Eigen::Matrix4d padded = Eigen::Matrix4d::Zero();
  padded.topRows<3>() = matrix;
  Eigen::JacobiSVD<Eigen::Matrix4d> svd(padded, Eigen::ComputeFullV);
  focal_ = normalize(WorldPoint(svd.matrixV().col(3)));
}

CameraRig CameraRig::subset(std::span<const int> indices) const {
  std::vector<Camera> picked;
  picked.reserve(indices.size());
  for (int i : indices) picked.push_back(cameras_.at(static_cast<std::size_t>(i)));
  return CameraRig(std::move(picked));
}

WorldPoint focal_point(const Camera& camera) { return camera.focal(); }

CameraRig canonical_cameras(int n) {
  if (n < 1 || n > 4) {
    throw Error(ErrorCode::kOutOfRange,
                "canonical rig has 1 to 4 cameras, got " + std::to_string(n));
  }
  std::vector<Camera> cams;
  const Eigen::Matrix4d id = Eigen::Matrix4d::Identity();
  for (int i = 0; i < n; ++i) {
    Matrix34 a;
    int row = 0;
    for (int r = 0; r < 4; ++r) {
      if (r == i) continue;
      a.row(row++) = id.row(r);
    }
    cams.emplace_back(a);
  }
  return CameraRig(std::move(cams));
}

ImagePoint project(const Camera& camera, const WorldPoint& x) {
  const WorldPoint xn = normalize(x);
  const ImagePoint image = camera.unit_matrix() * xn;
  // |A x| is bounded below by sigma_min(A) * sin(angle to the focal point).
  if (image.norm() < kIncidenceTol * kIncidenceTol) {
    throw Error(ErrorCode::kUndefinedProjection,
                "world point coincides with the focal point");
  }
  return normalize(image);
}

ImagePoint epipole(const CameraRig& rig, std::size_t k, std::size_t j) {
  if (k == j) throw Error(ErrorCode::kInvalidPair, "epipole needs k != j");
  return project(rig[k], rig[j].focal());
}

FundamentalMatrix fundamental_matrix(const CameraRig& rig, std::size_t j,
                                     std::size_t k) {
  if (j == k) {
    throw Error(ErrorCode::kInvalidPair, "fundamental matrix needs j != k");
  }
  const Matrix34 aj = rig[j].unit_matrix();
  const Matrix34 ak = rig[k].unit_matrix();
  const Eigen::Matrix3d f =
      cross_matrix(epipole(rig, k, j)) * ak * pseudo_inverse(aj);
  return FundamentalMatrix{f / f.norm(), j, k};
}

PluckerLine back_projected_line(const Camera& camera, const ImagePoint& u) {
  const Matrix34 a = camera.unit_matrix();
  const WorldPoint preimage = pseudo_inverse(a) * normalize(u);
  return line_through(camera.focal(), preimage);
}

LabeledTriangulation labeled_triangulate(const CameraRig& rig,
                                         std::span<const ImagePoint> u,
                                         double tol_rank, double tol_residual) {
  const auto n = static_cast<Eigen::Index>(rig.size());
  if (n < 2 || static_cast<Eigen::Index>(u.size()) != n) {
    throw Error(ErrorCode::kShape,
                "labeled triangulation needs one image point per camera, n >= 2");
  }
  Eigen::MatrixXd b = Eigen::MatrixXd::Zero(3 * n, 4 + n);
  for (Eigen::Index j = 0; j < n; ++j) {
    b.block<3, 4>(3 * j, 0) = rig[j].unit_matrix();
    b.block<3, 1>(3 * j, 4 + j) = normalize(u[j]);
  }
  const RankInfo info = numerical_rank(b, tol_rank);
  const int kernel_dim = static_cast<int>(b.cols()) - info.rank;
  if (kernel_dim >= 2) {
    throw Error(ErrorCode::kAmbiguousTriangulation,
                "labeled triangulation kernel is " + std::to_string(kernel_dim) +
                    "-dimensional (image points are epipoles)",
                kernel_dim);
  }
  Eigen::VectorXd v = smallest_right_singular_vectors(b, 1).col(0);
  const double xnorm = v.head<4>().norm();
  if (xnorm < tol_rank) {
    throw Error(ErrorCode::kDegenerateInput,
                "labeled triangulation kernel has no world-point component");
  }
  LabeledTriangulation out;
  out.point = normalize(WorldPoint(v.head<4>()));
  // Rescale so the world part equals the normalized point; kernel is
  // (X, -lambda).
  const double s = out.point.dot(v.head<4>()) / (xnorm * xnorm);
  out.scales = -v.tail(n) / s;
  const auto& sv = info.singular_values;
  out.residual = sv[sv.size() - 1] / sv[0];
  out.off_variety = out.residual > tol_residual;
  return out;
}

bool general_position_check(const CameraRig& rig, double tol) {
  const std::size_t n = rig.size();
  std::vector<WorldPoint> f;
  for (const auto& c : rig.cameras()) f.push_back(c.focal());
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = a + 1; b < n; ++b) {
      if (chordal_distance(f[a], f[b]) < tol) return false;
      for (std::size_t c = b + 1; c < n; ++c) {
        if (collinearity_measure(f[a], f[b], f[c]) < tol) return false;
        for (std::size_t d = c + 1; d < n; ++d) {
          if (std::abs(coplanar_det(f[a], f[b], f[c], f[d])) < tol) return false;
        }
      }
    }
  }
  return true;
}

CameraRig random_rig(int n, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> entry(-20, 20);
  for (;;) {
    std::vector<Camera> cams;
    try {
      for (int i = 0; i < n; ++i) {
        Matrix34 a;
        for (int r = 0; r < 3; ++r) {
          for (int c = 0; c < 4; ++c) a(r, c) = entry(rng);
        }
        cams.emplace_back(a);
      }
    } catch (const Error&) {
      continue;
    }
    CameraRig rig(std::move(cams));
    if (general_position_check(rig)) return rig;
  }
}

}  // namespace utri
