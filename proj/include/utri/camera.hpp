#pragma once

#include <random>
#include <span>
#include <vector>

#include "utri/linalg.hpp"
#include "utri/projective.hpp"

namespace utri {

inline constexpr double kRankTol = 1e-8;

/// A pinhole camera: a real rank-3 3x4 matrix with its cached focal point.
class Camera {
 public:
  /// Throws kInvalidCamera unless the matrix has numerical rank 3.
  explicit Camera(const Matrix34& matrix, double tol_rank = kRankTol);

  const Matrix34& matrix() const { return matrix_; }
  /// Normalized kernel vector.
  const WorldPoint& focal() const { return focal_; }
  /// The matrix scaled to unit Frobenius norm.
  Matrix34 unit_matrix() const { return matrix_ / matrix_.norm(); }

 private:
  Matrix34 matrix_;
  WorldPoint focal_;
};

/// Ordered list of cameras. General position of the focal points is not
/// enforced here; see general_position_check.
class CameraRig {
 public:
  CameraRig() = default;
  explicit CameraRig(std::vector<Camera> cameras)
      : cameras_(std::move(cameras)) {}

  std::size_t size() const { return cameras_.size(); }
  const Camera& operator[](std::size_t i) const { return cameras_.at(i); }
  const std::vector<Camera>& cameras() const { return cameras_; }

  /// Rig made of the cameras at the given indices, in that order.
  CameraRig subset(std::span<const int> indices) const;

 private:
  std::vector<Camera> cameras_;
};

WorldPoint focal_point(const Camera& camera);

/// Camera i (0-based) is the identity I4 with row i deleted; its focal point
/// is e_i. Throws kOutOfRange unless 1 <= n <= 4.
CameraRig canonical_cameras(int n);

/// Normalized image of x. Throws kUndefinedProjection when x is the focal
/// point.
ImagePoint project(const Camera& camera, const WorldPoint& x);

/// Image of the focal point of camera j in camera k.
ImagePoint epipole(const CameraRig& rig, std::size_t k, std::size_t j);

/// F with (A_k X)^T F (A_j X) = 0, scaled to unit Frobenius norm.
struct FundamentalMatrix {
  Eigen::Matrix3d f;
  std::size_t j = 0;
  std::size_t k = 1;
};

/// [e_kj]_x A_k A_j^+. Throws kInvalidPair when j == k.
FundamentalMatrix fundamental_matrix(const CameraRig& rig, std::size_t j,
                                     std::size_t k);

/// Line through the focal point and the pseudo-inverse preimage of u.
PluckerLine back_projected_line(const Camera& camera, const ImagePoint& u);

struct LabeledTriangulation {
  WorldPoint point;
  /// The per-view scales lambda_j with A_j X = lambda_j u_j (unit cameras,
  /// normalized image points, normalized X).
  Eigen::VectorXd scales;
  /// sigma_min / sigma_max of the stacked system.
  double residual = 0.0;
  bool off_variety = false;
};

/// Classical linear triangulation from one image point per camera. Throws
/// kAmbiguousTriangulation when the kernel is at least two-dimensional.
LabeledTriangulation labeled_triangulate(const CameraRig& rig,
                                         std::span<const ImagePoint> u,
                                         double tol_rank = kRankTol,
                                         double tol_residual = 1e-6);

/// Focal points pairwise distinct, no three collinear, no four coplanar.
bool general_position_check(const CameraRig& rig, double tol = kIncidenceTol);

/// Cameras with integer entries in [-20, 20], redrawn until the rig is in
/// general position.
CameraRig random_rig(int n, std::mt19937_64& rng);

}  // namespace utri
