#pragma once

#include <array>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "utri/sym_rep.hpp"

namespace utri {

struct TriangulationOptions {
  /// Relative singular value threshold for kernels and ranks.
  double tol_rank = kRankTol;
  /// Upper bound on the normalized residual of an accepted reconstruction.
  double tol_residual = 1e-6;
};

/// The block system [A~_s1 vv(N_1) ...; A~_s2 ... vv(N_2) ...; ...] over the
/// views in `sigma`. Lifted cameras use unit-Frobenius camera matrices and the
/// N columns are normalized, so a kernel vector reads (vv(M), -lambda_1, ...).
struct StackedSystem {
  Eigen::MatrixXd b;
  std::vector<int> sigma;
  int order = 2;
  /// binom(m+3, m): number of leading world columns.
  Eigen::Index world_cols = 10;
};

/// `ns[i]` is the observation of camera `sigma[i]`. Throws kShape for mixed
/// orders, size mismatches, or image tensors that are not of dim 3.
StackedSystem build_B(const CameraRig& rig, std::span<const SymConfig> ns,
                      std::span<const int> sigma);

/// Stacked lifted cameras A~_sigma (unit camera matrices).
Eigen::MatrixXd stacked_lifted(const CameraRig& rig, std::span<const int> sigma,
                               int order);

struct TriangulationResult {
  SymConfig m_delta;
  /// lambda_i with A~_i vv(M_delta) = lambda_i vv(N_i) on normalized data.
  Eigen::VectorXd scales = Eigen::VectorXd();
  /// |B (vv(M_delta), -scales)| / |B|_F, plus the rank-2 projection distance
  /// when one was applied.
  double residual = 0.0;
  /// Numerical nullity of B at tol_rank.
  int kernel_dim = 0;
  /// Singular value ratio across the kernel cut.
  double gap_ratio = 0.0;
  /// Two-view only: the recovered pair is coplanar with the baseline, so
  /// another configuration has the same images.
  bool ambiguous = false;
  /// Projective distance moved by the rank-2 projection (noisy m = 2 data).
  double rank2_distance = 0.0;
  /// The unordered world pair, when m = 2 and M_delta splits over the reals.
  std::optional<std::pair<Eigen::VectorXd, Eigen::VectorXd>> points = std::nullopt;
};

/// Coefficients a_0..a_4 of det(alpha*M1 + (1 - alpha)*M2), by interpolation
/// at alpha in {-2, -1, 1, 2, 3}.
std::array<double, 5> pencil_quartic(const Eigen::Matrix4d& m1,
                                     const Eigen::Matrix4d& m2);

/// Root structure of a quartic a_4 a^2 (a - c)^2.
struct DoubleRootFit {
  double c = 0.0;
  /// max(|a_0|, |a_1|) / max|a_i|
  double low_order = 0.0;
  /// |a_2 a_4 - a_3^2 / 4| / max|a_i|^2
  double discriminant = 0.0;
  /// max|a_i|
  double scale = 0.0;
};

/// Throws kAmbiguousTriangulation when the quartic vanishes identically or
/// the double root pattern is violated beyond tol, kDegenerateConfiguration
/// when only the leading coefficient vanishes.
DoubleRootFit fit_double_roots(const std::array<double, 5>& a, double tol);

/// Algorithm for two views (m = 2): kernel of B minus the unlabeled focal
/// point, then the double root of the determinant pencil.
TriangulationResult triangulate_two_view(const CameraRig& rig,
                                         const SymConfig& n1,
                                         const SymConfig& n2,
                                         const TriangulationOptions& opts = {});

/// Kernel method for n >= m + 1 views; noisy m = 2 data is projected to rank
/// 2.
TriangulationResult triangulate_multiview(const CameraRig& rig,
                                          std::span<const SymConfig> ns,
                                          const TriangulationOptions& opts = {});

/// Dispatches on the number of views and the order.
TriangulationResult triangulate(const CameraRig& rig,
                                std::span<const SymConfig> ns,
                                const TriangulationOptions& opts = {});

/// Rank-2 members of span{M1, M2} (M2 of rank 2) found as double roots of
/// det(alpha*M1 + (1-alpha)*M2). Returns (alpha, member) for alpha in {0, c},
/// sorted by alpha.
std::vector<std::pair<double, SymConfig>> pencil_rank2_points(
    const SymConfig& m1, const SymConfig& m2, double tol = kRankTol);

}  // namespace utri
