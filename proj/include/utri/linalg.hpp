#pragma once

#include <Eigen/Dense>

namespace utri {

using Matrix34 = Eigen::Matrix<double, 3, 4>;

/// Numerical rank of a matrix together with the spectral gap at the cut.
struct RankInfo {
  int rank = 0;
  /// sigma[rank-1] / sigma[rank]. When the matrix has full column rank the
  /// denominator is the threshold tol * sigma_max instead.
  double gap_ratio = 0.0;
  Eigen::VectorXd singular_values;
};

/// Rank with the relative threshold sigma_i / sigma_max < tol.
RankInfo numerical_rank(const Eigen::MatrixXd& a, double tol);

/// Right singular vectors of the `count` smallest singular values, as columns
/// (smallest last). Requires count <= a.cols().
Eigen::MatrixXd smallest_right_singular_vectors(const Eigen::MatrixXd& a,
                                                int count);

/// Orthonormal basis (columns) of the numerical nullspace.
Eigen::MatrixXd null_space(const Eigen::MatrixXd& a, double tol);

/// Moore-Penrose pseudo-inverse of a full row rank matrix.
Eigen::MatrixXd pseudo_inverse(const Eigen::MatrixXd& a);

Eigen::Matrix3d cross_matrix(const Eigen::Vector3d& v);

/// Largest principal angle (radians) between span(sub) and span(super). Both
/// arguments hold spanning vectors as columns; `super` is orthonormalized
/// internally with rank threshold tol.
double max_principal_angle(const Eigen::MatrixXd& sub,
                           const Eigen::MatrixXd& super, double tol = 1e-10);

}  // namespace utri
