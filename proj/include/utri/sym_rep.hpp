#pragma once

#include <span>
#include <utility>
#include <vector>

#include "utri/camera.hpp"

namespace utri {

/// Sorted multi-indices of a symmetric tensor of order m over dim coordinates,
/// in lexicographic order: (0,0),(0,1),(0,2),(0,3),(1,1),... for m=2, dim=4.
struct MultiIndexTable {
  int order = 0;
  int dim = 0;
  std::vector<std::vector<int>> indices;
  /// Slot of every full index (i_1, ..., i_m), flattened in base `dim` with
  /// i_1 most significant.
  std::vector<int> full_to_slot;
  /// Number of distinct permutations of each sorted multi-index.
  std::vector<int> multiplicity;

  std::size_t size() const { return indices.size(); }
};

/// Shared, immutable table for (order, dim). Thread-safe.
const MultiIndexTable& multi_index_table(int order, int dim);

/// binom(order + dim - 1, order).
std::size_t sym_size(int order, int dim);

/// A symmetric tensor of order m over R^dim up to scale, stored by its entries
/// at the sorted multi-indices. For m = 2 these are the upper triangular
/// entries read row by row.
class SymConfig {
 public:
  /// Throws kShape when the entry count does not match (order, dim).
  SymConfig(int order, int dim, Eigen::VectorXd entries);

  /// Symmetric matrix (m = 2); only the upper triangle is read.
  static SymConfig from_matrix(const Eigen::MatrixXd& m);

  int order() const { return order_; }
  int dim() const { return dim_; }
  const Eigen::VectorXd& entries() const { return entries_; }

  /// Entry at an arbitrary (unsorted) full index.
  double at(std::span<const int> index) const;
  /// Dense symmetric matrix; throws kShape unless order() == 2.
  Eigen::MatrixXd matrix() const;
  /// Unit-norm entries, first non-negligible entry positive.
  SymConfig normalized() const;

 private:
  int order_;
  int dim_;
  Eigen::VectorXd entries_;
};

using PointList = std::vector<Eigen::VectorXd>;

/// u v^T + v u^T, normalized.
SymConfig pair_to_sym(const Eigen::Ref<const Eigen::VectorXd>& u,
                      const Eigen::Ref<const Eigen::VectorXd>& v);

/// Sum over all orderings of the tensor products of the points, normalized.
/// The order m is the number of points.
SymConfig config_to_sym(std::span<const Eigen::VectorXd> points);

/// Unnormalized variant of config_to_sym.
Eigen::VectorXd symmetrized_product(std::span<const Eigen::VectorXd> points);

Eigen::VectorXd vectorize(const SymConfig& m);
SymConfig unvectorize(const Eigen::VectorXd& v, int order, int dim);

/// The linear map vv(M) -> vv(M(A, ..., A)) for symmetric tensors of order m.
/// binom(m+2, m) rows, binom(m+3, m) columns.
struct LiftedCamera {
  Eigen::MatrixXd matrix;
  int order = 2;
};

/// Lifts the camera's matrix as stored.
LiftedCamera lift_camera(const Camera& camera, int order);
LiftedCamera lift_matrix(const Matrix34& a, int order);

/// Contraction of every axis of M with A; no normalization. M must have
/// dim 4.
Eigen::VectorXd contract(const SymConfig& m, const Matrix34& a);

/// A M A^T (general m: every axis contracted with A), normalized. Throws
/// kDegenerateProjection when the result is numerically zero relative to
/// |A|^m |M|.
SymConfig unlabeled_project(const Camera& camera, const SymConfig& m,
                            double tol = 1e-10);

/// config_to_sym of the focal points of the selected cameras.
SymConfig unlabeled_focal_point(const CameraRig& rig,
                                std::span<const int> sigma);

/// Keeps the two eigenpairs of largest magnitude (m = 2).
SymConfig nearest_rank2(const SymConfig& m);

/// Splits a rank-2 symmetric matrix into an unordered pair {X, Y} of
/// normalized points with X Y^T + Y X^T proportional to M. Throws
/// kNotSplittable when the rank is not 2 and kComplexPair when the two nonzero
/// eigenvalues share a sign (the pair is complex conjugate).
std::pair<Eigen::VectorXd, Eigen::VectorXd> split_rank2(const SymConfig& m,
                                                        double tol = kRankTol);

}  // namespace utri
