#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "utri/triangulation.hpp"

namespace utri {

/// Points of the two-point unlabeled multiview variety: for each sample, the
/// normalized image configurations (6 upper triangular entries) of one random
/// world pair in every view.
struct VarietySample {
  CameraRig rig;
  std::vector<std::vector<Eigen::VectorXd>> points;
  std::uint64_t seed = 0;
  std::size_t rejected = 0;
};

/// World pairs have entries uniform in [-1, 1]. Throws
/// kDegenerateConfiguration when more than half of the draws are rejected.
VarietySample sample_variety(const CameraRig& rig, std::size_t count,
                             std::uint64_t seed);

/// Monomials of bidegree (d1, d2) in the coordinates of (N1, N2); index
/// i1 * count(d2) + i2 over the sorted multi-indices of each block.
std::size_t bidegree_monomial_count(int d1, int d2);

/// A subspace of bihomogeneous forms; basis vectors are columns of
/// coefficients over the monomials of the bidegree.
struct FormSpace {
  int d1 = 0;
  int d2 = 0;
  Eigen::MatrixXd basis;
  int dim = 0;
  /// Smallest kept singular value over the largest discarded one.
  double gap_ratio = 0.0;
};

/// Evaluation matrix (rows: samples, row-normalized; columns: monomials) of
/// the first two views.
Eigen::MatrixXd evaluation_matrix(const VarietySample& sample, int d1, int d2);

/// Forms of bidegree (d1, d2) vanishing on every sample, by the nullspace of
/// the evaluation matrix at relative threshold tol. Throws
/// kPreconditionViolation for too few samples and kUnreliableRank when the
/// gap ratio is below 10.
FormSpace vanishing_forms(const VarietySample& sample, int d1, int d2,
                          double tol = 1e-7);

int vanishing_form_dim(const VarietySample& sample, int d1, int d2,
                       double tol = 1e-7);

struct GeneratorCount {
  int vanishing_dim = 0;
  /// Dimension of the span of products of lower-degree vanishing forms with
  /// coordinates.
  int product_dim = 0;
  int new_generators = 0;
  double gap_ratio = 0.0;
};

/// Vanishing forms of bidegree (d1, d2) not generated by lower bidegrees:
/// dim V(d1,d2) - dim(V(d1-1,d2) * N1 + V(d1,d2-1) * N2).
GeneratorCount new_generator_count(const VarietySample& sample, int d1, int d2,
                                   double tol = 1e-7);

/// The 9 bilinear forms given by the entries of N2 F N1, as rows over the
/// (1,1) monomials.
Eigen::MatrixXd n2_f_n1_forms(const Eigen::Matrix3d& f);

struct GensFund2Report {
  bool contained = false;
  double max_angle = 0.0;
  int vanishing_dim = 0;
  int entry_span_dim = 0;
};

/// Whether the (1,1) vanishing forms lie in the span of the entries of
/// N2 F N1. Throws kPreconditionViolation unless the (1,1) dimension is 3.
GensFund2Report check_gens_fund2(const CameraRig& rig,
                                 const VarietySample& sample,
                                 double angle_tol = 1e-6);

struct RankCheck {
  std::string name;
  int rank = 0;
  int expected = 0;
  double gap_ratio = 0.0;
  bool passed = false;
};

struct RankProfile {
  std::vector<RankCheck> checks;
  /// Only for m = 2 and |sigma| = 2: projective distance between the kernel of
  /// A~_sigma and vv(f_ij).
  double focal_kernel_distance = 0.0;
  bool passed = false;
};

/// Ranks of A~_sigma and of B_sigma on a random on-variety configuration drawn
/// from `seed`. Throws kUnreliableRank when a gap ratio falls below 10.
RankProfile rank_profile(const CameraRig& rig, int order,
                         std::span<const int> sigma, std::uint64_t seed,
                         double tol = kRankTol);

struct PencilReport {
  int pairs_tested = 0;
  int pairs_excluded = 0;
  int pairs_passed = 0;
  /// Rank of pencil members over the alpha grid, summed over all pairs.
  std::map<int, long> rank_histogram;
  bool passed = false;
};

/// Random pencils spanned by two real rank-2 matrices whose difference has
/// rank 4 at relative threshold 1e-6: double roots exactly at 0 and 1, rank 4 elsewhere on the grid
/// alpha = (k - 250) / 100, k < 1000, and at 20 random alphas.
PencilReport pencil_check(int count, std::uint64_t seed, double tol = kRankTol);

}  // namespace utri
