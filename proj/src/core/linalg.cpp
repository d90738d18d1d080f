#include "utri/linalg.hpp"

#include <algorithm>
#include <limits>

namespace utri {

RankInfo numerical_rank(const Eigen::MatrixXd& a, double tol) {
  RankInfo info;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(a);
  info.singular_values = svd.singularValues();
  const auto& s = info.singular_values;
  const Eigen::Index k = s.size();
  if (k == 0 || s[0] == 0.0) {
    info.gap_ratio = std::numeric_limits<double>::infinity();
    return info;
  }
  const double threshold = tol * s[0];
  while (info.rank < k && s[info.rank] >= threshold) ++info.rank;
  if (info.rank == 0) {
    info.gap_ratio = std::numeric_limits<double>::infinity();
  } else if (info.rank < k) {
    info.gap_ratio = s[info.rank - 1] / std::max(s[info.rank], 1e-300);
  } else {
    info.gap_ratio = s[k - 1] / threshold;
  }
  return info;
}

Eigen::MatrixXd smallest_right_singular_vectors(const Eigen::MatrixXd& a,
                                                int count) {
  // Pad short matrices with zero rows so the full right basis is available.
  Eigen::MatrixXd padded = a;
  if (a.rows() < a.cols()) {
    padded = Eigen::MatrixXd::Zero(a.cols(), a.cols());
    padded.topRows(a.rows()) = a;
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(padded, Eigen::ComputeFullV);
  return svd.matrixV().rightCols(count);
}

Eigen::MatrixXd null_space(const Eigen::MatrixXd& a, double tol) {
  const RankInfo info = numerical_rank(a, tol);
  const int nullity = static_cast<int>(a.cols()) - info.rank;
  if (nullity == 0) return Eigen::MatrixXd(a.cols(), 0);
  return smallest_right_singular_vectors(a, nullity);
}

Eigen::MatrixXd pseudo_inverse(const Eigen::MatrixXd& a) {
  return a.transpose() * (a * a.transpose()).inverse();
}

Eigen::Matrix3d cross_matrix(const Eigen::Vector3d& v) {
  Eigen::Matrix3d m;
  m << 0.0, -v(2), v(1),
       v(2), 0.0, -v(0),
       -v(1), v(0), 0.0;
  return m;
}

double max_principal_angle(const Eigen::MatrixXd& sub,
                           const Eigen::MatrixXd& super, double tol) {
  if (sub.cols() == 0) return 0.0;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd_super(super, Eigen::ComputeThinU);
  const RankInfo rank = numerical_rank(super, tol);
  const Eigen::MatrixXd q_super = svd_super.matrixU().leftCols(rank.rank);

  Eigen::JacobiSVD<Eigen::MatrixXd> svd_sub(sub, Eigen::ComputeThinU);
  const RankInfo sub_rank = numerical_rank(sub, tol);
  const Eigen::MatrixXd q_sub = svd_sub.matrixU().leftCols(sub_rank.rank);

  // Cosines of the principal angles are the singular values of Q_super^T Q_sub.
  const Eigen::VectorXd cosines =
      (q_super.transpose() * q_sub).jacobiSvd().singularValues();
  if (cosines.size() < q_sub.cols()) return M_PI / 2;
  const double smallest = std::min(1.0, cosines.minCoeff());
  // Residual form is accurate for tiny angles where acos is not.
  const Eigen::MatrixXd residual = q_sub - q_super * (q_super.transpose() * q_sub);
  const double sine = residual.jacobiSvd().singularValues()(0);
  return smallest > 0.9 ? std::asin(std::min(1.0, sine)) : std::acos(smallest);
}

}  // namespace utri
