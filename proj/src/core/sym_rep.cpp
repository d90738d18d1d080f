#include "utri/sym_rep.hpp"

#include <algorithm>
#include <map>
#include <memory>
#include <mutex>
#include <numeric>
#include <string>

namespace utri {

namespace {

std::unique_ptr<MultiIndexTable> build_table(int order, int dim) {
  auto t = std::make_unique<MultiIndexTable>();
  t->order = order;
  t->dim = dim;
  std::vector<int> idx(static_cast<std::size_t>(order), 0);
  for (;;) {
    t->indices.push_back(idx);
    // Next non-decreasing sequence in lexicographic order.
    int pos = order - 1;
    while (pos >= 0 && idx[static_cast<std::size_t>(pos)] == dim - 1) --pos;
    if (pos < 0) break;
    const int v = idx[static_cast<std::size_t>(pos)] + 1;
    for (int k = pos; k < order; ++k) idx[static_cast<std::size_t>(k)] = v;
  }
  std::size_t full = 1;
  for (int k = 0; k < order; ++k) full *= static_cast<std::size_t>(dim);
  t->full_to_slot.assign(full, -1);
  t->multiplicity.assign(t->indices.size(), 0);
  std::vector<int> digits(static_cast<std::size_t>(order));
  for (std::size_t flat = 0; flat < full; ++flat) {
    std::size_t rest = flat;
    for (int k = order - 1; k >= 0; --k) {
      digits[static_cast<std::size_t>(k)] = static_cast<int>(rest % static_cast<std::size_t>(dim));
      rest /= static_cast<std::size_t>(dim);
    }
    std::vector<int> sorted = digits;
    std::sort(sorted.begin(), sorted.end());
    const auto it = std::lower_bound(t->indices.begin(), t->indices.end(), sorted);
    const int slot = static_cast<int>(it - t->indices.begin());
    t->full_to_slot[flat] = slot;
    ++t->multiplicity[static_cast<std::size_t>(slot)];
  }
  return t;
}

void check_order_dim(int order, int dim) {
  if (order < 1 || dim < 1 || order > 8 || dim > 8) {
    throw Error(ErrorCode::kShape, "unsupported tensor order " +
                                       std::to_string(order) + " / dim " +
                                       std::to_string(dim));
  }
}

}  // namespace

const MultiIndexTable& multi_index_table(int order, int dim) {
  check_order_dim(order, dim);
  static std::mutex mutex;
  static std::map<std::pair<int, int>, std::unique_ptr<MultiIndexTable>> cache;
  std::lock_guard<std::mutex> lock(mutex);
  auto& slot = cache[{order, dim}];
  if (!slot) slot = build_table(order, dim);
  return *slot;
}

std::size_t sym_size(int order, int dim) {
  // binom(order + dim - 1, order)
  std::size_t num = 1;
  std::size_t den = 1;
  for (int k = 1; k <= order; ++k) {
    num *= static_cast<std::size_t>(dim - 1 + k);
    den *= static_cast<std::size_t>(k);
  }
  return num / den;
}

SymConfig::SymConfig(int order, int dim, Eigen::VectorXd entries)
    : order_(order), dim_(dim), entries_(std::move(entries)) {
  check_order_dim(order, dim);
  if (static_cast<std::size_t>(entries_.size()) != sym_size(order, dim)) {
    throw Error(ErrorCode::kShape,
                "symmetric tensor of order " + std::to_string(order) +
                    " and dim " + std::to_string(dim) + " needs " +
                    std::to_string(sym_size(order, dim)) + " entries, got " +
                    std::to_string(entries_.size()));
  }
}

SymConfig SymConfig::from_matrix(const Eigen::MatrixXd& m) {
  if (m.rows() != m.cols()) throw Error(ErrorCode::kShape, "matrix not square");
  const int d = static_cast<int>(m.rows());
  Eigen::VectorXd e(sym_size(2, d));
  Eigen::Index k = 0;
  for (int i = 0; i < d; ++i) {
    for (int j = i; j < d; ++j) e(k++) = m(i, j);
  }
  return SymConfig(2, d, std::move(e));
}

double SymConfig::at(std::span<const int> index) const {
  if (static_cast<int>(index.size()) != order_) {
    throw Error(ErrorCode::kShape, "index length does not match tensor order");
  }
  const auto& t = multi_index_table(order_, dim_);
  std::size_t flat = 0;
  for (int i : index) {
    if (i < 0 || i >= dim_) throw Error(ErrorCode::kShape, "index out of range");
    flat = flat * static_cast<std::size_t>(dim_) + static_cast<std::size_t>(i);
  }
  return entries_(t.full_to_slot[flat]);
}

Eigen::MatrixXd SymConfig::matrix() const {
  if (order_ != 2) throw Error(ErrorCode::kShape, "matrix() requires order 2");
  Eigen::MatrixXd m(dim_, dim_);
  Eigen::Index k = 0;
  for (int i = 0; i < dim_; ++i) {
    for (int j = i; j < dim_; ++j) {
      m(i, j) = entries_(k);
      m(j, i) = entries_(k);
      ++k;
    }
  }
  return m;
}

SymConfig SymConfig::normalized() const {
  return SymConfig(order_, dim_, normalize(entries_));
}

SymConfig pair_to_sym(const Eigen::Ref<const Eigen::VectorXd>& u,
                      const Eigen::Ref<const Eigen::VectorXd>& v) {
  if (u.size() != v.size()) {
    throw Error(ErrorCode::kShape, "pair_to_sym: dimension mismatch");
  }
  const Eigen::MatrixXd n = u * v.transpose() + v * u.transpose();
  return SymConfig::from_matrix(n).normalized();
}

Eigen::VectorXd symmetrized_product(std::span<const Eigen::VectorXd> points) {
  const int order = static_cast<int>(points.size());
  if (order < 1) throw Error(ErrorCode::kShape, "empty point configuration");
  const int dim = static_cast<int>(points[0].size());
  for (const auto& p : points) {
    if (p.size() != dim) throw Error(ErrorCode::kShape, "mixed point dimensions");
  }
  const auto& t = multi_index_table(order, dim);
  Eigen::VectorXd e = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(t.size()));
  std::vector<int> perm(static_cast<std::size_t>(order));
  for (std::size_t s = 0; s < t.size(); ++s) {
    // Entry at a sorted index is the permanent of P[k][l] = X_l[i_k].
    std::iota(perm.begin(), perm.end(), 0);
    double sum = 0.0;
    do {
      double prod = 1.0;
      for (int k = 0; k < order; ++k) {
        prod *= points[static_cast<std::size_t>(perm[static_cast<std::size_t>(k)])]
                      (t.indices[s][static_cast<std::size_t>(k)]);
      }
      sum += prod;
    } while (std::next_permutation(perm.begin(), perm.end()));
    e(static_cast<Eigen::Index>(s)) = sum;
  }
  return e;
}

SymConfig config_to_sym(std::span<const Eigen::VectorXd> points) {
  const int order = static_cast<int>(points.size());
  Eigen::VectorXd e = symmetrized_product(points);
  return SymConfig(order, static_cast<int>(points[0].size()), std::move(e))
      .normalized();
}

Eigen::VectorXd vectorize(const SymConfig& m) { return m.entries(); }

SymConfig unvectorize(const Eigen::VectorXd& v, int order, int dim) {
  return SymConfig(order, dim, v);
}

Eigen::VectorXd contract(const SymConfig& m, const Matrix34& a) {
  if (m.dim() != 4) throw Error(ErrorCode::kShape, "world tensors have dim 4");
  if (m.order() == 2) {
    const Eigen::MatrixXd n = a * m.matrix() * a.transpose();
    return SymConfig::from_matrix(n).entries();
  }
  const int order = m.order();
  const auto& in = multi_index_table(order, 4);
  const auto& out = multi_index_table(order, 3);
  Eigen::VectorXd result = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(out.size()));
  std::vector<int> digits(static_cast<std::size_t>(order));
  for (std::size_t flat = 0; flat < in.full_to_slot.size(); ++flat) {
    const double value = m.entries()(in.full_to_slot[flat]);
    if (value == 0.0) continue;
    std::size_t rest = flat;
    for (int k = order - 1; k >= 0; --k) {
      digits[static_cast<std::size_t>(k)] = static_cast<int>(rest % 4);
      rest /= 4;
    }
    for (std::size_t s = 0; s < out.size(); ++s) {
      double prod = value;
      for (int k = 0; k < order; ++k) {
        prod *= a(out.indices[s][static_cast<std::size_t>(k)],
                  digits[static_cast<std::size_t>(k)]);
      }
      result(static_cast<Eigen::Index>(s)) += prod;
    }
  }
  return result;
}

LiftedCamera lift_matrix(const Matrix34& a, int order) {
  const auto rows = static_cast<Eigen::Index>(sym_size(order, 3));
  const auto cols = static_cast<Eigen::Index>(sym_size(order, 4));
  LiftedCamera lifted;
  lifted.order = order;
  lifted.matrix.resize(rows, cols);
  for (Eigen::Index c = 0; c < cols; ++c) {
    Eigen::VectorXd basis = Eigen::VectorXd::Zero(cols);
    basis(c) = 1.0;
    lifted.matrix.col(c) = contract(SymConfig(order, 4, std::move(basis)), a);
  }
  return lifted;
}

LiftedCamera lift_camera(const Camera& camera, int order) {
  return lift_matrix(camera.matrix(), order);
}

SymConfig unlabeled_project(const Camera& camera, const SymConfig& m,
                            double tol) {
  const Matrix34 a = camera.unit_matrix();
  const SymConfig mn = m.normalized();
  Eigen::VectorXd n = contract(mn, a);
  if (n.norm() < tol) {
    throw Error(ErrorCode::kDegenerateProjection,
                "unlabeled projection vanishes: configuration is supported on "
                "the focal point");
  }
  return SymConfig(m.order(), 3, std::move(n)).normalized();
}

SymConfig unlabeled_focal_point(const CameraRig& rig,
                                std::span<const int> sigma) {
  PointList focal;
  for (int i : sigma) focal.emplace_back(rig[static_cast<std::size_t>(i)].focal());
  return config_to_sym(focal);
}

namespace {

struct SortedEigen {
  Eigen::VectorXd values;   // by decreasing magnitude
  Eigen::MatrixXd vectors;  // matching columns
};

SortedEigen eigen_by_magnitude(const Eigen::MatrixXd& m) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m);
  const auto n = m.rows();
  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
    return std::abs(es.eigenvalues()(a)) > std::abs(es.eigenvalues()(b));
  });
  SortedEigen out{Eigen::VectorXd(n), Eigen::MatrixXd(n, n)};
  for (Eigen::Index i = 0; i < n; ++i) {
    out.values(i) = es.eigenvalues()(order[static_cast<std::size_t>(i)]);
    out.vectors.col(i) = es.eigenvectors().col(order[static_cast<std::size_t>(i)]);
  }
  return out;
}

}  // namespace

SymConfig nearest_rank2(const SymConfig& m) {
  const Eigen::MatrixXd mat = m.matrix();
  const SortedEigen e = eigen_by_magnitude(mat);
  Eigen::MatrixXd r = Eigen::MatrixXd::Zero(mat.rows(), mat.cols());
  for (Eigen::Index i = 0; i < std::min<Eigen::Index>(2, mat.rows()); ++i) {
    r += e.values(i) * e.vectors.col(i) * e.vectors.col(i).transpose();
  }
  return SymConfig::from_matrix(r);
}

std::pair<Eigen::VectorXd, Eigen::VectorXd> split_rank2(const SymConfig& m,
                                                        double tol) {
  const Eigen::MatrixXd mat = m.matrix();
  const SortedEigen e = eigen_by_magnitude(mat);
  const double top = std::abs(e.values(0));
  const double second = e.values.size() > 1 ? std::abs(e.values(1)) : 0.0;
  const double third = e.values.size() > 2 ? std::abs(e.values(2)) : 0.0;
  if (!(top > 0.0) || second < tol * top || third >= tol * top) {
    throw Error(ErrorCode::kNotSplittable,
                "split_rank2: matrix does not have numerical rank 2");
  }
  if (e.values(0) * e.values(1) > 0.0) {
    throw Error(ErrorCode::kComplexPair,
                "split_rank2: definite rank-2 form splits into a complex "
                "conjugate pair");
  }
  const Eigen::Index pos = e.values(0) > 0.0 ? 0 : 1;
  const Eigen::Index neg = 1 - pos;
  const Eigen::VectorXd a = std::sqrt(e.values(pos)) * e.vectors.col(pos);
  const Eigen::VectorXd b = std::sqrt(-e.values(neg)) * e.vectors.col(neg);
  Eigen::VectorXd x = normalize(Eigen::VectorXd(a + b));
  Eigen::VectorXd y = normalize(Eigen::VectorXd(a - b));
  // Deterministic order for the unordered pair.
  if (std::lexicographical_compare(y.data(), y.data() + y.size(), x.data(),
                                   x.data() + x.size())) {
    std::swap(x, y);
  }
  return {x, y};
}

}  // namespace utri
