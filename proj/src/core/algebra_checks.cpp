#include "utri/algebra_checks.hpp"

#include <algorithm>
#include <limits>
#include <random>
#include <string>

namespace utri {

namespace {

constexpr int kImageCoords = 6;
constexpr double kMinGap = 10.0;

const std::vector<std::vector<int>>& block_monomials(int degree) {
  static const std::vector<std::vector<int>> constant{{}};
  if (degree == 0) return constant;
  return multi_index_table(degree, kImageCoords).indices;
}

int block_slot(std::vector<int> idx) {
  if (idx.empty()) return 0;
  std::sort(idx.begin(), idx.end());
  const auto& t = multi_index_table(static_cast<int>(idx.size()), kImageCoords);
  std::size_t flat = 0;
  for (int i : idx) flat = flat * kImageCoords + static_cast<std::size_t>(i);
  return t.full_to_slot[flat];
}

double monomial_value(const Eigen::VectorXd& x, const std::vector<int>& idx) {
  double v = 1.0;
  for (int i : idx) v *= x(i);
  return v;
}

void check_bidegree(int d1, int d2) {
  if (d1 < 0 || d2 < 0 || d1 + d2 == 0) {
    throw Error(ErrorCode::kShape, "bidegree must be non-negative and nonzero");
  }
}

}  // namespace

VarietySample sample_variety(const CameraRig& rig, std::size_t count,
                             std::uint64_t seed) {
  VarietySample s{rig, {}, seed, 0};
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  while (s.points.size() < count) {
    WorldPoint x, y;
    for (int i = 0; i < 4; ++i) x(i) = uni(rng);
    for (int i = 0; i < 4; ++i) y(i) = uni(rng);
    try {
      const SymConfig m = pair_to_sym(x, y);
      std::vector<Eigen::VectorXd> views;
      for (const auto& cam : rig.cameras()) {
        views.push_back(unlabeled_project(cam, m).entries());
      }
      s.points.push_back(std::move(views));
    } catch (const Error&) {
      ++s.rejected;
      if (s.rejected > count) {
        throw Error(ErrorCode::kDegenerateConfiguration,
                    "variety sampling rejected more than half of the draws");
      }
    }
  }
  return s;
}

std::size_t bidegree_monomial_count(int d1, int d2) {
  return block_monomials(d1).size() * block_monomials(d2).size();
}

Eigen::MatrixXd evaluation_matrix(const VarietySample& sample, int d1, int d2) {
  check_bidegree(d1, d2);
  if (sample.rig.size() < 2) throw Error(ErrorCode::kShape, "two views required");
  const auto& mon1 = block_monomials(d1);
  const auto& mon2 = block_monomials(d2);
  const auto rows = static_cast<Eigen::Index>(sample.points.size());
  const auto cols = static_cast<Eigen::Index>(mon1.size() * mon2.size());
  Eigen::MatrixXd e(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    const auto& pt = sample.points[static_cast<std::size_t>(r)];
    Eigen::Index c = 0;
    for (const auto& a : mon1) {
      const double va = monomial_value(pt[0], a);
      for (const auto& b : mon2) e(r, c++) = va * monomial_value(pt[1], b);
    }
    e.row(r).normalize();
  }
  return e;
}

FormSpace vanishing_forms(const VarietySample& sample, int d1, int d2,
                          double tol) {
  check_bidegree(d1, d2);
  const std::size_t monomials = bidegree_monomial_count(d1, d2);
  if (sample.points.size() < 2 * monomials) {
    throw Error(ErrorCode::kPreconditionViolation,
                "bidegree (" + std::to_string(d1) + "," + std::to_string(d2) +
                    ") needs at least " + std::to_string(2 * monomials) +
                    " samples");
  }
  const Eigen::MatrixXd e = evaluation_matrix(sample, d1, d2);
  Eigen::BDCSVD<Eigen::MatrixXd> svd(e, Eigen::ComputeFullV);
  const Eigen::VectorXd& s = svd.singularValues();
  const auto cols = static_cast<Eigen::Index>(monomials);
  Eigen::Index rank = 0;
  while (rank < s.size() && s(rank) >= tol * s(0)) ++rank;

  FormSpace fs;
  fs.d1 = d1;
  fs.d2 = d2;
  fs.dim = static_cast<int>(cols - rank);
  fs.basis = svd.matrixV().rightCols(cols - rank);
  if (rank == 0 || rank == cols) {
    fs.gap_ratio = rank == cols ? s(rank - 1) / (tol * s(0))
                                : std::numeric_limits<double>::infinity();
  } else {
    fs.gap_ratio = s(rank - 1) / std::max(s(rank), 1e-300);
  }
  if (fs.gap_ratio < kMinGap) {
    throw Error(ErrorCode::kUnreliableRank,
                "evaluation matrix gap ratio " + std::to_string(fs.gap_ratio) +
                    " below 10");
  }
  return fs;
}

int vanishing_form_dim(const VarietySample& sample, int d1, int d2, double tol) {
  return vanishing_forms(sample, d1, d2, tol).dim;
}

namespace {

/// Multiplies each basis form of `lower` by every coordinate of block
/// `block` (0 for N1, 1 for N2), expressed over the monomials of `lower`'s
/// bidegree raised by one in that block.
void append_products(const FormSpace& lower, int block,
                     std::vector<Eigen::VectorXd>& out) {
  const int e1 = lower.d1, e2 = lower.d2;
  const int t1 = e1 + (block == 0 ? 1 : 0);
  const int t2 = e2 + (block == 1 ? 1 : 0);
  const auto& mon1 = block_monomials(e1);
  const auto& mon2 = block_monomials(e2);
  const std::size_t target2 = block_monomials(t2).size();
  const auto target = static_cast<Eigen::Index>(bidegree_monomial_count(t1, t2));
  for (Eigen::Index g = 0; g < lower.basis.cols(); ++g) {
    for (int p = 0; p < kImageCoords; ++p) {
      Eigen::VectorXd prod = Eigen::VectorXd::Zero(target);
      for (std::size_t i1 = 0; i1 < mon1.size(); ++i1) {
        for (std::size_t i2 = 0; i2 < mon2.size(); ++i2) {
          const double coeff =
              lower.basis(static_cast<Eigen::Index>(i1 * mon2.size() + i2), g);
          if (coeff == 0.0) continue;
          std::vector<int> a = mon1[i1];
          std::vector<int> b = mon2[i2];
          (block == 0 ? a : b).push_back(p);
          const std::size_t slot =
              static_cast<std::size_t>(block_slot(a)) * target2 +
              static_cast<std::size_t>(block_slot(b));
          prod(static_cast<Eigen::Index>(slot)) += coeff;
        }
      }
      out.push_back(std::move(prod));
    }
  }
}

}  // namespace

GeneratorCount new_generator_count(const VarietySample& sample, int d1, int d2,
                                   double tol) {
  const FormSpace top = vanishing_forms(sample, d1, d2, tol);
  std::vector<Eigen::VectorXd> products;
  if (d1 >= 1 && d1 - 1 + d2 > 0) {
    append_products(vanishing_forms(sample, d1 - 1, d2, tol), 0, products);
  }
  if (d2 >= 1 && d1 + d2 - 1 > 0) {
    append_products(vanishing_forms(sample, d1, d2 - 1, tol), 1, products);
  }
  GeneratorCount gc;
  gc.vanishing_dim = top.dim;
  gc.gap_ratio = top.gap_ratio;
  if (!products.empty()) {
    Eigen::MatrixXd span(products.front().size(), static_cast<Eigen::Index>(products.size()));
    for (std::size_t i = 0; i < products.size(); ++i) {
      span.col(static_cast<Eigen::Index>(i)) = products[i];
    }
    const RankInfo info = numerical_rank(span, tol);
    if (info.gap_ratio < kMinGap) {
      throw Error(ErrorCode::kUnreliableRank,
                  "product span gap ratio " + std::to_string(info.gap_ratio));
    }
    gc.product_dim = info.rank;
    gc.gap_ratio = std::min(gc.gap_ratio, info.gap_ratio);
  }
  gc.new_generators = gc.vanishing_dim - gc.product_dim;
  return gc;
}

Eigen::MatrixXd n2_f_n1_forms(const Eigen::Matrix3d& f) {
  const auto& t = multi_index_table(2, 3);
  auto slot = [&](int i, int j) { return t.full_to_slot[static_cast<std::size_t>(i * 3 + j)]; };
  Eigen::MatrixXd forms = Eigen::MatrixXd::Zero(9, 36);
  for (int a = 0; a < 3; ++a) {
    for (int b = 0; b < 3; ++b) {
      // (N2 F N1)_ab = sum_cd N2[a,c] F[c,d] N1[d,b]
      for (int c = 0; c < 3; ++c) {
        for (int d = 0; d < 3; ++d) {
          forms(a * 3 + b, slot(d, b) * kImageCoords + slot(a, c)) += f(c, d);
        }
      }
    }
  }
  return forms;
}

GensFund2Report check_gens_fund2(const CameraRig& rig,
                                 const VarietySample& sample,
                                 double angle_tol) {
  if (rig.size() != 2) throw Error(ErrorCode::kShape, "two views required");
  const FormSpace v11 = vanishing_forms(sample, 1, 1);
  if (v11.dim != 3) {
    throw Error(ErrorCode::kPreconditionViolation,
                "expected 3 vanishing (1,1) forms, found " + std::to_string(v11.dim));
  }
  const Eigen::MatrixXd entries =
      n2_f_n1_forms(fundamental_matrix(rig, 0, 1).f).transpose();
  GensFund2Report rep;
  rep.vanishing_dim = v11.dim;
  rep.entry_span_dim = numerical_rank(entries, 1e-10).rank;
  rep.max_angle = max_principal_angle(v11.basis, entries);
  rep.contained = rep.max_angle < angle_tol;
  return rep;
}

namespace {

RankCheck make_check(std::string name, const Eigen::MatrixXd& m, int expected,
                     double tol, bool at_most = false) {
  const RankInfo info = numerical_rank(m, tol);
  if (info.gap_ratio < kMinGap) {
    throw Error(ErrorCode::kUnreliableRank,
                name + ": gap ratio " + std::to_string(info.gap_ratio) + " below 10");
  }
  RankCheck c{std::move(name), info.rank, expected, info.gap_ratio, false};
  c.passed = at_most ? info.rank <= expected : info.rank == expected;
  return c;
}

}  // namespace

RankProfile rank_profile(const CameraRig& rig, int order,
                         std::span<const int> sigma, std::uint64_t seed,
                         double tol) {
  const auto k = static_cast<int>(sigma.size());
  if (k < 2) throw Error(ErrorCode::kShape, "rank profile needs |sigma| >= 2");
  const int world = static_cast<int>(sym_size(order, 4));
  RankProfile p;
  const Eigen::MatrixXd lifted = stacked_lifted(rig, sigma, order);

  int expected_lifted = world;
  if (order == 2 && k == 2) expected_lifted = world - 1;
  if (order >= 3 && k <= order) expected_lifted = -1;  // no stated value
  if (expected_lifted >= 0) {
    p.checks.push_back(make_check("lifted", lifted, expected_lifted, tol));
  }
  if (order == 2 && k == 2) {
    const Eigen::MatrixXd kernel = null_space(lifted, tol);
    const SymConfig fij = unlabeled_focal_point(rig, sigma);
    p.focal_kernel_distance =
        kernel.cols() == 1 ? projective_distance(kernel.col(0), fij.entries()) : 1.0;
    p.checks.push_back(RankCheck{"lifted_kernel_is_focal", static_cast<int>(kernel.cols()),
                                 1, 0.0, p.focal_kernel_distance < tol});
  }

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  std::vector<SymConfig> ns;
  for (;;) {
    PointList pts;
    for (int i = 0; i < order; ++i) {
      WorldPoint x;
      for (int c = 0; c < 4; ++c) x(c) = uni(rng);
      pts.emplace_back(x);
    }
    const SymConfig m = config_to_sym(pts);
    ns.clear();
    try {
      for (int s : sigma) ns.push_back(unlabeled_project(rig[static_cast<std::size_t>(s)], m));
      break;
    } catch (const Error&) {
    }
  }
  const StackedSystem sys = build_B(rig, ns, sigma);
  int expected_b = -1;
  if (order == 2) expected_b = k == 2 ? world : world + k - 1;
  else if (k >= order + 1) expected_b = world + k - 1;
  if (expected_b >= 0) p.checks.push_back(make_check("stacked", sys.b, expected_b, tol));

  p.passed = std::all_of(p.checks.begin(), p.checks.end(),
                         [](const RankCheck& c) { return c.passed; });
  return p;
}

namespace {
constexpr double kPencilMarginTol = 1e-6;
}  // namespace

PencilReport pencil_check(int count, std::uint64_t seed, double tol) {
  PencilReport rep;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  auto random_pair = [&]() {
    WorldPoint x, y;
    for (int i = 0; i < 4; ++i) x(i) = uni(rng);
    for (int i = 0; i < 4; ++i) y(i) = uni(rng);
    return pair_to_sym(x, y).matrix();
  };
  std::uniform_real_distribution<double> alpha_dist(-3.0, 4.0);
  while (rep.pairs_tested < count) {
    const Eigen::Matrix4d m1 = random_pair();
    const Eigen::Matrix4d m2 = random_pair();
    // Differences close to rank 3 make the pencil numerically degenerate.
    if (numerical_rank(m1 - m2, kPencilMarginTol).rank != 4) {
      ++rep.pairs_excluded;
      continue;
    }
    ++rep.pairs_tested;
    bool ok = true;
    try {
      const DoubleRootFit fit = fit_double_roots(pencil_quartic(m1, m2), tol);
      ok = std::abs(fit.c - 1.0) < 1e-6;
    } catch (const Error&) {
      ok = false;
    }
    std::map<int, long> hist;
    for (int k = 0; k < 1000; ++k) {
      const double alpha = (k - 250) / 100.0;
      ++hist[numerical_rank(alpha * m1 + (1.0 - alpha) * m2, tol).rank];
    }
    ok = ok && hist.size() == 2 && hist.count(2) == 1 && hist.at(2) == 2 &&
         hist.count(4) == 1 && hist.at(4) == 998;
    for (int r = 0; r < 20; ++r) {
      double alpha = alpha_dist(rng);
      if (std::abs(alpha) < 1e-3 || std::abs(alpha - 1.0) < 1e-3) alpha += 0.5;
      ok = ok && numerical_rank(alpha * m1 + (1.0 - alpha) * m2, tol).rank == 4;
    }
    for (const auto& [r, c] : hist) rep.rank_histogram[r] += c;
    if (ok) ++rep.pairs_passed;
  }
  rep.passed = rep.pairs_passed == rep.pairs_tested;
  return rep;
}

}  // namespace utri
