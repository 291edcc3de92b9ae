#include "lmg3/collective_ops.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace lmg3 {

double gt_step_coefficient(std::span<const int> upper, std::span<const int> row,
                           std::span<const int> lower, int j, StepDirection direction) {
  const int k = static_cast<int>(row.size());
  if (static_cast<int>(upper.size()) != k + 1 || static_cast<int>(lower.size()) != k - 1 ||
      j < 0 || j >= k) {
    throw std::invalid_argument("gt_step_coefficient: inconsistent row lengths");
  }
  const bool raise = direction == StepDirection::raise;
  const int target = row[j] + (raise ? 1 : -1);

  // Betweenness of the target entry against the rows above and below.
  if (target > upper[j] || target < upper[j + 1]) return 0.0;
  if (j > 0 && target > lower[j - 1]) return 0.0;
  if (j < k - 1 && target < lower[j]) return 0.0;

  // Shifted labels l_i = m_i - i, with 1-based i.
  const auto shifted = [](std::span<const int> r, int i) { return std::int64_t{r[i]} - (i + 1); };
  const std::int64_t lj = shifted(row, j);

  std::int64_t num = -1;
  for (int i = 0; i <= k; ++i) num *= shifted(upper, i) - lj + (raise ? 0 : 1);
  for (int i = 0; i < k - 1; ++i) num *= shifted(lower, i) - lj - (raise ? 1 : 0);

  std::int64_t den = 1;
  for (int i = 0; i < k; ++i) {
    if (i == j) continue;
    const std::int64_t d = shifted(row, i) - lj;
    den *= d * (d + (raise ? -1 : 1));
  }
  if (den == 0 || num == 0) return 0.0;
  const double radicand = static_cast<double>(num) / static_cast<double>(den);
  if (radicand <= 0.0) return 0.0;
  return std::sqrt(radicand);
}

namespace {

SparseMatrix from_triplets(int dim, const std::vector<Eigen::Triplet<double>>& triplets) {
  SparseMatrix m(dim, dim);
  m.setFromTriplets(triplets.begin(), triplets.end());
  m.makeCompressed();
  return m;
}

}  // namespace

SectorOperator diagonal_op(const SectorBasis& basis, int k) {
  if (k < 1 || k > 3) throw std::invalid_argument("diagonal_op: level must be 1, 2 or 3");
  std::vector<Eigen::Triplet<double>> t;
  t.reserve(basis.size());
  for (int n = 0; n < basis.size(); ++n) {
    const int w = weight_of(basis[n])[k];
    if (w != 0) t.emplace_back(n, n, w);
  }
  return {basis.shape(), from_triplets(basis.size(), t)};
}

SectorOperator step_op(const SectorBasis& basis, int k, StepDirection direction) {
  if (k != 2 && k != 3) throw std::invalid_argument("step_op: k must be 2 or 3");
  const int delta = direction == StepDirection::raise ? 1 : -1;
  std::vector<Eigen::Triplet<double>> t;
  t.reserve(2 * basis.size());
  for (int col = 0; col < basis.size(); ++col) {
    const GtPattern& p = basis[col];
    const int top[3] = {p.m13, p.m23, p.m33};
    const int mid[2] = {p.m12, p.m22};
    const int bot[1] = {p.m11};
    if (k == 2) {
      const double c = gt_step_coefficient(std::span<const int>(mid, 2), std::span<const int>(bot, 1),
                                           std::span<const int>(), 0, direction);
      if (c == 0.0) continue;
      GtPattern q = p;
      q.m11 += delta;
      t.emplace_back(basis.index_of(q), col, c);
    } else {
      for (int j = 0; j < 2; ++j) {
        const double c = gt_step_coefficient(std::span<const int>(top, 3), std::span<const int>(mid, 2),
                                             std::span<const int>(bot, 1), j, direction);
        if (c == 0.0) continue;
        GtPattern q = p;
        (j == 0 ? q.m12 : q.m22) += delta;
        t.emplace_back(basis.index_of(q), col, c);
      }
    }
  }
  return {basis.shape(), from_triplets(basis.size(), t)};
}

SectorOperator long_op(const SectorOperator& outer, const SectorOperator& inner) {
  if (outer.shape != inner.shape) throw std::invalid_argument("long_op: shape mismatch");
  SparseMatrix c = SparseMatrix(outer.matrix * inner.matrix) - SparseMatrix(inner.matrix * outer.matrix);
  c.prune(0.0);
  c.makeCompressed();
  return {outer.shape, std::move(c)};
}

CollectiveOperators::CollectiveOperators(const IrrepShape& shape)
    : CollectiveOperators(std::make_shared<const SectorBasis>(shape)) {}

CollectiveOperators::CollectiveOperators(std::shared_ptr<const SectorBasis> basis)
    : basis_(std::move(basis)) {
  for (int k = 1; k <= 3; ++k) ops_[index(k, k)] = diagonal_op(*basis_, k).matrix;
  const SectorOperator s21 = step_op(*basis_, 2, StepDirection::lower);
  const SectorOperator s12 = step_op(*basis_, 2, StepDirection::raise);
  const SectorOperator s32 = step_op(*basis_, 3, StepDirection::lower);
  const SectorOperator s23 = step_op(*basis_, 3, StepDirection::raise);
  ops_[index(3, 1)] = long_op(s32, s21).matrix;
  ops_[index(1, 3)] = long_op(s12, s23).matrix;
  ops_[index(2, 1)] = s21.matrix;
  ops_[index(1, 2)] = s12.matrix;
  ops_[index(3, 2)] = s32.matrix;
  ops_[index(2, 3)] = s23.matrix;
}

int CollectiveOperators::index(int i, int j) {
  if (i < 1 || i > 3 || j < 1 || j > 3) throw std::out_of_range("level index out of range");
  return 3 * (i - 1) + (j - 1);
}

double max_abs(const SparseMatrix& m) {
  double out = 0.0;
  for (int c = 0; c < m.outerSize(); ++c)
    for (SparseMatrix::InnerIterator it(m, c); it; ++it) out = std::max(out, std::abs(it.value()));
  return out;
}

double commutator_violation(const CollectiveOperators& ops, int i, int j, int k, int l) {
  SparseMatrix lhs = SparseMatrix(ops(i, j) * ops(k, l)) - SparseMatrix(ops(k, l) * ops(i, j));
  if (j == k) lhs -= ops(i, l);
  if (i == l) lhs += ops(k, j);
  return max_abs(lhs);
}

AlgebraReport check_algebra(const CollectiveOperators& ops) {
  AlgebraReport report;
  for (int i = 1; i <= 3; ++i)
    for (int j = 1; j <= 3; ++j)
      for (int k = 1; k <= 3; ++k)
        for (int l = 1; l <= 3; ++l) {
          const double v = commutator_violation(ops, i, j, k, l);
          if (v > report.max_violation) report = {v, i, j, k, l};
        }
  return report;
}

std::string AlgebraReport::describe() const {
  std::ostringstream os;
  os << "max commutator violation " << max_violation;
  if (max_violation > 0.0) os << " at [S_" << i << j << ", S_" << k << l << ']';
  return os.str();
}

}  // namespace lmg3
