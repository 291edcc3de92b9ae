#pragma once

#include <Eigen/Sparse>

#include <array>
#include <memory>
#include <span>
#include <string>

#include "lmg3/irrep_basis.hpp"

namespace lmg3 {

using SparseMatrix = Eigen::SparseMatrix<double>;

enum class StepDirection { raise, lower };

/// Gelfand-Tsetlin matrix element for moving entry `j` (0-based) of `row` by +1 (raise)
/// or -1 (lower), given the row above it (one entry longer) and the row below it (one
/// entry shorter, possibly empty). Uses shifted labels l_i = m_i - i. Returns exactly
/// zero whenever the target pattern leaves the betweenness lattice or the formula
/// degenerates (vanishing denominator, negative radicand).
double gt_step_coefficient(std::span<const int> upper, std::span<const int> row,
                           std::span<const int> lower, int j, StepDirection direction);

/// One collective operator restricted to an irrep, in the GT basis of that irrep.
struct SectorOperator {
  IrrepShape shape;
  SparseMatrix matrix;
};

/// S_kk: diagonal with the k-th weight component of each pattern (k = 1, 2, 3).
SectorOperator diagonal_op(const SectorBasis& basis, int k);

/// S_{k,k-1} (lower) or S_{k-1,k} (raise) for k = 2, 3.
SectorOperator step_op(const SectorBasis& basis, int k, StepDirection direction);

/// S_31 = [S_32, S_21] or S_13 = [S_12, S_23], from the step operators.
SectorOperator long_op(const SectorOperator& outer, const SectorOperator& inner);

/// All nine S_ij on one irrep. Immutable after construction.
class CollectiveOperators {
 public:
  explicit CollectiveOperators(const IrrepShape& shape);
  explicit CollectiveOperators(std::shared_ptr<const SectorBasis> basis);

  const SectorBasis& basis() const { return *basis_; }
  std::shared_ptr<const SectorBasis> basis_ptr() const { return basis_; }
  const IrrepShape& shape() const { return basis_->shape(); }
  int dim() const { return basis_->size(); }

  /// S_ij with 1-based level indices.
  const SparseMatrix& operator()(int i, int j) const { return ops_[index(i, j)]; }

 private:
  static int index(int i, int j);
  std::shared_ptr<const SectorBasis> basis_;
  std::array<SparseMatrix, 9> ops_;
};

struct AlgebraReport {
  double max_violation = 0.0;
  // Offending pair [S_ij, S_kl] with the largest violation.
  int i = 0, j = 0, k = 0, l = 0;

  bool ok(double tol = 1e-10) const { return max_violation <= tol; }
  std::string describe() const;
};

/// Checks [S_ij, S_kl] = delta_jk S_il - delta_il S_kj for all 81 pairs.
AlgebraReport check_algebra(const CollectiveOperators& ops);

/// Max entrywise violation of a single commutation relation.
double commutator_violation(const CollectiveOperators& ops, int i, int j, int k, int l);

double max_abs(const SparseMatrix& m);

}  // namespace lmg3
