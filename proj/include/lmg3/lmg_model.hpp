#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include <array>
#include <map>
#include <memory>
#include <vector>

#include "lmg3/collective_ops.hpp"

namespace lmg3 {

/// Energy splitting and two-body coupling. Energies are densities (per particle);
/// the CLI and the reported tables fix epsilon = 1.
struct ModelParams {
  double epsilon = 1.0;
  double lambda = 0.0;
};

/// H = (eps/N)(S_33 - S_11) - lambda/(N(N-1)) sum_{i != j} S_ij^2 on one irrep.
struct SectorHamiltonian {
  IrrepShape shape;
  ModelParams params;
  SparseMatrix matrix;

  Eigen::MatrixXd dense() const { return Eigen::MatrixXd(matrix); }
};

/// The lambda-independent pieces of H on one sector, so parameter sweeps only rescale.
class HamiltonianTerms {
 public:
  explicit HamiltonianTerms(std::shared_ptr<const CollectiveOperators> ops);
  explicit HamiltonianTerms(const IrrepShape& shape);

  const CollectiveOperators& ops() const { return *ops_; }
  std::shared_ptr<const CollectiveOperators> ops_ptr() const { return ops_; }
  const IrrepShape& shape() const { return ops_->shape(); }

  /// S_33 - S_11.
  const SparseMatrix& free_part() const { return free_; }
  /// sum over the six ordered pairs i != j of S_ij * S_ij.
  const SparseMatrix& pair_part() const { return pair_; }

  /// Throws std::domain_error for N = 1 with lambda != 0 (the pair term is undefined).
  SectorHamiltonian build(const ModelParams& params) const;

 private:
  std::shared_ptr<const CollectiveOperators> ops_;
  SparseMatrix free_;
  SparseMatrix pair_;
};

SectorHamiltonian build_h3(const IrrepShape& shape, const ModelParams& params);

/// Couplings of the two-level Hamiltonian
/// H2 = eps J_z + (lambda1/2)(J_+^2 + J_-^2) + (lambda2/2)(J_+ J_- + J_- J_+).
struct TwoLevelParams {
  double epsilon = 1.0;
  double lambda1 = 0.0;
  double lambda2 = 0.0;
};

/// H2 on the spin-j Dicke multiplet built from the U(2) GT basis of [2j, 0]. Rows are
/// ordered m = -j, ..., j. `two_j` must be non-negative.
Eigen::MatrixXd build_h2(int two_j, const TwoLevelParams& params);

/// (eps/N)(N - m11 - m12 - m22), the lambda = 0 eigenvalue of a GT pattern.
double free_energy_of_pattern(const GtPattern& pattern, const ModelParams& params);

/// Parity eigenvalues (+1 / -1) of one basis state.
struct ParityLabel {
  std::array<int, 3> signs{1, 1, 1};
  friend auto operator<=>(const ParityLabel&, const ParityLabel&) = default;
};

/// Diagonals of Pi_i = exp(i pi S_ii) and of the normalized Pi^_i = Pi_i exp(-i pi h_i).
struct ParityOperators {
  std::array<Eigen::VectorXd, 3> plain;
  std::array<Eigen::VectorXd, 3> normalized;
};

ParityOperators parity_ops(const SectorBasis& basis);

/// Normalized parity label (Pi^_1, Pi^_2, Pi^_3) of each basis state.
std::vector<ParityLabel> parity_labels(const SectorBasis& basis);

/// Basis indices grouped by normalized parity label, each group in basis order.
std::map<ParityLabel, std::vector<int>> parity_blocks(const SectorBasis& basis);

}  // namespace lmg3
