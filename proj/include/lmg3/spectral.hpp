#pragma once

#include <Eigen/Dense>

#include <array>
#include <memory>
#include <vector>

#include "lmg3/lmg_model.hpp"

namespace lmg3 {

/// Lowest eigenpairs of one sector Hamiltonian, eigenvalues ascending.
struct SpectrumResult {
  IrrepShape shape;
  double lambda = 0.0;
  Eigen::VectorXd eigenvalues;
  /// Columns are the eigenvectors matching `eigenvalues`, each with its
  /// largest-magnitude component positive.
  Eigen::MatrixXd vectors;

  Eigen::VectorXd ground_vector() const { return vectors.col(0); }
};

/// Dense symmetric eigensolve; `count` lowest pairs (all of them when count >= dim).
/// Rejects matrices that are not symmetric to 1e-12 relative.
SpectrumResult diagonalize(const SectorHamiltonian& h, int count);

/// Flips `v` so that its largest-magnitude component is positive.
void fix_sign(Eigen::Ref<Eigen::VectorXd> v);

struct EigenPair {
  double value = 0.0;
  Eigen::VectorXd vector;
  /// Second-lowest Ritz value (exact for dense solves); +inf for 1x1 problems.
  double next_value = 0.0;
  double residual = 0.0;
};

/// Lowest eigenpair of a real symmetric sparse matrix: explicitly restarted Lanczos with
/// full reorthogonalization above `dense_cutoff`, dense solve below it. The start vector
/// is fixed, so results are reproducible bit for bit.
EigenPair lowest_eigenpair(const SparseMatrix& h, double tol = 1e-12, int dense_cutoff = 200);

/// Lowest sector state of H at a single coupling.
struct GroundState {
  double energy = 0.0;
  Eigen::VectorXd vector;  // full sector basis, unit norm, sign fixed
  ParityLabel parity;
  /// Distance to the next level found (other parity blocks and the same block).
  double gap = 0.0;
  bool degenerate = false;
};

/// Ground-state solver for one sector that splits H into its four parity blocks and
/// rebuilds only the scalar combination per coupling.
class SectorSolver {
 public:
  explicit SectorSolver(std::shared_ptr<const HamiltonianTerms> terms);
  explicit SectorSolver(const IrrepShape& shape);

  const HamiltonianTerms& terms() const { return *terms_; }
  const IrrepShape& shape() const { return terms_->shape(); }

  GroundState ground_state(const ModelParams& params) const;

  /// Level populations <S_ii>/N of a sector vector.
  std::array<double, 3> populations(const Eigen::VectorXd& v) const;

  static constexpr double degeneracy_gap = 1e-10;

 private:
  struct Block {
    ParityLabel label;
    std::vector<int> indices;
    SparseMatrix free_part;
    SparseMatrix pair_part;
  };
  std::shared_ptr<const HamiltonianTerms> terms_;
  std::vector<Block> blocks_;
};

/// S_ij = sum over atoms of the one-site Hubbard operator E_ij on the 3^N product space.
/// Basis index = sum_mu (level_mu - 1) 3^mu.
struct FullTensorOperators {
  int particles = 0;
  std::array<SparseMatrix, 9> s;
  const SparseMatrix& operator()(int i, int j) const { return s[3 * (i - 1) + (j - 1)]; }
};

/// Refuses N > 4 (dense 3^N work) and N < 1.
FullTensorOperators full_tensor_operators(int particles);

/// Full 3^N spectrum of H, ascending. For N = 1 the pair term is taken as zero.
std::vector<double> full_tensor_spectrum(int particles, const ModelParams& params);

/// Multiplicity-weighted union of the sector spectra of all shapes with N boxes, ascending.
std::vector<double> sector_spectrum_union(int particles, const ModelParams& params);

struct SweepPoint {
  double lambda = 0.0;
  double energy = 0.0;
  /// 2(1 - F)/dlambda^2; NaN when not computed.
  double chi = 0.0;
  double fidelity = 1.0;
  std::array<double, 3> populations{};
  /// Lowest level degenerate (gap < 1e-10) at lambda or lambda + dlambda.
  bool degenerate = false;
};

struct SweepResult {
  IrrepShape shape;
  double dlambda = 0.0;
  std::vector<SweepPoint> points;
};

struct SweepOptions {
  double epsilon = 1.0;
  double dlambda = 0.01;
  int threads = 1;
};

/// Ground-state fidelity susceptibility and populations on a sorted lambda grid.
SweepResult susceptibility_sweep(const IrrepShape& shape, const std::vector<double>& lambdas,
                                 const SweepOptions& options = {});

/// Populations only; chi and fidelity are NaN.
SweepResult population_sweep(const IrrepShape& shape, const std::vector<double>& lambdas,
                             const SweepOptions& options = {});

/// Index of the first local maximum of chi (strictly above its left neighbour and not below
/// its right one), ignoring degenerate points; -1 if none.
int first_chi_peak(const SweepResult& sweep);

/// Index of the global maximum of chi among non-degenerate points; -1 if none.
int max_chi_index(const SweepResult& sweep);

}  // namespace lmg3
