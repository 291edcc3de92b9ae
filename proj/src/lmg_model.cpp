#include "lmg3/lmg_model.hpp"

#include <stdexcept>

namespace lmg3 {

HamiltonianTerms::HamiltonianTerms(const IrrepShape& shape)
    : HamiltonianTerms(std::make_shared<const CollectiveOperators>(shape)) {}

HamiltonianTerms::HamiltonianTerms(std::shared_ptr<const CollectiveOperators> ops)
    : ops_(std::move(ops)) {
  const auto& s = *ops_;
  free_ = s(3, 3) - s(1, 1);
  pair_ = SparseMatrix(s.dim(), s.dim());
  for (int i = 1; i <= 3; ++i)
    for (int j = 1; j <= 3; ++j)
      if (i != j) pair_ += SparseMatrix(s(i, j) * s(i, j));
  free_.makeCompressed();
  pair_.prune(0.0);
  pair_.makeCompressed();
}

SectorHamiltonian HamiltonianTerms::build(const ModelParams& params) const {
  const int n = shape().particles();
  if (n < 1) throw std::domain_error("Hamiltonian needs at least one particle");
  SparseMatrix h = (params.epsilon / n) * free_;
  if (n == 1) {
    if (params.lambda != 0.0)
      throw std::domain_error("two-body coupling undefined for N = 1 (no particle pairs)");
  } else {
    h -= (params.lambda / (static_cast<double>(n) * (n - 1))) * pair_;
  }
  h.makeCompressed();
  return {shape(), params, std::move(h)};
}

SectorHamiltonian build_h3(const IrrepShape& shape, const ModelParams& params) {
  return HamiltonianTerms(shape).build(params);
}

Eigen::MatrixXd build_h2(int two_j, const TwoLevelParams& params) {
  if (two_j < 0) throw std::invalid_argument("build_h2: negative spin");
  const int d = two_j + 1;
  // GT label m11 of [2j, 0]; J_z = (S_22 - S_11)/2 = j - m11, so row r = m + j holds m11 = 2j - r.
  const int upper[2] = {two_j, 0};
  Eigen::MatrixXd jplus = Eigen::MatrixXd::Zero(d, d);   // S_21
  Eigen::MatrixXd jminus = Eigen::MatrixXd::Zero(d, d);  // S_12
  Eigen::VectorXd jz(d);
  for (int r = 0; r < d; ++r) {
    const int row[1] = {two_j - r};
    jz(r) = r - two_j / 2.0;
    const double up = gt_step_coefficient(upper, row, {}, 0, StepDirection::lower);
    if (up != 0.0) jplus(r + 1, r) = up;
    const double down = gt_step_coefficient(upper, row, {}, 0, StepDirection::raise);
    if (down != 0.0) jminus(r - 1, r) = down;
  }
  Eigen::MatrixXd h = params.epsilon * jz.asDiagonal().toDenseMatrix();
  h += 0.5 * params.lambda1 * (jplus * jplus + jminus * jminus);
  h += 0.5 * params.lambda2 * (jplus * jminus + jminus * jplus);
  return h;
}

double free_energy_of_pattern(const GtPattern& p, const ModelParams& params) {
  const int n = p.m13 + p.m23 + p.m33;
  if (n < 1) throw std::domain_error("free energy needs at least one particle");
  return params.epsilon / n * (n - p.m11 - p.m12 - p.m22);
}

ParityOperators parity_ops(const SectorBasis& basis) {
  ParityOperators out;
  const int h[3] = {basis.shape().h1, basis.shape().h2, basis.shape().h3};
  for (int i = 0; i < 3; ++i) {
    out.plain[i].resize(basis.size());
    out.normalized[i].resize(basis.size());
  }
  for (int n = 0; n < basis.size(); ++n) {
    const Weight w = weight_of(basis[n]);
    for (int i = 0; i < 3; ++i) {
      const int wi = w[i + 1];
      out.plain[i](n) = wi % 2 == 0 ? 1.0 : -1.0;
      out.normalized[i](n) = (wi - h[i]) % 2 == 0 ? 1.0 : -1.0;
    }
  }
  return out;
}

std::vector<ParityLabel> parity_labels(const SectorBasis& basis) {
  const int h[3] = {basis.shape().h1, basis.shape().h2, basis.shape().h3};
  std::vector<ParityLabel> out(basis.size());
  for (int n = 0; n < basis.size(); ++n) {
    const Weight w = weight_of(basis[n]);
    for (int i = 0; i < 3; ++i) out[n].signs[i] = (w[i + 1] - h[i]) % 2 == 0 ? 1 : -1;
  }
  return out;
}

std::map<ParityLabel, std::vector<int>> parity_blocks(const SectorBasis& basis) {
  std::map<ParityLabel, std::vector<int>> out;
  const auto labels = parity_labels(basis);
  for (int n = 0; n < basis.size(); ++n) out[labels[n]].push_back(n);
  return out;
}

}  // namespace lmg3
