#include "lmg3/coherent_states.hpp"

#include <cmath>
#include <stdexcept>

#include "lmg3/lmg_model.hpp"

namespace lmg3 {

using cd = std::complex<double>;

Eigen::Matrix3cd triangular_from_point(const CoherentPointd& p) {
  Eigen::Matrix3cd t;
  t << 1.0, 0.0, 0.0,  //
      p.alpha, 1.0, 0.0,  //
      p.beta, p.gamma, 1.0;
  return t;
}

Eigen::Matrix3cd unitary_from_point(const CoherentPointd& p) {
  const cd a = p.alpha, b = p.beta, g = p.gamma;
  const cd ac = std::conj(a), bc = std::conj(b), gc = std::conj(g);
  const double s1 = std::sqrt(p.l1()), s2 = std::sqrt(p.l2()), s12 = s1 * s2;
  Eigen::Matrix3cd v;
  v << 1.0 / s1, (-ac - g * bc) / s12, (-bc + ac * gc) / s2,  //
      a / s1, (1.0 + b * bc - a * g * bc) / s12, -gc / s2,   //
      b / s1, (g - b * ac + g * a * ac) / s12, 1.0 / s2;
  return v * Eigen::Vector3cd(p.u1, p.u2, p.u3).asDiagonal();
}

cd bergman_kernel(const IrrepShape& shape, const CoherentPointd& q, const CoherentPointd& p) {
  const cd first = 1.0 + p.alpha * std::conj(q.alpha) + p.beta * std::conj(q.beta);
  const cd second = 1.0 + p.gamma * std::conj(q.gamma) +
                    (p.beta - p.alpha * p.gamma) *
                        (std::conj(q.beta) - std::conj(q.alpha) * std::conj(q.gamma));
  return std::pow(first, shape.h1 - shape.h2) * std::pow(second, shape.h2 - shape.h3);
}

cd normalizing_factor(const IrrepShape& shape, const CoherentPointd& p) {
  const cd phases = std::pow(p.u1, shape.h1) * std::pow(p.u2, shape.h2) * std::pow(p.u3, shape.h3);
  return phases / (std::pow(p.l1(), 0.5 * (shape.h1 - shape.h2)) *
                   std::pow(p.l2(), 0.5 * (shape.h2 - shape.h3)));
}

KernelGradient kernel_gradient(const IrrepShape& shape, const CoherentPointd& p) {
  const double a = shape.h1 - shape.h2;
  const double b = shape.h2 - shape.h3;
  const cd bp = p.beta - p.alpha * p.gamma;
  // On the diagonal the two kernel factors are l1 and l2.
  const double first = p.l1(), second = p.l2();
  const cd value = std::pow(first, a) * std::pow(second, b);
  // d(log B) along x = conj(alpha'), y = conj(beta'), z = conj(gamma').
  const cd dx = a * p.alpha / first - b * bp * std::conj(p.gamma) / second;
  const cd dy = a * p.beta / first + b * bp / second;
  const cd dz = b * (p.gamma - bp * std::conj(p.alpha)) / second;
  return {value, value * dx, value * dy, value * dz};
}

SymbolTable<double> symbols_via_kernel(const IrrepShape& shape, const CoherentPointd& p) {
  const KernelGradient k = kernel_gradient(shape, p);
  const cd dx = k.d_alpha_bar / k.value, dy = k.d_beta_bar / k.value, dz = k.d_gamma_bar / k.value;
  const cd x = std::conj(p.alpha), y = std::conj(p.beta), z = std::conj(p.gamma);
  const double h1 = shape.h1, h2 = shape.h2, h3 = shape.h3;
  SymbolTable<double> s;
  s(1, 0) = x * (h1 - h2) - (y - x * z) * dz - x * (y * dy + x * dx);
  s(0, 1) = dx;
  s(2, 0) = (h1 - h3) * y + (h3 - h2) * x * z - z * (y - x * z) * dz - y * (y * dy + x * dx);
  s(0, 2) = dy;
  s(2, 1) = (h2 - h3) * z - z * z * dz + y * dx;
  s(1, 2) = dz + x * dy;
  s(0, 0) = h1 - y * dy - x * dx;
  s(1, 1) = h2 + x * dx - z * dz;
  s(2, 2) = h3 + z * dz + y * dy;
  return s;
}

namespace {

Eigen::VectorXcd apply_real(const SparseMatrix& m, const Eigen::VectorXcd& v) {
  const Eigen::VectorXd re = m * v.real();
  const Eigen::VectorXd im = m * v.imag();
  Eigen::VectorXcd out(v.size());
  out.real() = re;
  out.imag() = im;
  return out;
}

/// exp(c A) v for nilpotent A; stops at the first exactly-zero term.
Eigen::VectorXcd exp_action(const SparseMatrix& a, cd c, const Eigen::VectorXcd& v) {
  Eigen::VectorXcd sum = v;
  if (c == 0.0) return sum;
  Eigen::VectorXcd term = v;
  for (Eigen::Index k = 1; k <= v.size(); ++k) {
    term = apply_real(a, term) * (c / static_cast<double>(k));
    if (term.cwiseAbs2().maxCoeff() == 0.0) break;
    sum += term;
  }
  return sum;
}

}  // namespace

Eigen::VectorXcd coherent_vector_unnormalized(const CollectiveOperators& ops, const CoherentPointd& p) {
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(ops.dim());
  v(ops.basis().index_of(hw_pattern(ops.shape()))) = 1.0;
  v = exp_action(ops(3, 2), p.gamma, v);
  v = exp_action(ops(2, 1), p.alpha, v);
  v = exp_action(ops(3, 1), p.beta, v);
  return v;
}

Eigen::VectorXcd coherent_vector(const CollectiveOperators& ops, const CoherentPointd& p) {
  Eigen::VectorXcd v = coherent_vector_unnormalized(ops, p);
  v.normalize();
  return v;
}

SymbolTable<double> matrix_expectations(const CollectiveOperators& ops, const Eigen::VectorXcd& v) {
  const double norm2 = v.squaredNorm();
  SymbolTable<double> s;
  for (int i = 1; i <= 3; ++i)
    for (int j = 1; j <= 3; ++j) s(i - 1, j - 1) = v.dot(apply_real(ops(i, j), v)) / norm2;
  return s;
}

cd quadratic_expectation(const CollectiveOperators& ops, const Eigen::VectorXcd& v, int i, int j,
                         int k, int l) {
  return v.dot(apply_real(ops(i, j), apply_real(ops(k, l), v))) / v.squaredNorm();
}

std::pair<CoherentPointd, int> parity_map(const IrrepShape& shape, const CoherentPointd& p, int level,
                                          bool normalized) {
  CoherentPointd q = p;
  int h = 0;
  switch (level) {
    case 1:
      q.alpha = -p.alpha;
      q.beta = -p.beta;
      h = shape.h1;
      break;
    case 2:
      q.alpha = -p.alpha;
      q.gamma = -p.gamma;
      h = shape.h2;
      break;
    case 3:
      q.beta = -p.beta;
      q.gamma = -p.gamma;
      h = shape.h3;
      break;
    default:
      throw std::invalid_argument("parity_map: level must be 1, 2 or 3");
  }
  const int sign = normalized || h % 2 == 0 ? 1 : -1;
  return {q, sign};
}

Eigen::VectorXcd apply_parity(const SectorBasis& basis, const Eigen::VectorXcd& v, int level) {
  if (level < 1 || level > 3) throw std::invalid_argument("apply_parity: level must be 1, 2 or 3");
  const ParityOperators pi = parity_ops(basis);
  return pi.normalized[level - 1].cast<cd>().cwiseProduct(v);
}

CatState cat_state(const CollectiveOperators& ops, const CoherentPointd& p) {
  const Eigen::VectorXcd v = coherent_vector(ops, p);
  const ParityOperators pi = parity_ops(ops.basis());
  const Eigen::VectorXd projector =
      Eigen::VectorXd::Ones(ops.dim()) + pi.normalized[0] + pi.normalized[1] + pi.normalized[2];
  CatState out;
  out.vector = projector.cast<cd>().cwiseProduct(v);
  out.vanishing = out.vector.norm() < 1e-12;
  return out;
}

}  // namespace lmg3
