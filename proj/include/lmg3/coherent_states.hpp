#pragma once

#include <Eigen/Dense>

#include <complex>
#include <utility>

#include "lmg3/collective_ops.hpp"

namespace lmg3 {

/// Coordinates of a U(3) coherent state: lower-triangular entries (alpha, beta, gamma) of
///
///       | 1      0      0 |
///   T = | alpha  1      0 |
///       | beta   gamma  1 |
///
/// and the diagonal phases u_i of U = GramSchmidt(T) diag(u1, u2, u3).
template <typename Real>
struct CoherentPoint {
  using Complex = std::complex<Real>;
  Complex alpha{0}, beta{0}, gamma{0};
  Complex u1{1}, u2{1}, u3{1};

  /// l1 = 1 + |alpha|^2 + |beta|^2
  Real l1() const { return Real(1) + std::norm(alpha) + std::norm(beta); }
  /// l2 = 1 + |gamma|^2 + |beta - alpha gamma|^2
  Real l2() const { return Real(1) + std::norm(gamma) + std::norm(beta - alpha * gamma); }
};

using CoherentPointd = CoherentPoint<double>;

/// Row weights of a shape as reals, so the same formulas serve integer shapes and the
/// scaled proportions used in the thermodynamic limit.
template <typename Real>
using ShapeWeights = Eigen::Matrix<Real, 3, 1>;

inline ShapeWeights<double> shape_weights(const IrrepShape& s) { return {double(s.h1), double(s.h2), double(s.h3)}; }

/// Coherent-state expectation values s_ij = <h,U| S_ij |h,U>, stored as s(i-1, j-1).
template <typename Real>
using SymbolTable = Eigen::Matrix<std::complex<Real>, 3, 3>;

/// V diag(u1, u2, u3) where V is the Gram-Schmidt orthonormalization of T's columns.
Eigen::Matrix3cd unitary_from_point(const CoherentPointd& p);

/// The triangular matrix T of a point.
Eigen::Matrix3cd triangular_from_point(const CoherentPointd& p);

/// Overlap {h; p' | h; p} of unnormalized coherent states:
/// (1 + alpha conj(alpha') + beta conj(beta'))^(h1-h2)
///   * (1 + gamma conj(gamma') + (beta - alpha gamma)(conj(beta') - conj(alpha') conj(gamma')))^(h2-h3)
std::complex<double> bergman_kernel(const IrrepShape& shape, const CoherentPointd& primed,
                                    const CoherentPointd& p);

/// K_h = u1^h1 u2^h2 u3^h3 / (l1^((h1-h2)/2) l2^((h2-h3)/2)).
std::complex<double> normalizing_factor(const IrrepShape& shape, const CoherentPointd& p);

/// Closed-form symbols. Entries not written explicitly follow from s_ij = conj(s_ji).
template <typename Real>
SymbolTable<Real> symbols_closed_form(const ShapeWeights<Real>& h, const CoherentPoint<Real>& p) {
  using C = std::complex<Real>;
  const C a = p.alpha, b = p.beta, g = p.gamma;
  const C bp = b - a * g;
  const Real l1 = p.l1(), l2 = p.l2();
  const Real h1 = h(0), h2 = h(1), h3 = h(2);
  SymbolTable<Real> s;
  s(0, 0) = h1 / l1 + h2 * std::norm(a + b * std::conj(g)) / (l1 * l2) + h3 * std::norm(bp) / l2;
  s(1, 1) = h1 * std::norm(a) / l1 +
            h2 * std::norm(Real(1) - a * std::conj(b) * g + b * std::conj(b)) / (l1 * l2) +
            h3 * std::norm(g) / l2;
  s(2, 2) = (h1 * std::norm(b) + h2 * (Real(1) + std::norm(a))) / l1 + (h3 - h2) / l2;
  s(0, 1) = (h1 - h2) * a / l1 - (h2 - h3) * std::conj(g) * bp / l2;
  s(0, 2) = (h1 - h2) * b / l1 + (h2 - h3) * bp / l2;
  s(1, 2) = (h1 - h2) * std::conj(a) * b / l1 + (h2 - h3) * g / l2;
  s(1, 0) = std::conj(s(0, 1));
  s(2, 0) = std::conj(s(0, 2));
  s(2, 1) = std::conj(s(1, 2));
  return s;
}

inline SymbolTable<double> symbols_closed_form(const IrrepShape& shape, const CoherentPointd& p) {
  return symbols_closed_form<double>(shape_weights(shape), p);
}

/// Gradient of B_h(x, y, z; alpha, beta, gamma) with respect to the antiholomorphic
/// slots x = conj(alpha'), y = conj(beta'), z = conj(gamma'), evaluated on the diagonal.
struct KernelGradient {
  std::complex<double> value, d_alpha_bar, d_beta_bar, d_gamma_bar;
};

KernelGradient kernel_gradient(const IrrepShape& shape, const CoherentPointd& p);

/// s_ij from the differential realization of S_ij acting on the Bergman kernel, divided
/// by the kernel. Independent of `symbols_closed_form`.
SymbolTable<double> symbols_via_kernel(const IrrepShape& shape, const CoherentPointd& p);

/// exp(beta S_31) exp(alpha S_21) exp(gamma S_32) |hw> in the GT basis, without
/// normalization. The exponentials are finite sums: the lowering operators are nilpotent.
Eigen::VectorXcd coherent_vector_unnormalized(const CollectiveOperators& ops, const CoherentPointd& p);

/// Unit-norm coherent vector (phases u_i ignored).
Eigen::VectorXcd coherent_vector(const CollectiveOperators& ops, const CoherentPointd& p);

/// <v| S_ij |v> / <v|v> for all i, j.
SymbolTable<double> matrix_expectations(const CollectiveOperators& ops, const Eigen::VectorXcd& v);

/// <v| S_ij S_kl |v> / <v|v>.
std::complex<double> quadratic_expectation(const CollectiveOperators& ops, const Eigen::VectorXcd& v,
                                           int i, int j, int k, int l);

/// Action of Pi_i = exp(i pi S_ii) on a coherent state: the mapped point and the sign
/// exp(i pi h_i) = (-1)^h_i. With `normalized`, the action of Pi^_i = Pi_i exp(-i pi h_i),
/// whose sign is always +1.
std::pair<CoherentPointd, int> parity_map(const IrrepShape& shape, const CoherentPointd& p, int level,
                                          bool normalized = false);

struct CatState {
  Eigen::VectorXcd vector;  // unnormalized
  bool vanishing = false;   // norm below 1e-12 relative to the input state
};

/// (1 + Pi^_1 + Pi^_2 + Pi^_3) applied to the normalized coherent vector at p.
CatState cat_state(const CollectiveOperators& ops, const CoherentPointd& p);

/// Applies the normalized parity Pi^_level to a sector vector.
Eigen::VectorXcd apply_parity(const SectorBasis& basis, const Eigen::VectorXcd& v, int level);

}  // namespace lmg3
