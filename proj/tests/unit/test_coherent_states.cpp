#include "doctest.h"

#include <stdexcept>
#include <cmath>
#include <numbers>
#include <random>

#include "lmg3/coherent_states.hpp"
#include "lmg3/lmg_model.hpp"
#include "lmg3/spectral.hpp"
#include "lmg3/thermo_limit.hpp"

using namespace lmg3;
using cd = std::complex<double>;

namespace {

struct PointSource {
  std::mt19937_64 rng{12345};
  std::uniform_real_distribution<double> u{-1.0, 1.0};
  cd c() { return {u(rng), u(rng)}; }
  CoherentPointd operator()() {
    CoherentPointd p;
    p.alpha = c();
    p.beta = c();
    p.gamma = c();
    return p;
  }
};

double table_diff(const SymbolTable<double>& a, const SymbolTable<double>& b) { return (a - b).cwiseAbs().maxCoeff(); }

/// d/dz of f at z by the trapezoid rule on a circle; exact for polynomials of degree < samples.
template <typename F>
cd cauchy_derivative(F&& f, cd z, double radius = 0.5, int samples = 64) {
  cd sum = 0.0;
  for (int k = 0; k < samples; ++k) {
    const cd w = std::polar(1.0, 2.0 * std::numbers::pi * k / samples);
    sum += f(z + radius * w) / w;
  }
  return sum / (radius * samples);
}

}  // namespace

TEST_CASE("group element of a point") {
  CHECK((unitary_from_point({}) - Eigen::Matrix3cd::Identity()).norm() < 1e-15);
  PointSource rand;
  for (int t = 0; t < 20; ++t) {
    CoherentPointd p = rand();
    p.u1 = std::polar(1.0, 0.3 * t);
    p.u3 = std::polar(1.0, -0.7 * t);
    const Eigen::Matrix3cd u = unitary_from_point(p);
    CHECK((u.adjoint() * u - Eigen::Matrix3cd::Identity()).norm() < 1e-12);
    const Eigen::Vector3cd first = u.col(0) / p.u1;
    CHECK((first - Eigen::Vector3cd(1.0, p.alpha, p.beta) / std::sqrt(p.l1())).norm() < 1e-12);

    const Eigen::Matrix3cd t3 = triangular_from_point(p);
    const Eigen::Matrix3cd g = t3.adjoint() * t3;
    // Leading principal minors of T^dagger T.
    CHECK(std::abs(g(0, 0) - p.l1()) < 1e-12);
    CHECK(std::abs(g.topLeftCorner<2, 2>().determinant() - p.l2()) < 1e-12);

    // Gram-Schmidt through QR: columns of V are Q with R's diagonal made positive.
    Eigen::HouseholderQR<Eigen::Matrix3cd> qr(t3);
    Eigen::Matrix3cd q = qr.householderQ();
    const Eigen::Matrix3cd r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (int k = 0; k < 3; ++k) q.col(k) *= r(k, k) / std::abs(r(k, k));
    CoherentPointd plain = p;
    plain.u1 = plain.u2 = plain.u3 = 1.0;
    CHECK((unitary_from_point(plain) - q).norm() < 1e-12);
  }
}

TEST_CASE("bergman kernel") {
  CHECK(std::abs(bergman_kernel({5, 2, 1}, {}, {}) - 1.0) < 1e-15);
  PointSource rand;
  for (int t = 0; t < 10; ++t) {
    const CoherentPointd p = rand();
    for (const IrrepShape s : {IrrepShape{5, 2, 1}, IrrepShape{4, 4, 0}, IrrepShape{6, 0, 0}}) {
      const cd b = bergman_kernel(s, p, p);
      CHECK(std::abs(b.imag()) < 1e-12 * std::abs(b));
      CHECK(std::abs(b * std::norm(normalizing_factor(s, p)) - 1.0) < 1e-12);
    }
    CHECK(std::abs(bergman_kernel({6, 0, 0}, p, p) - std::pow(p.l1(), 6)) < 1e-9 * std::pow(p.l1(), 6));
  }
}

TEST_CASE("closed-form symbols") {
  const auto s0 = symbols_closed_form({5, 2, 1}, {});
  CHECK(std::abs(s0(0, 0) - 5.0) < 1e-15);
  CHECK(std::abs(s0(1, 1) - 2.0) < 1e-15);
  CHECK(std::abs(s0(2, 2) - 1.0) < 1e-15);
  CHECK(std::abs(s0(0, 1)) + std::abs(s0(0, 2)) + std::abs(s0(1, 2)) == 0.0);
  PointSource rand;
  for (int t = 0; t < 20; ++t) {
    const CoherentPointd p = rand();
    const auto s = symbols_closed_form({5, 2, 1}, p);
    CHECK(std::abs(s.trace() - 8.0) < 1e-12);
    CHECK((s - s.adjoint()).cwiseAbs().maxCoeff() < 1e-12);
    CoherentPointd real;
    real.alpha = p.alpha.real();
    real.beta = p.beta.real();
    const auto sym = symbols_closed_form({7, 0, 0}, real);
    CHECK(std::abs(sym(2, 2) - 7.0 * std::norm(real.beta) / real.l1()) < 1e-12);
  }
}

TEST_CASE("kernel gradient matches contour derivatives") {
  PointSource rand;
  for (const IrrepShape s : {IrrepShape{5, 2, 0}, IrrepShape{4, 4, 0}, IrrepShape{3, 2, 1}, IrrepShape{6, 0, 0}}) {
    for (int t = 0; t < 5; ++t) {
      const CoherentPointd p = rand();
      const KernelGradient g = kernel_gradient(s, p);
      CHECK(std::abs(g.value - bergman_kernel(s, p, p)) < 1e-10 * std::abs(g.value));
      auto along = [&](int which) {
        return [&, which](cd z) {
          CoherentPointd q = p;
          (which == 0 ? q.alpha : which == 1 ? q.beta : q.gamma) = std::conj(z);
          return bergman_kernel(s, q, p);
        };
      };
      const double scale = std::abs(g.value);
      CHECK(std::abs(cauchy_derivative(along(0), std::conj(p.alpha)) - g.d_alpha_bar) < 1e-9 * scale);
      CHECK(std::abs(cauchy_derivative(along(1), std::conj(p.beta)) - g.d_beta_bar) < 1e-9 * scale);
      CHECK(std::abs(cauchy_derivative(along(2), std::conj(p.gamma)) - g.d_gamma_bar) < 1e-9 * scale);
    }
  }
}

TEST_CASE("three routes to the symbols agree") {
  PointSource rand;
  for (const IrrepShape s : {IrrepShape{5, 2, 0}, IrrepShape{4, 4, 0}, IrrepShape{3, 2, 1}, IrrepShape{8, 0, 0},
                             IrrepShape{5, 3, 0}, IrrepShape{4, 3, 1}}) {
    const CollectiveOperators ops(s);
    CHECK(table_diff(symbols_via_kernel(s, {}), symbols_closed_form(s, {})) < 1e-14);
    for (int t = 0; t < 20; ++t) {
      const CoherentPointd p = rand();
      const auto closed = symbols_closed_form(s, p);
      const auto kernel = symbols_via_kernel(s, p);
      const auto matrix = matrix_expectations(ops, coherent_vector(ops, p));
      INFO(s.str());
      CHECK(table_diff(closed, kernel) < 1e-10);
      CHECK(table_diff(closed, matrix) < 1e-10);
    }
  }
}

TEST_CASE("coherent vectors") {
  const CollectiveOperators ops({4, 2, 1});
  const Eigen::VectorXcd v0 = coherent_vector(ops, {});
  const int hw = ops.basis().index_of(hw_pattern(ops.shape()));
  CHECK(std::abs(v0(hw) - 1.0) < 1e-15);
  CHECK(std::abs(v0.norm() - 1.0) < 1e-15);
  PointSource rand;
  for (int t = 0; t < 10; ++t) {
    const CoherentPointd p = rand();
    const Eigen::VectorXcd v = coherent_vector_unnormalized(ops, p);
    CHECK(std::abs(v(hw) - 1.0) < 1e-12);
    CHECK(std::abs(v.squaredNorm() * std::norm(normalizing_factor(ops.shape(), p)) - 1.0) < 1e-10);
  }
}

TEST_CASE("parity maps") {
  PointSource rand;
  for (const IrrepShape s : {IrrepShape{3, 0, 0}, IrrepShape{4, 2, 1}, IrrepShape{3, 3, 2}}) {
    const CollectiveOperators ops(s);
    const ParityOperators pi = parity_ops(ops.basis());
    for (int t = 0; t < 5; ++t) {
      const CoherentPointd p = rand();
      const Eigen::VectorXcd v = coherent_vector(ops, p);
      for (int level = 1; level <= 3; ++level) {
        const auto [q, sign] = parity_map(s, p, level);
        const Eigen::VectorXcd lhs = pi.plain[level - 1].cast<cd>().cwiseProduct(v);
        CHECK((lhs - double(sign) * coherent_vector(ops, q)).norm() < 1e-10);
        const auto [qn, one] = parity_map(s, p, level, true);
        CHECK(one == 1);
        CHECK((apply_parity(ops.basis(), v, level) - coherent_vector(ops, qn)).norm() < 1e-10);
      }
      auto [a, s1] = parity_map(s, p, 1, true);
      auto [b, s2] = parity_map(s, a, 2, true);
      auto [c, s3] = parity_map(s, b, 3, true);
      CHECK(s1 * s2 * s3 == 1);
      CHECK(std::abs(c.alpha - p.alpha) + std::abs(c.beta - p.beta) + std::abs(c.gamma - p.gamma) == 0.0);
    }
  }
  const auto c = critical_coordinates(2.5);
  CoherentPointd p;
  p.alpha = c[0];
  p.beta = c[1];
  const auto [q, sign] = parity_map({10, 0, 0}, p, 1, true);
  CHECK(q.alpha == -p.alpha);
  CHECK(q.beta == -p.beta);
  CHECK(sign == 1);
  CHECK(parity_map({3, 0, 0}, p, 1).second == -1);
  CHECK_THROWS(parity_map({3, 0, 0}, p, 4));
}

TEST_CASE("cat states") {
  const CollectiveOperators sym({6, 0, 0});
  const CatState origin = cat_state(sym, {});
  const int hw = sym.basis().index_of(hw_pattern(sym.shape()));
  CHECK(std::abs(origin.vector.norm() - std::abs(origin.vector(hw))) < 1e-14);
  CHECK_FALSE(origin.vanishing);

  const CollectiveOperators ops({4, 0, 0});
  PointSource rand;
  for (int t = 0; t < 10; ++t) {
    const CatState cat = cat_state(ops, rand());
    for (int level = 1; level <= 3; ++level)
      CHECK((apply_parity(ops.basis(), cat.vector, level) - cat.vector).norm() < 1e-10);
  }
}

TEST_CASE("cat state is closer to the exact ground state than the coherent state") {
  const double lambda = 1.0;
  const SectorSolver solver({20, 0, 0});
  const Eigen::VectorXcd ground = solver.ground_state({1.0, lambda}).vector.cast<cd>();
  const CollectiveOperators& ops = solver.terms().ops();
  CoherentPointd p;
  p.alpha = critical_coordinates(lambda)[0];
  const Eigen::VectorXcd coherent = coherent_vector(ops, p);
  const Eigen::VectorXcd cat = cat_state(ops, p).vector.normalized();
  const double bare = std::abs(ground.dot(coherent)), restored = std::abs(ground.dot(cat));
  MESSAGE("overlap with ground state: coherent ", bare, ", cat ", restored);
  CHECK(restored > bare);
  CHECK(restored > 0.9);
}

TEST_CASE("relative fluctuations shrink with N") {
  CoherentPointd p;
  p.alpha = {0.4, 0.2};
  p.beta = {-0.3, 0.5};
  p.gamma = {0.6, -0.1};
  const int pairs[][4] = {{1, 1, 1, 1}, {1, 2, 2, 1}, {3, 3, 1, 1}, {1, 3, 3, 1}};
  std::vector<std::array<double, 4>> deviation;
  for (int n : {6, 12, 24, 48}) {
    const CollectiveOperators ops({2 * n / 3, n / 3, 0});
    const Eigen::VectorXcd v = coherent_vector(ops, p);
    const auto s = matrix_expectations(ops, v);
    std::array<double, 4> d{};
    for (int k = 0; k < 4; ++k) {
      const auto [i, j, a, b] = pairs[k];
      const cd denom = s(i - 1, j - 1) * s(a - 1, b - 1);
      REQUIRE(std::abs(denom) > 1e-3);
      d[k] = std::abs(quadratic_expectation(ops, v, i, j, a, b) / denom - 1.0);
    }
    deviation.push_back(d);
  }
  for (std::size_t t = 1; t < deviation.size(); ++t)
    for (int k = 0; k < 4; ++k) CHECK(deviation[t][k] < deviation[t - 1][k]);
}
