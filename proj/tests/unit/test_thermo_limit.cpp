#include "doctest.h"

#include <stdexcept>
#include <cmath>
#include <random>

#include "lmg3/spectral.hpp"
#include "lmg3/thermo_limit.hpp"
#include "oracle.hpp"

using namespace lmg3;
using cd = std::complex<double>;

namespace {

// Symmetric-sector surface written out directly.
double symmetric_surface(cd a, cd b, double lambda) {
  const double l1 = 1.0 + std::norm(a) + std::norm(b);
  const cd num = a * a * (std::conj(b) * std::conj(b) + 1.0) + (b * b + 1.0) * std::conj(a) * std::conj(a) +
                 std::conj(b) * std::conj(b) + b * b;
  return (std::norm(b) - 1.0) / l1 - lambda * num.real() / (l1 * l1);
}

CoherentPointd point(cd a, cd b, cd g = 0.0) {
  CoherentPointd p;
  p.alpha = a;
  p.beta = b;
  p.gamma = g;
  return p;
}

}  // namespace

TEST_CASE("surface values") {
  CHECK(surface_value(1.0, 0.0, point(0.0, 0.0), 0.7) == doctest::Approx(-1.0));
  CHECK(surface_value(1.0, 0.0, point(1.0, 0.0), 0.0) == doctest::Approx(-0.5));
  CHECK_THROWS_AS(surface_value(0.4, 0.0, point(0.0, 0.0), 1.0), std::domain_error);
  CHECK_THROWS_AS(surface_value(0.9, 0.3, point(0.0, 0.0), 1.0), std::domain_error);

  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> u(-1.5, 1.5);
  for (int t = 0; t < 50; ++t) {
    const cd a(u(rng), u(rng)), b(u(rng), u(rng)), g(u(rng), u(rng));
    const double lambda = std::abs(u(rng)) * 2;
    // Symmetric sector: gamma drops out and the surface has the explicit form above.
    CHECK(surface_value(1.0, 0.0, point(a, b, g), lambda) == doctest::Approx(symmetric_surface(a, b, lambda)));
    CHECK(surface_value(1.0, 0.0, point(a, b), lambda) == doctest::Approx(surface_value(1.0, 0.0, point(-a, -b), lambda)));
    // Rectangular sector in (gamma, beta - alpha gamma) at half the coupling.
    CHECK(surface_value(0.5, 0.0, point(a, b, g), lambda) ==
          doctest::Approx(0.5 * symmetric_surface(g, b - a * g, lambda / 2)));
    // nu reduction holds point by point.
    const double nu = 0.2, mu = 0.6 + 0.1 * std::abs(u(rng)) / 1.5;
    if (SectorProportions{mu, nu}.admissible()) {
      const NuReduction r = reduce_nu(mu, nu);
      CHECK(surface_value(mu, nu, point(a, b, g), lambda) ==
            doctest::Approx(r.scale * surface_value(r.mu_tilde, 0.0, point(a, b, g), r.scale * lambda)));
    }
  }
}

TEST_CASE("surface matches finite-N coherent expectations as N grows") {
  // <H> at finite N differs from the surface by O(1/N).
  const CoherentPointd p = point({0.3, 0.1}, {-0.2, 0.4}, {0.5, 0.0});
  double previous = 1e9;
  for (int n : {6, 12, 24}) {
    const IrrepShape s{2 * n / 3, n / 3, 0};
    const CollectiveOperators ops(s);
    const Eigen::VectorXcd v = coherent_vector(ops, p);
    const Eigen::MatrixXd h = build_h3(s, {1.0, 1.2}).dense();
    const double finite = v.dot(h.cast<cd>() * v).real();
    const double gap = std::abs(finite - surface_value(2.0 / 3.0, 0.0, p, 1.2));
    CHECK(gap < previous);
    previous = gap;
  }
}

TEST_CASE("closed-form energies") {
  CHECK(closed_form_energy(1.0, 1.0) == doctest::Approx(-9.0 / 8.0));
  CHECK(closed_form_energy(0.5, 0.5) == doctest::Approx(-0.5));
  CHECK(closed_form_energy(1.0, 0.25) == doctest::Approx(-1.0));
  CHECK(closed_form_energy(1.0, 2.0) == doctest::Approx(-19.0 / 12.0));
  for (Phase ph : {Phase::I, Phase::II, Phase::III, Phase::IV})
    CHECK(branch_energy(ph, quadruple_mu, quadruple_lambda) == doctest::Approx(-2.0 / 3.0));
  CHECK_THROWS_AS(closed_form_energy(0.3, 1.0), std::domain_error);
  CHECK_THROWS_AS(closed_form_energy(0.7, -1.0), std::domain_error);
  // Symmetric sector: the piecewise form at mu = 1.
  for (double l = 0.05; l < 4.0; l += 0.05) {
    const double expected = l <= 0.5 ? -1.0 : l <= 1.5 ? -(2 * l + 1) * (2 * l + 1) / (8 * l) : -(4 * l * l + 3) / (6 * l);
    CHECK(closed_form_energy(1.0, l) == doctest::Approx(expected));
  }
}

TEST_CASE("closed form is continuous") {
  for (double mu = 0.5; mu <= 1.0 + 1e-12; mu += 0.01) {
    for (const auto& c : critical_curves(mu)) {
      CHECK(branch_energy(c.below, mu, c.lambda) == doctest::Approx(branch_energy(c.above, mu, c.lambda)));
      const double left = closed_form_energy(mu, c.lambda - 1e-9), right = closed_form_energy(mu, c.lambda + 1e-9);
      CHECK(std::abs(left - right) < 1e-7);
    }
  }
  for (double l = 0.1; l < 3.0; l += 0.1)
    CHECK(closed_form_energy(2.0 / 3.0 - 1e-10, l) == doctest::Approx(closed_form_energy(2.0 / 3.0 + 1e-10, l)));
}

TEST_CASE("critical curves") {
  auto c1 = critical_curves(1.0);
  REQUIRE(c1.size() == 2);
  CHECK(c1[0].name == "I-II");
  CHECK(c1[0].lambda == doctest::Approx(0.5));
  CHECK(c1[1].name == "II-III");
  CHECK(c1[1].lambda == doctest::Approx(1.5));
  auto cq = critical_curves(2.0 / 3.0);
  REQUIRE(cq.size() == 4);
  for (const auto& c : cq) CHECK(c.lambda == doctest::Approx(1.5));
  auto c55 = critical_curves(0.55);
  REQUIRE(c55.size() == 2);
  CHECK(c55[0].name == "I-IV");
  CHECK(c55[0].lambda == doctest::Approx(1.0 / 0.9));
  CHECK(c55[1].name == "III-IV");
  CHECK(c55[1].lambda == doctest::Approx(3.0 / 1.3));
  for (double l : {0.7, 1.2, 2.0})
    for (double mu : critical_mus(l)) {
      bool hit = false;
      for (const auto& c : critical_curves(mu)) hit = hit || std::abs(c.lambda - l) < 1e-9;
      CHECK(hit);
    }
  CHECK(phase_of(1.0, 0.25) == Phase::I);
  CHECK(phase_of(1.0, 1.0) == Phase::II);
  CHECK(phase_of(1.0, 2.0) == Phase::III);
  CHECK(phase_of(0.55, 1.5) == Phase::IV);
  CHECK(phase_of(1.0, 0.5) == Phase::I);
}

TEST_CASE("nu reduction") {
  const auto r0 = reduce_nu(0.8, 0.0);
  CHECK(r0.mu_tilde == doctest::Approx(0.8));
  CHECK(r0.scale == doctest::Approx(1.0));
  const double nu = 0.2, mu = (1 - 2 * nu) / (1 - nu);
  CHECK(reduce_nu(mu, nu).mu_tilde == doctest::Approx(1.0));
  CHECK(closed_form_energy(mu, nu, 1.3) == doctest::Approx((1 - 3 * nu) * closed_form_energy(1.0, (1 - 3 * nu) * 1.3)));
  CHECK(closed_form_energy(0.5, 1.0 / 3.0, 2.0) == 0.0);
  CHECK_THROWS(reduce_nu(0.7, 0.5));
}

TEST_CASE("critical coordinates and populations") {
  CHECK(critical_coordinates(0.25)[0] == 0.0);
  CHECK(critical_coordinates(1.0)[0] == doctest::Approx(std::sqrt(1.0 / 3.0)));
  CHECK(critical_coordinates(3.0)[1] == doctest::Approx(1.0 / std::sqrt(3.0)));
  // Both branches agree at the seam.
  CHECK(std::sqrt((3.0 - 1.0) / (3.0 + 1.0)) == doctest::Approx(std::sqrt(3.0 / (3.0 + 3.0))));
  CHECK(critical_coordinates(1.5 - 1e-12)[0] == doctest::Approx(critical_coordinates(1.5 + 1e-12)[0]));

  const auto p1 = thermo_populations(1.0);
  CHECK(p1[0] == doctest::Approx(0.75));
  CHECK(p1[1] == doctest::Approx(0.25));
  const auto pinf = thermo_populations(1e9);
  for (double x : pinf) CHECK(x == doctest::Approx(1.0 / 3.0).epsilon(1e-6));
  for (double l = 0.0; l < 4.0; l += 0.07) {
    const auto p = thermo_populations(l);
    CHECK(p[0] + p[1] + p[2] == doctest::Approx(1.0));
    const auto c = critical_coordinates(l);
    const CoherentPointd at = point(c[0], c[1]);
    CHECK(symmetric_surface(c[0], c[1], l) == doctest::Approx(closed_form_energy(1.0, l)));
    const auto s = symbols_closed_form<double>(ShapeWeights<double>(1.0, 0.0, 0.0), at);
    for (int i = 0; i < 3; ++i) CHECK(std::real(s(i, i)) == doctest::Approx(p[i]));
  }
}

TEST_CASE("minimizer") {
  SUBCASE("symmetric phase structure") {
    const auto r1 = minimize_surface(1.0, 1.0);
    CHECK(r1.energy == doctest::Approx(-9.0 / 8.0).epsilon(1e-9));
    REQUIRE(r1.minimizers.size() == 2);
    for (const auto& m : r1.minimizers) {
      CHECK(std::abs(std::abs(m.alpha) - std::sqrt(1.0 / 3.0)) < 1e-5);
      CHECK(std::abs(m.beta) < 1e-5);
    }
    // On the II-III curve the beta valley is flat to fourth order; still two minimizers.
    CHECK(minimize_surface(1.0, 1.5).minimizers.size() == 2);
    CHECK(minimize_surface(1.0, 0.5).minimizers.size() == 1);
    const auto r0 = minimize_surface(1.0, 0.25);
    CHECK(r0.minimizers.size() == 1);
    CHECK(r0.energy == doctest::Approx(-1.0));
    const auto r2 = minimize_surface(1.0, 2.0);
    CHECK(r2.minimizers.size() == 4);
    CHECK(r2.energy == doctest::Approx(-19.0 / 12.0).epsilon(1e-9));
    CHECK(r2.phase == Phase::III);
    for (int i = 0; i < 3; ++i) CHECK(r2.populations[i] == doctest::Approx(thermo_populations(2.0)[i]).epsilon(1e-5));
  }
  SUBCASE("mixed sectors") {
    for (double mu : {0.5, 0.6, 0.75}) {
      for (double l : {0.4, 1.3, 2.7}) {
        const auto r = minimize_surface(mu, l);
        CHECK(std::abs(r.energy - closed_form_energy(mu, l)) < 1e-6);
        CHECK_FALSE(r.complex_improves);
        CHECK(r.populations[0] + r.populations[1] + r.populations[2] == doctest::Approx(1.0));
        for (const auto& m : r.minimizers) CHECK(std::abs(surface_value(mu, 0.0, m, l) - r.energy) < 1e-6);
      }
    }
  }
  CHECK_THROWS(minimize_surface(0.3, 1.0));
}

TEST_CASE("derivatives") {
  const auto s = derivatives_at(0.55, 1.5);
  CHECK(s.phase == Phase::IV);
  CHECK(s.d_mu_lambda == doctest::Approx(0.45).epsilon(1e-5));
  const auto i = derivatives_at(0.8, 0.2);
  CHECK(i.d_mu_lambda <= 1e-6);
  CHECK(i.d_lambda == doctest::Approx(0.0).epsilon(1e-6));
  CHECK(i.d_mu == doctest::Approx(-1.0));
  // Branch II at mu = 1: E = -(2l+1)^2/(8l), E_l = -1/2 + 1/(8 l^2), E_ll = -1/(4 l^3).
  const auto ii = derivatives_at(1.0, 1.0);
  CHECK(ii.d_lambda == doctest::Approx(-0.5 + 1.0 / 8.0).epsilon(1e-6));
  CHECK(ii.d_lambda_lambda == doctest::Approx(-0.25).epsilon(1e-4));
  // Points on a curve and on the domain edge still evaluate.
  const auto edge = derivatives_at(1.0, 0.5);
  CHECK(edge.d_lambda_lambda == doctest::Approx(0.0).epsilon(1e-6));
  const auto zero = derivatives_at(0.7, 0.0);
  CHECK(zero.d_lambda == doctest::Approx(0.0).epsilon(1e-6));

  const auto scan = derivative_scan({0.5, 0.75, 1.0}, {0.0, 1.0, 2.0}, 2);
  REQUIRE(scan.size() == 9);
  CHECK(scan[3].mu == 0.75);
  CHECK(scan[3].lambda == 0.0);

  const auto j = boundary_jump(critical_curves(1.0)[0], 1.0);
  CHECK(j.continuous(0));
  CHECK(j.continuous(1));
  CHECK(j.discontinuous(2));
  const auto k = boundary_jump(critical_curves(0.9)[1], 0.9);
  CHECK(k.continuous(0));
  CHECK(k.continuous(1));
  CHECK(k.discontinuous(2));
  CHECK(k.continuous(3));
  CHECK(k.continuous(4));
}

TEST_CASE("finite-N symmetric energies approach the closed form") {
  for (double l : {0.25, 1.0, 2.0}) {
    double previous = 1e9;
    for (int n : {10, 20, 40, 80}) {
      const double e = SectorSolver({n, 0, 0}).ground_state({1.0, l}).energy;
      const double gap = std::abs(e - closed_form_energy(1.0, l));
      CHECK(gap < previous);
      previous = gap;
    }
  }
}

TEST_CASE("finite-N symmetric populations approach the closed form") {
  for (double l : {0.75, 1.0, 1.25}) {
    const auto a = oracle::boson_populations(10, l), b = oracle::boson_populations(40, l);
    const auto target = thermo_populations(l);
    double da = 0, db = 0;
    for (int i = 0; i < 3; ++i) da = std::max(da, std::abs(a[i] - target[i])), db = std::max(db, std::abs(b[i] - target[i]));
    CHECK(db < da);
  }
}
