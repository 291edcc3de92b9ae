#include "lmg3/thermo_limit.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>
#include <stdexcept>

#include "lmg3/parallel.hpp"

namespace lmg3 {

namespace {

constexpr double kMuTol = 1e-12;

double surface_unchecked(const ShapeWeights<double>& w, const CoherentPointd& p, double lambda) {
  const SymbolTable<double> s = symbols_closed_form<double>(w, p);
  const double pair = 2.0 * std::real(s(0, 1) * s(0, 1) + s(0, 2) * s(0, 2) + s(1, 2) * s(1, 2));
  return std::real(s(2, 2) - s(0, 0)) - lambda * pair;
}

ShapeWeights<double> weights_of(double mu, double nu) {
  return {mu * (1.0 - nu), (1.0 - mu) * (1.0 - nu), nu};
}

bool upper_family(double mu) { return mu >= quadruple_mu - kMuTol; }

}  // namespace

double surface_value(double mu, double nu, const CoherentPointd& p, double lambda) {
  if (!SectorProportions{mu, nu}.admissible(kMuTol)) {
    std::ostringstream msg;
    msg << "surface_value: (mu, nu) = (" << mu << ", " << nu << ") outside the admissible region";
    throw std::domain_error(msg.str());
  }
  return surface_unchecked(weights_of(mu, nu), p, lambda);
}

std::string to_string(Phase phase) {
  switch (phase) {
    case Phase::I: return "I";
    case Phase::II: return "II";
    case Phase::III: return "III";
    case Phase::IV: return "IV";
  }
  return "?";
}

Phase phase_of(double mu, double lambda) {
  if (upper_family(mu)) {
    if (lambda <= 1.0 / (4.0 * mu - 2.0)) return Phase::I;
    return lambda <= 1.5 ? Phase::II : Phase::III;
  }
  if (lambda <= 1.0 / (2.0 * (1.0 - mu))) return Phase::I;
  return lambda <= 3.0 / (6.0 * mu - 2.0) ? Phase::IV : Phase::III;
}

double branch_energy(Phase phase, double mu, double lambda) {
  switch (phase) {
    case Phase::I:
      return -mu;
    case Phase::II:
      return 2.0 * lambda * mu * (1.0 - mu) - (2.0 * lambda + 1.0) * (2.0 * lambda + 1.0) / (8.0 * lambda);
    case Phase::III:
      return -2.0 / 3.0 * lambda * (1.0 - 3.0 * (1.0 - mu) * mu) - 1.0 / (2.0 * lambda);
    case Phase::IV:
      return -0.5 * (lambda * (1.0 - mu) * (1.0 - mu) + 1.0 / (4.0 * lambda) + 3.0 * mu - 1.0);
  }
  return std::numeric_limits<double>::quiet_NaN();
}

double closed_form_energy(double mu, double lambda) {
  if (mu < 0.5 - kMuTol || mu > 1.0 + kMuTol || !(lambda >= 0.0)) {
    std::ostringstream msg;
    msg << "closed_form_energy: need mu in [1/2, 1] and lambda >= 0, got (" << mu << ", " << lambda << ")";
    throw std::domain_error(msg.str());
  }
  mu = std::clamp(mu, 0.5, 1.0);
  return branch_energy(phase_of(mu, lambda), mu, lambda);
}

std::vector<CriticalCurve> critical_curves(double mu) {
  std::vector<CriticalCurve> out;
  const bool on_quadruple = std::abs(mu - quadruple_mu) < kMuTol;
  if (upper_family(mu)) {
    out.push_back({"I-II", Phase::I, Phase::II, 1.0 / (4.0 * mu - 2.0)});
    out.push_back({"II-III", Phase::II, Phase::III, 1.5});
  }
  if (!upper_family(mu) || on_quadruple) {
    out.push_back({"I-IV", Phase::I, Phase::IV, 1.0 / (2.0 * (1.0 - mu))});
    out.push_back({"III-IV", Phase::IV, Phase::III, 3.0 / (6.0 * mu - 2.0)});
  }
  std::stable_sort(out.begin(), out.end(),
                   [](const CriticalCurve& a, const CriticalCurve& b) { return a.lambda < b.lambda; });
  return out;
}

std::vector<double> critical_mus(double lambda) {
  std::vector<double> out;
  if (!(lambda > 0.0)) return out;
  const double i_ii = (1.0 / lambda + 2.0) / 4.0;
  const double i_iv = 1.0 - 1.0 / (2.0 * lambda);
  const double iii_iv = (3.0 / lambda + 2.0) / 6.0;
  if (i_ii >= quadruple_mu - kMuTol && i_ii <= 1.0) out.push_back(i_ii);
  if (i_iv >= 0.5 && i_iv <= quadruple_mu + kMuTol) out.push_back(i_iv);
  if (iii_iv >= 0.5 && iii_iv <= quadruple_mu + kMuTol) out.push_back(iii_iv);
  std::sort(out.begin(), out.end());
  return out;
}

NuReduction reduce_nu(double mu, double nu) {
  if (nu < -kMuTol || nu > 1.0 / 3.0 + kMuTol)
    throw std::domain_error("reduce_nu: nu must lie in [0, 1/3]");
  const double scale = 1.0 - 3.0 * nu;
  if (std::abs(scale) < 1e-12) return {1.0, 0.0};
  return {(mu * (1.0 - nu) - nu) / scale, scale};
}

double closed_form_energy(double mu, double nu, double lambda) {
  if (!SectorProportions{mu, nu}.admissible(kMuTol))
    throw std::domain_error("closed_form_energy: (mu, nu) outside the admissible region");
  const NuReduction r = reduce_nu(mu, nu);
  if (r.scale == 0.0) return 0.0;
  return r.scale * closed_form_energy(r.mu_tilde, r.scale * lambda);
}

std::array<double, 2> critical_coordinates(double lambda) {
  if (lambda <= 0.5) return {0.0, 0.0};
  if (lambda <= 1.5) return {std::sqrt((2.0 * lambda - 1.0) / (2.0 * lambda + 1.0)), 0.0};
  return {std::sqrt(2.0 * lambda / (2.0 * lambda + 3.0)),
          std::sqrt((2.0 * lambda - 3.0) / (2.0 * lambda + 3.0))};
}

std::array<double, 3> thermo_populations(double lambda) {
  if (lambda <= 0.5) return {1.0, 0.0, 0.0};
  if (lambda <= 1.5) return {0.5 + 1.0 / (4.0 * lambda), 0.5 - 1.0 / (4.0 * lambda), 0.0};
  return {1.0 / 3.0 + 1.0 / (2.0 * lambda), 1.0 / 3.0, 1.0 / 3.0 - 1.0 / (2.0 * lambda)};
}

// ---------------------------------------------------------------------------------------
// Minimization

namespace {

using Vec = Eigen::VectorXd;

struct SimplexResult {
  Vec x;
  double f = 0.0;
  bool converged = false;
};

template <typename F>
SimplexResult nelder_mead_once(F& f, const Vec& x0, double step, int max_evals) {
  const Eigen::Index n = x0.size();
  std::vector<Vec> xs(n + 1, x0);
  std::vector<double> fs(n + 1);
  for (Eigen::Index i = 0; i < n; ++i) xs[i + 1](i) += step;
  for (Eigen::Index i = 0; i <= n; ++i) fs[i] = f(xs[i]);
  int evals = static_cast<int>(n + 1);
  std::vector<int> order(n + 1);

  while (true) {
    for (Eigen::Index i = 0; i <= n; ++i) order[i] = static_cast<int>(i);
    std::sort(order.begin(), order.end(), [&](int a, int b) { return fs[a] < fs[b]; });
    const int best = order.front(), worst = order.back(), second = order[n - 1];
    double diameter = 0.0;
    for (Eigen::Index i = 0; i <= n; ++i) diameter = std::max(diameter, (xs[i] - xs[best]).cwiseAbs().maxCoeff());
    if (fs[worst] - fs[best] <= 1e-14 * (1.0 + std::abs(fs[best])) && diameter <= 1e-9)
      return {xs[best], fs[best], true};
    if (evals >= max_evals) return {xs[best], fs[best], false};

    Vec centroid = Vec::Zero(n);
    for (Eigen::Index i = 0; i <= n; ++i)
      if (i != worst) centroid += xs[i];
    centroid /= static_cast<double>(n);

    const Vec xr = centroid + (centroid - xs[worst]);
    const double fr = f(xr);
    ++evals;
    if (fr < fs[best]) {
      const Vec xe = centroid + 2.0 * (centroid - xs[worst]);
      const double fe = f(xe);
      ++evals;
      if (fe < fr) {
        xs[worst] = xe;
        fs[worst] = fe;
      } else {
        xs[worst] = xr;
        fs[worst] = fr;
      }
      continue;
    }
    if (fr < fs[second]) {
      xs[worst] = xr;
      fs[worst] = fr;
      continue;
    }
    const bool outside = fr < fs[worst];
    const Vec xc = outside ? Vec(centroid + 0.5 * (xr - centroid)) : Vec(centroid + 0.5 * (xs[worst] - centroid));
    const double fc = f(xc);
    ++evals;
    if (fc < (outside ? fr : fs[worst])) {
      xs[worst] = xc;
      fs[worst] = fc;
      continue;
    }
    for (Eigen::Index i = 0; i <= n; ++i) {
      if (i == best) continue;
      xs[i] = xs[best] + 0.5 * (xs[i] - xs[best]);
      fs[i] = f(xs[i]);
      ++evals;
    }
  }
}

/// Simplex search followed by one restart from the result, which guards against
/// premature collapse of the simplex.
template <typename F>
SimplexResult nelder_mead(F& f, const Vec& x0) {
  SimplexResult first = nelder_mead_once(f, x0, 0.5, 20000);
  SimplexResult second = nelder_mead_once(f, first.x, 1e-2, 20000);
  if (second.f > first.f) second.x = first.x, second.f = first.f;
  second.converged = second.converged && first.converged;
  return second;
}

enum class Chart { symmetric, rectangular, general };

Chart chart_for(double mu) {
  if (mu >= 1.0 - kMuTol) return Chart::symmetric;
  if (mu <= 0.5 + kMuTol) return Chart::rectangular;
  return Chart::general;
}

int real_dimension(Chart chart) { return chart == Chart::general ? 3 : 2; }

/// Maps search coordinates to a point. Real searches use one coordinate per active
/// complex parameter; complex searches two.
CoherentPointd point_from(Chart chart, const Vec& x, bool complex) {
  const int k = static_cast<int>(x.size()) / (complex ? 2 : 1);
  auto value = [&](int i) {
    return complex ? std::complex<double>(x(2 * i), x(2 * i + 1)) : std::complex<double>(x(i), 0.0);
  };
  CoherentPointd p;
  switch (chart) {
    case Chart::symmetric:
      p.alpha = value(0);
      p.beta = value(1);
      break;
    case Chart::rectangular:
      p.beta = value(0);
      p.gamma = value(1);
      break;
    case Chart::general:
      p.alpha = value(0);
      p.beta = value(1);
      if (k > 2) p.gamma = value(2);
      break;
  }
  return p;
}

Vec complexify(const Vec& x) {
  Vec out = Vec::Zero(2 * x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) out(2 * i) = x(i);
  return out;
}

std::vector<Vec> warm_starts(Chart chart, double lambda) {
  std::vector<Vec> out;
  const int n = real_dimension(chart);
  out.push_back(Vec::Zero(n));
  // The rectangular surface is the symmetric one at lambda/2 in (gamma, beta).
  const auto c = critical_coordinates(chart == Chart::rectangular ? lambda / 2.0 : lambda);
  for (double sa : {1.0, -1.0}) {
    for (double sb : {1.0, -1.0}) {
      Vec x = Vec::Zero(n);
      if (chart == Chart::rectangular) {
        x(0) = sb * c[1];
        x(1) = sa * c[0];
      } else {
        x(0) = sa * c[0];
        x(1) = sb * c[1];
      }
      out.push_back(x);
    }
  }
  return out;
}

struct SearchOutcome {
  std::vector<std::pair<Vec, double>> converged;
  double best = std::numeric_limits<double>::infinity();
  Vec best_x;
};

template <typename F>
SearchOutcome run_starts(F& f, const std::vector<Vec>& starts) {
  SearchOutcome out;
  for (const Vec& x0 : starts) {
    const SimplexResult r = nelder_mead(f, x0);
    if (r.f < out.best) {
      out.best = r.f;
      out.best_x = r.x;
    }
    if (r.converged) out.converged.emplace_back(r.x, r.f);
  }
  return out;
}

}  // namespace

PhaseResult minimize_surface(double mu, double lambda, const MinimizerOptions& options) {
  if (mu < 0.5 - kMuTol || mu > 1.0 + kMuTol || !(lambda >= 0.0))
    throw std::domain_error("minimize_surface: need mu in [1/2, 1] and lambda >= 0");
  mu = std::clamp(mu, 0.5, 1.0);
  const Chart chart = chart_for(mu);
  const ShapeWeights<double> w = weights_of(mu, 0.0);
  std::mt19937_64 rng(options.seed);
  std::normal_distribution<double> normal(0.0, 1.0);

  auto random_starts = [&](int n) {
    std::vector<Vec> out;
    for (int s = 0; s < options.starts; ++s) {
      Vec x(n);
      for (int i = 0; i < n; ++i) x(i) = normal(rng);
      out.push_back(x);
    }
    return out;
  };

  bool complex = false;
  auto f = [&](const Vec& x) { return surface_unchecked(w, point_from(chart, x, complex), lambda); };

  const int n = real_dimension(chart);
  std::vector<Vec> starts = warm_starts(chart, lambda);
  for (Vec& x : random_starts(n)) starts.push_back(std::move(x));
  const SearchOutcome real = run_starts(f, starts);
  if (real.converged.empty()) {
    std::ostringstream msg;
    msg << "minimize_surface: no start converged at (mu, lambda) = (" << mu << ", " << lambda
        << "); best value found " << real.best;
    throw std::runtime_error(msg.str());
  }

  PhaseResult out;
  out.mu = mu;
  out.lambda = lambda;
  out.phase = phase_of(mu, lambda);
  out.best_real = real.best;
  out.best_complex = std::numeric_limits<double>::quiet_NaN();

  const SearchOutcome* chosen = &real;
  SearchOutcome full;
  if (options.complex_search) {
    complex = true;
    std::vector<Vec> cstarts = random_starts(2 * n);
    cstarts.push_back(complexify(real.best_x));
    for (const auto& [x, v] : real.converged)
      if (v <= real.best + options.energy_window) cstarts.push_back(complexify(x));
    full = run_starts(f, cstarts);
    out.best_complex = full.best;
    out.complex_improves = full.best < real.best - 1e-9 && !full.converged.empty();
    if (out.complex_improves) {
      chosen = &full;
    } else {
      complex = false;
    }
  }

  out.energy = chosen->best;
  std::vector<Vec> distinct;
  for (const auto& [x, v] : chosen->converged) {
    if (v > chosen->best + options.energy_window) continue;
    // Points joined by a level valley (no barrier above the window) are one minimizer.
    auto same = [&](const Vec& y) {
      if ((x - y).norm() < options.cluster_radius) return true;
      for (double t : {0.25, 0.5, 0.75})
        if (f(x + t * (y - x)) > chosen->best + options.energy_window) return false;
      return true;
    };
    const bool seen = std::any_of(distinct.begin(), distinct.end(), same);
    if (!seen) distinct.push_back(x);
  }
  std::sort(distinct.begin(), distinct.end(), [](const Vec& a, const Vec& b) {
    return std::lexicographical_compare(a.data(), a.data() + a.size(), b.data(), b.data() + b.size());
  });
  for (const Vec& x : distinct) out.minimizers.push_back(point_from(chart, x, complex));

  const SymbolTable<double> s = symbols_closed_form<double>(w, point_from(chart, chosen->best_x, complex));
  for (int i = 0; i < 3; ++i) out.populations[i] = std::real(s(i, i));
  return out;
}

// ---------------------------------------------------------------------------------------
// Derivatives

namespace {

struct Stencil {
  std::vector<std::pair<int, double>> d1, d2;  // (offset in steps, weight)
};

Stencil stencil(int side) {
  if (side == 0) return {{{-1, -0.5}, {1, 0.5}}, {{-1, 1.0}, {0, -2.0}, {1, 1.0}}};
  Stencil s{{{0, -1.5}, {1, 2.0}, {2, -0.5}}, {{0, 2.0}, {1, -5.0}, {2, 4.0}, {3, -1.0}}};
  if (side < 0) {
    for (auto& [o, wgt] : s.d1) o = -o, wgt = -wgt;
    for (auto& [o, wgt] : s.d2) o = -o;
  }
  return s;
}

bool inside(double mu, double lambda) { return mu >= 0.5 - kMuTol && mu <= 1.0 + kMuTol && lambda >= 0.0; }

/// -1, 0 or +1: which stencil keeps every sample in the phase of the centre point.
int choose_side(double mu, double lambda, double dmu, double dlambda, double h) {
  const Phase here = phase_of(mu, lambda);
  auto same = [&](std::initializer_list<int> offsets) {
    for (int k : offsets) {
      const double m = mu + k * h * dmu, l = lambda + k * h * dlambda;
      if (!inside(m, l) || phase_of(m, l) != here) return false;
    }
    return true;
  };
  if (same({-2, -1, 1, 2})) return 0;
  if (same({1, 2, 3})) return 1;
  if (same({-1, -2, -3})) return -1;
  return 0;
}

template <typename F>
std::array<double, 5> derivatives_of(F&& e, double mu, double lambda, double h, int side_l, int side_m) {
  const Stencil sl = stencil(side_l), sm = stencil(side_m);
  std::array<double, 5> d{};
  for (auto [o, wgt] : sl.d1) d[0] += wgt * e(mu, lambda + o * h);
  for (auto [o, wgt] : sm.d1) d[1] += wgt * e(mu + o * h, lambda);
  for (auto [o, wgt] : sl.d2) d[2] += wgt * e(mu, lambda + o * h);
  for (auto [o, wgt] : sm.d2) d[3] += wgt * e(mu + o * h, lambda);
  for (auto [ol, wl] : sl.d1)
    for (auto [om, wm] : sm.d1) d[4] += wl * wm * e(mu + om * h, lambda + ol * h);
  d[0] /= h;
  d[1] /= h;
  d[2] /= h * h;
  d[3] /= h * h;
  d[4] /= h * h;
  return d;
}

}  // namespace

DerivativeSample derivatives_at(double mu, double lambda, double h) {
  DerivativeSample out;
  out.mu = mu;
  out.lambda = lambda;
  out.energy = closed_form_energy(mu, lambda);
  out.phase = phase_of(mu, lambda);
  const int side_l = choose_side(mu, lambda, 0.0, 1.0, h);
  const int side_m = choose_side(mu, lambda, 1.0, 0.0, h);
  const Phase phase = out.phase;
  // Every sample lies in the centre's phase, so the branch expression is exact there and
  // also serves the mixed-stencil corners that a one-dimensional check does not cover.
  const auto d = derivatives_of([&](double m, double l) { return branch_energy(phase, m, l); }, mu, lambda, h,
                                side_l, side_m);
  out.d_lambda = d[0];
  out.d_mu = d[1];
  out.d_lambda_lambda = d[2];
  out.d_mu_mu = d[3];
  out.d_mu_lambda = d[4];
  return out;
}

std::vector<DerivativeSample> derivative_scan(const std::vector<double>& mus, const std::vector<double>& lambdas,
                                              int threads, double h) {
  std::vector<DerivativeSample> out(mus.size() * lambdas.size());
  parallel_for(static_cast<int>(out.size()), threads, [&](int k) {
    const std::size_t i = k / lambdas.size(), j = k % lambdas.size();
    out[k] = derivatives_at(mus[i], lambdas[j], h);
  });
  return out;
}

BoundaryJump boundary_jump(const CriticalCurve& curve, double mu, double h) {
  BoundaryJump out;
  out.curve = curve;
  out.mu = mu;
  std::array<double, 5> below{}, above{};
  for (Phase phase : {curve.below, curve.above}) {
    auto e = [&](double m, double l) { return branch_energy(phase, m, l); };
    const auto fine = derivatives_of(e, mu, curve.lambda, h, 0, 0);
    const auto coarse = derivatives_of(e, mu, curve.lambda, 2 * h, 0, 0);
    for (int k = 0; k < 5; ++k) out.error[k] = std::max(out.error[k], std::abs(fine[k] - coarse[k]) / 3.0);
    (phase == curve.below ? below : above) = fine;
  }
  for (int k = 0; k < 5; ++k) {
    out.jump[k] = std::abs(below[k] - above[k]);
    out.error[k] = std::max(out.error[k], 1e-9);
  }
  return out;
}

}  // namespace lmg3
