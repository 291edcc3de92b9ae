#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "lmg3/coherent_states.hpp"

namespace lmg3 {

// Energies and couplings in this module are in units of epsilon (epsilon = 1).

struct EnergySurfacePoint {
  double mu = 1.0, nu = 0.0;
  CoherentPointd point;
  double value = 0.0;
};

/// Large-N energy density (s33 - s11)/N - lambda sum_{i != j} s_ij^2 / N^2 on the coherent
/// state at p, with h/N = (mu(1-nu), (1-mu)(1-nu), nu). Throws std::domain_error outside
/// the admissible (mu, nu) region.
double surface_value(double mu, double nu, const CoherentPointd& p, double lambda);

enum class Phase { I, II, III, IV };

std::string to_string(Phase phase);

/// Region of the (lambda, mu) plane bounded by the critical curves. Points on a curve
/// belong to the phase on its low-lambda side.
Phase phase_of(double mu, double lambda);

/// The analytic expression of one phase's lowest energy, continued beyond its region.
double branch_energy(Phase phase, double mu, double lambda);

/// Lowest energy density of the parent sector (mu, 0), mu in [1/2, 1], lambda >= 0.
double closed_form_energy(double mu, double lambda);

struct CriticalCurve {
  std::string name;  // "I-II", "II-III", "I-IV" or "III-IV"
  Phase below, above;
  double lambda;
};

/// Critical couplings at fixed mu, ascending in lambda. mu = 2/3 reports all four.
std::vector<CriticalCurve> critical_curves(double mu);

/// mu values where a critical curve crosses the line of fixed lambda, ascending.
std::vector<double> critical_mus(double lambda);

inline constexpr double quadruple_lambda = 1.5;
inline constexpr double quadruple_mu = 2.0 / 3.0;

struct NuReduction {
  double mu_tilde = 1.0;
  double scale = 1.0;
};

/// E_{mu,nu}(lambda) = scale E_{mu_tilde,0}(scale lambda), scale = 1 - 3 nu.
/// For nu = 1/3 the scale is 0 and mu_tilde is reported as 1.
NuReduction reduce_nu(double mu, double nu);

/// Lowest energy density of a general sector (mu, nu) via reduce_nu.
double closed_form_energy(double mu, double nu, double lambda);

/// Non-negative members (alpha0+, beta0+) of the real minimizers of the symmetric surface.
std::array<double, 2> critical_coordinates(double lambda);

/// Level population densities (p11, p22, p33) of the symmetric ground state.
std::array<double, 3> thermo_populations(double lambda);

struct MinimizerOptions {
  int starts = 32;
  std::uint64_t seed = 20210116;
  double cluster_radius = 1e-4;
  double energy_window = 1e-6;
  bool complex_search = true;
};

struct PhaseResult {
  double lambda = 0.0, mu = 1.0;
  double energy = 0.0;
  /// Distinct minimizers within energy_window of the best value. Two candidates count as
  /// one when closer than cluster_radius or joined by a segment that never rises above
  /// the window.
  std::vector<CoherentPointd> minimizers;
  Phase phase = Phase::I;
  std::array<double, 3> populations{};
  double best_real = 0.0;
  /// Best value of the unrestricted search (NaN when it was skipped).
  double best_complex = 0.0;
  /// The unrestricted search found a value more than 1e-9 below the real search.
  bool complex_improves = false;
};

/// Multi-start simplex minimization of the (mu, 0) surface: a real-coordinate search, then
/// an unrestricted search over the real and imaginary parts of (alpha, beta, gamma).
/// Throws std::runtime_error if no start converges.
PhaseResult minimize_surface(double mu, double lambda, const MinimizerOptions& options = {});

struct DerivativeSample {
  double lambda = 0.0, mu = 1.0;
  double energy = 0.0;
  double d_lambda = 0.0, d_mu = 0.0;
  double d_lambda_lambda = 0.0, d_mu_mu = 0.0, d_mu_lambda = 0.0;
  Phase phase = Phase::I;
};

/// Finite differences (step h) of closed_form_energy. Stencils are central, or one-sided
/// when a phase boundary or the domain edge lies within 2h, so they never cross a curve.
DerivativeSample derivatives_at(double mu, double lambda, double h = 1e-4);

/// derivatives_at over the grid, rows ordered mu-major.
std::vector<DerivativeSample> derivative_scan(const std::vector<double>& mus,
                                              const std::vector<double>& lambdas, int threads = 1,
                                              double h = 1e-4);

/// Derivative jumps across one critical curve at (curve.lambda, mu): the two adjacent
/// branches are differentiated at the crossing point.
struct BoundaryJump {
  CriticalCurve curve;
  double mu = 0.0;
  std::array<double, 5> jump{};   // d_lambda, d_mu, d_lambda_lambda, d_mu_mu, d_mu_lambda
  std::array<double, 5> error{};  // Richardson estimate, floored at 1e-9

  bool continuous(int k) const { return jump[k] < 10 * error[k]; }
  bool discontinuous(int k) const { return jump[k] > 10 * error[k]; }
};

BoundaryJump boundary_jump(const CriticalCurve& curve, double mu, double h = 1e-4);

}  // namespace lmg3
