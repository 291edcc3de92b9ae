// lmg3: basis reports, sector spectra, susceptibility sweeps and mean-field phase data
// for the three-level LMG model. Energies and couplings are in units of epsilon (epsilon = 1).

#include <cmath>
#include <complex>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "lmg3/coherent_states.hpp"
#include "lmg3/collective_ops.hpp"
#include "lmg3/io.hpp"
#include "lmg3/irrep_basis.hpp"
#include "lmg3/lmg_model.hpp"
#include "lmg3/parallel.hpp"
#include "lmg3/spectral.hpp"
#include "lmg3/thermo_limit.hpp"

using namespace lmg3;
using nlohmann::json;

namespace {

constexpr int kUsage = 2;
constexpr int kNumerical = 1;
const std::string kUnits = "energies and couplings in units of epsilon (epsilon = 1)";

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Common {
  std::string output = "-";
  std::string format = "csv";
  int threads = 1;
  long long cap = 10000;
};

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("-o,--output", c.output, "Output path, '-' for stdout")->capture_default_str();
  cmd->add_option("--format", c.format, "csv or json")->check(CLI::IsMember({"csv", "json"}))->capture_default_str();
  cmd->add_option("--threads", c.threads, "Worker threads")->check(CLI::PositiveNumber)->capture_default_str();
  cmd->add_option("--cap", c.cap, "Largest sector dimension to diagonalize")->check(CLI::PositiveNumber)->capture_default_str();
}

json common_json(const Common& c) {
  return {{"output", c.output}, {"format", c.format}, {"threads", c.threads}, {"dimension_cap", c.cap}, {"epsilon", 1.0}};
}

std::vector<double> range_or_usage(const std::string& text) {
  try {
    return parse_range(text);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
}

IrrepShape shape_or_usage(const std::string& text) {
  try {
    return parse_shape(text);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
}

void require_cap(const IrrepShape& s, long long cap) {
  const auto d = dimension(s);
  if (d > cap)
    throw UsageError("sector " + s.str() + " has dimension " + std::to_string(d) + ", above the cap of " +
                     std::to_string(cap) + "; raise it with --cap if this is intended");
}

std::string shape_tag(const IrrepShape& s) {
  return std::to_string(s.h1) + "-" + std::to_string(s.h2) + "-" + std::to_string(s.h3);
}

/// "dir/name.ext" -> "dir/name_<suffix>.ext".
std::string suffixed(const std::string& path, const std::string& suffix) {
  if (path == "-") return path;
  std::filesystem::path p(path);
  const std::string name = p.stem().string() + "_" + suffix + p.extension().string();
  return (p.parent_path() / name).string();
}

void emit(const std::string& path, const Table& table, const Common& c, const json& config) {
  write_table(path, table, parse_format(c.format));
  write_sidecar(path, config);
}

std::string parity_text(const ParityLabel& l) {
  std::string out;
  for (int s : l.signs) out += s > 0 ? '+' : '-';
  return out;
}

// ---- basis ----

int run_basis(const std::string& shape_text, const Common& c) {
  const IrrepShape s = shape_or_usage(shape_text);
  const auto d = dimension(s);
  const auto m = multiplicity(s);
  const SectorProportions prop = SectorProportions::of(s);
  json report = {{"shape", s.str()},        {"dim", d},
                 {"mult", m},               {"hw", hw_pattern(s).str()},
                 {"lw", lw_pattern(s).str()}, {"mu", prop.mu},
                 {"nu", prop.nu}};
  json sectors = json::object();
  if (d <= c.cap) {
    const SectorBasis basis(s);
    for (const auto& [label, idx] : parity_blocks(basis)) sectors[parity_text(label)] = idx.size();
  }
  report["parity_sectors"] = sectors;

  std::ostringstream text;
  if (c.format == "json") {
    text << report.dump(2) << '\n';
  } else {
    text << "shape=" << s.str() << '\n';
    text << "dim=" << d << " mult=" << m << '\n';
    text << "hw=" << hw_pattern(s).str() << " lw=" << lw_pattern(s).str() << '\n';
    text << "mu=" << format_number(prop.mu) << " nu=" << format_number(prop.nu) << '\n';
    if (sectors.empty()) {
      text << "parity sectors skipped: dimension above the cap\n";
    } else {
      text << "parity sectors";
      for (const auto& [label, size] : sectors.items()) text << ' ' << label << '=' << size.get<long long>();
      text << '\n';
    }
  }
  if (c.output == "-") {
    std::cout << text.str();
  } else {
    std::ofstream out(c.output);
    if (!out) throw std::runtime_error("cannot open '" + c.output + "' for writing");
    out << text.str();
  }
  json config = common_json(c);
  config["command"] = "basis";
  config["shape"] = s.str();
  write_sidecar(c.output, config);
  return 0;
}

// ---- spectrum ----

int run_spectrum(const std::vector<std::string>& shape_texts, int particles, const std::string& lambda_text,
                 int levels, const Common& c) {
  if (shape_texts.empty() == (particles <= 0)) throw UsageError("give either --shape or --particles");
  const auto lambdas = range_or_usage(lambda_text);
  std::vector<IrrepShape> shapes;
  for (const auto& t : shape_texts) shapes.push_back(shape_or_usage(t));
  if (particles > 0) shapes = shapes_with_particles(particles);
  for (const auto& s : shapes) require_cap(s, c.cap);
  if (levels < 0) throw UsageError("--levels must be non-negative");

  Table table{{kUnits, "level energies per sector; mult is the number of copies of the sector in the full space"},
              {"lambda", "shape", "mult", "level", "energy"},
              {}};
  for (const auto& s : shapes) {
    const auto terms = std::make_shared<HamiltonianTerms>(s);
    const int dim = static_cast<int>(dimension(s));
    const int count = levels == 0 ? dim : std::min(levels, dim);
    std::vector<Eigen::VectorXd> values(lambdas.size());
    parallel_for(static_cast<int>(lambdas.size()), c.threads, [&](int k) {
      values[k] = diagonalize(terms->build({1.0, lambdas[k]}), count).eigenvalues;
    });
    const long long mult = multiplicity(s);
    for (std::size_t k = 0; k < lambdas.size(); ++k)
      for (int e = 0; e < values[k].size(); ++e)
        table.rows.push_back({lambdas[k], s.str(), mult, static_cast<long long>(e), values[k](e)});
  }
  json config = common_json(c);
  config["command"] = "spectrum";
  config["lambda"] = lambda_text;
  config["levels"] = levels;
  json names = json::array();
  for (const auto& s : shapes) names.push_back(s.str());
  config["shapes"] = names;
  emit(c.output, table, c, config);
  return 0;
}

// ---- sweep ----

int run_sweep(const std::vector<std::string>& shape_texts, const std::string& lambda_text, double dlambda,
              const Common& c) {
  if (shape_texts.empty()) throw UsageError("--shape is required");
  if (!(dlambda > 0.0)) throw UsageError("--dlambda must be positive");
  const auto lambdas = range_or_usage(lambda_text);
  std::vector<IrrepShape> shapes;
  for (const auto& t : shape_texts) shapes.push_back(shape_or_usage(t));
  for (const auto& s : shapes) {
    require_cap(s, c.cap);
    if (s.particles() < 2) throw UsageError("sweeps need at least two particles");
  }

  for (const auto& s : shapes) {
    const SweepResult r = susceptibility_sweep(s, lambdas, {1.0, dlambda, c.threads});
    Table table{{kUnits, "sector " + s.str() + "; chi at lambda compares the ground states at lambda and lambda + " +
                             format_number(dlambda)},
                {"lambda", "E0", "chi", "p1", "p2", "p3", "degeneracy_flag"},
                {}};
    for (const auto& p : r.points)
      table.rows.push_back({p.lambda, p.energy, p.chi, p.populations[0], p.populations[1], p.populations[2],
                            static_cast<long long>(p.degenerate)});
    const std::string path = shapes.size() > 1 ? suffixed(c.output, shape_tag(s)) : c.output;
    json config = common_json(c);
    config["command"] = "sweep";
    config["shape"] = s.str();
    config["lambda"] = lambda_text;
    config["dlambda"] = dlambda;
    config["output"] = path;
    emit(path, table, c, config);
  }
  return 0;
}

// ---- phase ----

struct PhaseOptions {
  std::string mu = "0.5:1:0.05";
  double nu = 0.0;
  std::string lambda = "0:3:0.1";
  bool minimizer = true;
  bool check_minimizer = false;
};

/// Derivatives at (mu, nu, lambda) from the nu = 0 surface through E = s E~(mu~, s lambda).
DerivativeSample reduced_derivatives(double mu, double nu, double lambda) {
  const NuReduction r = reduce_nu(mu, nu);
  if (r.scale == 0.0) {
    DerivativeSample z = derivatives_at(1.0, 0.0);
    z.mu = mu;
    z.lambda = lambda;
    z.energy = z.d_lambda = z.d_mu = z.d_lambda_lambda = z.d_mu_mu = z.d_mu_lambda = 0.0;
    return z;
  }
  DerivativeSample d = derivatives_at(r.mu_tilde, r.scale * lambda);
  const double s = r.scale, dm = (1.0 - nu) / s;
  d.energy *= s;
  d.d_lambda *= s * s;
  d.d_mu *= s * dm;
  d.d_lambda_lambda *= s * s * s;
  d.d_mu_mu *= s * dm * dm;
  d.d_mu_lambda *= s * s * dm;
  d.mu = mu;
  d.lambda = lambda;
  return d;
}

bool at_quadruple(double mu_tilde, double lambda_scaled) {
  return std::abs(mu_tilde - quadruple_mu) < 1e-9 && std::abs(lambda_scaled - quadruple_lambda) < 1e-9;
}

int run_phase(const PhaseOptions& o, const Common& c) {
  const auto mus = range_or_usage(o.mu);
  const auto lambdas = range_or_usage(o.lambda);
  for (double mu : mus)
    if (mu < 0.5 - 1e-12 || mu > 1.0 + 1e-12) throw UsageError("mu must lie in [1/2, 1]");
  if (o.nu < 0.0 || o.nu > 1.0 / 3.0 + 1e-12) throw UsageError("nu must lie in [0, 1/3]");
  for (double mu : mus)
    if (!SectorProportions{mu, o.nu}.admissible(1e-12))
      throw UsageError("(mu, nu) = (" + format_number(mu) + ", " + format_number(o.nu) + ") is not admissible");
  for (double l : lambdas)
    if (l < 0.0) throw UsageError("lambda must be non-negative");

  json config = common_json(c);
  config["command"] = "phase";
  config["mu"] = o.mu;
  config["nu"] = o.nu;
  config["lambda"] = o.lambda;
  config["minimizer"] = o.minimizer || o.check_minimizer;

  const int nm = static_cast<int>(mus.size()), nl = static_cast<int>(lambdas.size());
  std::vector<DerivativeSample> grid(static_cast<std::size_t>(nm) * nl);
  parallel_for(nm * nl, c.threads, [&](int k) { grid[k] = reduced_derivatives(mus[k / nl], o.nu, lambdas[k % nl]); });

  Table energies{{kUnits, "ground-state energy density of the sector (mu, nu) as N -> infinity, nu = " +
                              format_number(o.nu)},
                 {"lambda", "mu", "E", "dE_dlambda", "dE_dmu", "d2E_dlambda2", "d2E_dmu_dlambda", "phase_label"},
                 {}};
  for (int k = 0; k < nm * nl; ++k) {
    const auto& d = grid[k];
    const NuReduction r = reduce_nu(d.mu, o.nu);
    const std::string label = at_quadruple(r.mu_tilde, r.scale * d.lambda) ? "quadruple" : to_string(d.phase);
    energies.rows.push_back(
        {d.lambda, d.mu, d.energy, d.d_lambda, d.d_mu, d.d_lambda_lambda, d.d_mu_lambda, label});
  }
  emit(c.output, energies, c, config);

  Table curves{{kUnits, "critical couplings at each mu, nu = " + format_number(o.nu)},
               {"mu", "curve", "below", "above", "lambda"},
               {}};
  for (double mu : mus) {
    const NuReduction r = reduce_nu(mu, o.nu);
    if (r.scale == 0.0) continue;
    for (const auto& cc : critical_curves(r.mu_tilde))
      curves.rows.push_back({mu, cc.name, to_string(cc.below), to_string(cc.above), cc.lambda / r.scale});
  }
  emit(suffixed(c.output, "curves"), curves, c, config);

  Table pops{{kUnits, "symmetric-sector level populations as N -> infinity"}, {"lambda", "p1", "p2", "p3"}, {}};
  for (double l : lambdas) {
    const auto p = thermo_populations(l);
    pops.rows.push_back({l, p[0], p[1], p[2]});
  }
  emit(suffixed(c.output, "populations"), pops, c, config);

  if (!(o.minimizer || o.check_minimizer)) return 0;
  std::vector<PhaseResult> found(static_cast<std::size_t>(nm) * nl);
  parallel_for(nm * nl, c.threads, [&](int k) {
    const NuReduction r = reduce_nu(mus[k / nl], o.nu);
    found[k] = minimize_surface(r.scale == 0.0 ? 1.0 : r.mu_tilde, r.scale * lambdas[k % nl]);
  });
  Table mins{{kUnits, "direct minimization of the coherent-state energy surface"},
             {"lambda", "mu", "E_numeric", "E_closed", "abs_diff", "minimizers", "phase_label", "p1", "p2", "p3",
              "complex_improves"},
             {}};
  double worst = 0.0;
  for (int k = 0; k < nm * nl; ++k) {
    const double mu = mus[k / nl], l = lambdas[k % nl];
    const NuReduction r = reduce_nu(mu, o.nu);
    const auto& f = found[k];
    const double numeric = r.scale * f.energy;
    const double closed = closed_form_energy(mu, o.nu, l);
    worst = std::max(worst, std::abs(numeric - closed));
    mins.rows.push_back({l, mu, numeric, closed, std::abs(numeric - closed),
                         static_cast<long long>(f.minimizers.size()), to_string(f.phase), f.populations[0],
                         f.populations[1], f.populations[2], static_cast<long long>(f.complex_improves)});
  }
  emit(suffixed(c.output, "minimizers"), mins, c, config);
  if (o.check_minimizer) {
    std::ostream& out = c.output == "-" ? std::cerr : std::cout;
    out << "max |numeric - closed-form| = " << format_number(worst) << '\n';
    if (worst > 1e-6) {
      std::cerr << "minimizer check failed: deviation above 1e-6\n";
      return kNumerical;
    }
  }
  return 0;
}

// ---- check ----

int run_check(const Common& c) {
  bool all = true;
  auto line = [&](const std::string& name, bool ok, const std::string& detail) {
    std::cout << (ok ? "PASS " : "FAIL ") << name << "  " << detail << '\n';
    all = all && ok;
  };

  double worst = 0.0;
  for (const IrrepShape s : {IrrepShape{6, 0, 0}, IrrepShape{4, 2, 0}, IrrepShape{3, 3, 0}, IrrepShape{2, 2, 2}}) {
    const CollectiveOperators ops(s);
    worst = std::max(worst, check_algebra(ops).max_violation);
    for (int i = 1; i <= 3; ++i)
      for (int j = 1; j <= 3; ++j) worst = std::max(worst, max_abs(SparseMatrix(ops(i, j) - SparseMatrix(ops(j, i).transpose()))));
  }
  line("algebra", worst <= 1e-10, "max violation " + format_number(worst));

  double gap = 0.0;
  for (int n : {3, 4})
    for (double l : {0.0, 0.5, 1.5}) {
      const auto full = full_tensor_spectrum(n, {1.0, l});
      const auto sect = sector_spectrum_union(n, {1.0, l});
      if (full.size() != sect.size()) {
        gap = INFINITY;
        continue;
      }
      for (std::size_t k = 0; k < full.size(); ++k) gap = std::max(gap, std::abs(full[k] - sect[k]));
    }
  line("tensor-vs-sectors", gap <= 1e-9, "max eigenvalue difference " + format_number(gap));

  std::mt19937_64 rng(20210116);
  std::normal_distribution<double> g(0.0, 0.7);
  double sym = 0.0;
  for (const IrrepShape s : {IrrepShape{5, 3, 0}, IrrepShape{4, 3, 1}}) {
    const CollectiveOperators ops(s);
    for (int t = 0; t < 10; ++t) {
      CoherentPointd p;
      p.alpha = {g(rng), g(rng)};
      p.beta = {g(rng), g(rng)};
      p.gamma = {g(rng), g(rng)};
      const auto a = symbols_closed_form(s, p);
      const auto b = symbols_via_kernel(s, p);
      const auto m = matrix_expectations(ops, coherent_vector(ops, p));
      sym = std::max({sym, (a - b).cwiseAbs().maxCoeff(), (a - m).cwiseAbs().maxCoeff()});
    }
  }
  line("coherent-symbols", sym <= 1e-8, "max disagreement " + format_number(sym));

  double phase = 0.0;
  for (double mu : {0.5, 0.75, 1.0})
    for (double l : {0.3, 1.0, 2.2}) phase = std::max(phase, std::abs(minimize_surface(mu, l).energy - closed_form_energy(mu, l)));
  line("mean-field", phase <= 1e-6, "max |numeric - closed-form| " + format_number(phase));

  json config = common_json(c);
  config["command"] = "check";
  write_sidecar(c.output, config);
  return all ? 0 : kNumerical;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Three-level LMG model: U(3) sectors, spectra, susceptibility sweeps and phase diagram"};
  app.set_version_flag("--version", std::string(LMG3_VERSION));
  app.require_subcommand(1);

  Common basis_c, spectrum_c, sweep_c, phase_c, check_c;
  std::string basis_shape;
  auto* basis = app.add_subcommand("basis", "Dimension, multiplicity, extremal patterns and parity sectors of a shape");
  basis->add_option("--shape", basis_shape, "h1,h2,h3")->required();
  add_common(basis, basis_c);

  std::vector<std::string> spectrum_shapes;
  int spectrum_particles = 0, spectrum_levels = 0;
  std::string spectrum_lambda = "0:3:0.1";
  auto* spectrum = app.add_subcommand("spectrum", "Sector eigenvalues over a lambda grid");
  spectrum->add_option("--shape", spectrum_shapes, "h1,h2,h3 (repeatable)");
  spectrum->add_option("--particles", spectrum_particles, "All sectors with N particles");
  spectrum->add_option("--lambda", spectrum_lambda, "start:stop:step or a single value")->capture_default_str();
  spectrum->add_option("--levels", spectrum_levels, "Lowest levels per sector, 0 for all")->capture_default_str();
  add_common(spectrum, spectrum_c);

  std::vector<std::string> sweep_shapes;
  std::string sweep_lambda = "0:1.2:0.005";
  double sweep_dlambda = 0.01;
  auto* sweep = app.add_subcommand("sweep", "Ground-state energy, susceptibility and populations over a lambda grid");
  sweep->add_option("--shape", sweep_shapes, "h1,h2,h3 (repeatable; one file per shape)");
  sweep->add_option("--lambda", sweep_lambda, "start:stop:step or a single value")->capture_default_str();
  sweep->add_option("--dlambda", sweep_dlambda, "Fidelity step")->capture_default_str();
  add_common(sweep, sweep_c);

  PhaseOptions phase_o;
  auto* phase = app.add_subcommand("phase", "Mean-field energies, derivatives, critical curves and minimizer tables");
  phase->add_option("--mu", phase_o.mu, "mu grid in [1/2, 1]")->capture_default_str();
  phase->add_option("--nu", phase_o.nu, "nu in [0, 1/3]")->capture_default_str();
  phase->add_option("--lambda", phase_o.lambda, "lambda grid")->capture_default_str();
  phase->add_flag("!--no-minimizer", phase_o.minimizer, "Skip the minimizer table");
  phase->add_flag("--check-minimizer", phase_o.check_minimizer, "Print the largest minimizer deviation; fail above 1e-6");
  add_common(phase, phase_c);

  auto* check = app.add_subcommand("check", "Algebra, oracle and mean-field self-checks");
  add_common(check, check_c);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kUsage;
  }

  try {
    if (*basis) return run_basis(basis_shape, basis_c);
    if (*spectrum) return run_spectrum(spectrum_shapes, spectrum_particles, spectrum_lambda, spectrum_levels, spectrum_c);
    if (*sweep) return run_sweep(sweep_shapes, sweep_lambda, sweep_dlambda, sweep_c);
    if (*phase) return run_phase(phase_o, phase_c);
    if (*check) return run_check(check_c);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kNumerical;
  }
  return kUsage;
}
