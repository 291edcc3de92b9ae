#include "lmg3/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

#include "lmg3/parallel.hpp"

namespace lmg3 {

void fix_sign(Eigen::Ref<Eigen::VectorXd> v) {
  if (v.size() == 0) return;
  Eigen::Index arg = 0;
  v.cwiseAbs().maxCoeff(&arg);
  if (v(arg) < 0) v = -v;
}

SpectrumResult diagonalize(const SectorHamiltonian& h, int count) {
  const Eigen::MatrixXd m = h.dense();
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  if ((m - m.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale)
    throw std::invalid_argument("diagonalize: matrix is not symmetric");
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(m);
  if (solver.info() != Eigen::Success) throw std::runtime_error("diagonalize: eigensolver failed");
  const int k = std::clamp(count, 1, static_cast<int>(m.rows()));
  SpectrumResult out{h.shape, h.params.lambda, solver.eigenvalues().head(k),
                     solver.eigenvectors().leftCols(k)};
  for (int c = 0; c < k; ++c) fix_sign(out.vectors.col(c));
  return out;
}

namespace {

EigenPair dense_lowest(const SparseMatrix& h) {
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver{Eigen::MatrixXd(h)};
  EigenPair out;
  out.value = solver.eigenvalues()(0);
  out.vector = solver.eigenvectors().col(0);
  out.next_value = h.rows() > 1 ? solver.eigenvalues()(1) : std::numeric_limits<double>::infinity();
  out.residual = (h * out.vector - out.value * out.vector).norm();
  return out;
}

}  // namespace

EigenPair lowest_eigenpair(const SparseMatrix& h, double tol, int dense_cutoff) {
  const Eigen::Index n = h.rows();
  if (n == 0) throw std::invalid_argument("lowest_eigenpair: empty matrix");
  if (n <= dense_cutoff) {
    EigenPair out = dense_lowest(h);
    fix_sign(out.vector);
    return out;
  }

  const int krylov = static_cast<int>(std::min<Eigen::Index>(n, 120));
  const double hnorm = std::max(1.0, max_abs(h) * 10.0);

  Eigen::VectorXd start(n);
  std::mt19937_64 rng(20210116);
  std::uniform_real_distribution<double> uniform(0.5, 1.5);
  for (Eigen::Index i = 0; i < n; ++i) start(i) = uniform(rng);
  start.normalize();

  Eigen::MatrixXd basis(n, krylov);
  EigenPair best;
  for (int restart = 0; restart < 200; ++restart) {
    Eigen::VectorXd alpha(krylov), beta(krylov);
    basis.col(0) = start;
    int m = 0;
    for (; m < krylov; ++m) {
      Eigen::VectorXd w = h * basis.col(m);
      alpha(m) = basis.col(m).dot(w);
      // Two passes of classical Gram-Schmidt against the whole basis.
      for (int pass = 0; pass < 2; ++pass)
        w -= basis.leftCols(m + 1) * (basis.leftCols(m + 1).transpose() * w);
      beta(m) = w.norm();
      if (m + 1 == krylov || beta(m) < 1e-14 * hnorm) {
        ++m;
        break;
      }
      basis.col(m + 1) = w / beta(m);
    }
    Eigen::MatrixXd t = Eigen::MatrixXd::Zero(m, m);
    for (int i = 0; i < m; ++i) {
      t(i, i) = alpha(i);
      if (i + 1 < m) t(i, i + 1) = t(i + 1, i) = beta(i);
    }
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> small(t);
    best.value = small.eigenvalues()(0);
    best.next_value = m > 1 ? small.eigenvalues()(1) : std::numeric_limits<double>::infinity();
    best.vector = basis.leftCols(m) * small.eigenvectors().col(0);
    best.vector.normalize();
    best.residual = (h * best.vector - best.value * best.vector).norm();
    const bool exhausted = m < krylov || m == n;
    if (best.residual <= tol * hnorm || exhausted) break;
    start = best.vector;
  }
  if (best.residual > 1e3 * tol * hnorm)
    throw std::runtime_error("lowest_eigenpair: Lanczos did not converge");
  fix_sign(best.vector);
  return best;
}

namespace {

SparseMatrix restrict_to(const SparseMatrix& m, const std::vector<int>& indices) {
  std::vector<int> position(m.rows(), -1);
  for (std::size_t k = 0; k < indices.size(); ++k) position[indices[k]] = static_cast<int>(k);
  std::vector<Eigen::Triplet<double>> t;
  for (std::size_t k = 0; k < indices.size(); ++k) {
    for (SparseMatrix::InnerIterator it(m, indices[k]); it; ++it) {
      const int row = position[it.row()];
      if (row >= 0) t.emplace_back(row, static_cast<int>(k), it.value());
    }
  }
  SparseMatrix out(static_cast<Eigen::Index>(indices.size()), static_cast<Eigen::Index>(indices.size()));
  out.setFromTriplets(t.begin(), t.end());
  out.makeCompressed();
  return out;
}

}  // namespace

SectorSolver::SectorSolver(const IrrepShape& shape)
    : SectorSolver(std::make_shared<const HamiltonianTerms>(shape)) {}

SectorSolver::SectorSolver(std::shared_ptr<const HamiltonianTerms> terms) : terms_(std::move(terms)) {
  for (auto& [label, indices] : parity_blocks(terms_->ops().basis())) {
    blocks_.push_back({label, indices, restrict_to(terms_->free_part(), indices),
                       restrict_to(terms_->pair_part(), indices)});
  }
}

GroundState SectorSolver::ground_state(const ModelParams& params) const {
  const int n = shape().particles();
  if (n < 1) throw std::domain_error("ground_state: empty sector");
  if (n == 1 && params.lambda != 0.0)
    throw std::domain_error("two-body coupling undefined for N = 1 (no particle pairs)");
  const double pair_scale = n > 1 ? params.lambda / (static_cast<double>(n) * (n - 1)) : 0.0;

  std::vector<EigenPair> lowest;
  lowest.reserve(blocks_.size());
  for (const auto& block : blocks_) {
    const SparseMatrix hb = (params.epsilon / n) * block.free_part - pair_scale * block.pair_part;
    lowest.push_back(lowest_eigenpair(hb));
  }
  std::size_t best = 0;
  for (std::size_t b = 1; b < lowest.size(); ++b)
    if (lowest[b].value < lowest[best].value) best = b;

  GroundState out;
  out.energy = lowest[best].value;
  out.parity = blocks_[best].label;
  out.gap = lowest[best].next_value - out.energy;
  for (std::size_t b = 0; b < lowest.size(); ++b)
    if (b != best) out.gap = std::min(out.gap, lowest[b].value - out.energy);
  out.degenerate = out.gap < degeneracy_gap;
  out.vector = Eigen::VectorXd::Zero(terms_->ops().dim());
  const auto& idx = blocks_[best].indices;
  for (std::size_t k = 0; k < idx.size(); ++k) out.vector(idx[k]) = lowest[best].vector(k);
  return out;
}

std::array<double, 3> SectorSolver::populations(const Eigen::VectorXd& v) const {
  const double n = shape().particles();
  const double norm2 = v.squaredNorm();
  std::array<double, 3> out{};
  for (int i = 1; i <= 3; ++i) out[i - 1] = v.dot(terms_->ops()(i, i) * v) / (n * norm2);
  return out;
}

FullTensorOperators full_tensor_operators(int particles) {
  if (particles < 1) throw std::invalid_argument("full tensor space needs N >= 1");
  if (particles > 4) throw std::invalid_argument("full tensor oracle refuses N > 4 (3^N dense work)");
  int dim = 1;
  for (int k = 0; k < particles; ++k) dim *= 3;
  FullTensorOperators out;
  out.particles = particles;
  for (int i = 1; i <= 3; ++i) {
    for (int j = 1; j <= 3; ++j) {
      std::vector<Eigen::Triplet<double>> t;
      for (int state = 0; state < dim; ++state) {
        int stride = 1;
        for (int site = 0; site < particles; ++site, stride *= 3) {
          const int level = (state / stride) % 3 + 1;
          if (level != j) continue;
          const int target = state + (i - j) * stride;
          t.emplace_back(target, state, 1.0);
        }
      }
      SparseMatrix m(dim, dim);
      m.setFromTriplets(t.begin(), t.end());
      m.makeCompressed();
      out.s[3 * (i - 1) + (j - 1)] = std::move(m);
    }
  }
  return out;
}

std::vector<double> full_tensor_spectrum(int particles, const ModelParams& params) {
  const FullTensorOperators s = full_tensor_operators(particles);
  SparseMatrix h = (params.epsilon / particles) * (s(3, 3) - s(1, 1));
  if (particles > 1) {
    SparseMatrix pair(h.rows(), h.cols());
    for (int i = 1; i <= 3; ++i)
      for (int j = 1; j <= 3; ++j)
        if (i != j) pair += SparseMatrix(s(i, j) * s(i, j));
    h -= (params.lambda / (static_cast<double>(particles) * (particles - 1))) * pair;
  }
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver{Eigen::MatrixXd(h),
                                                              Eigen::EigenvaluesOnly};
  const Eigen::VectorXd& ev = solver.eigenvalues();
  return {ev.data(), ev.data() + ev.size()};
}

std::vector<double> sector_spectrum_union(int particles, const ModelParams& params) {
  std::vector<double> out;
  for (const IrrepShape& shape : shapes_with_particles(particles)) {
    Eigen::VectorXd ev;
    if (particles == 1) {
      ev = Eigen::VectorXd(HamiltonianTerms(shape).build({params.epsilon, 0.0}).dense().diagonal());
      std::sort(ev.begin(), ev.end());
    } else {
      ev = diagonalize(build_h3(shape, params), static_cast<int>(dimension(shape))).eigenvalues;
    }
    const std::int64_t copies = multiplicity(shape);
    for (std::int64_t c = 0; c < copies; ++c) out.insert(out.end(), ev.begin(), ev.end());
  }
  std::sort(out.begin(), out.end());
  return out;
}

namespace {

SweepResult run_sweep(const IrrepShape& shape, const std::vector<double>& lambdas,
                      const SweepOptions& options, bool with_chi) {
  if (with_chi && !(options.dlambda > 0.0))
    throw std::invalid_argument("sweep: dlambda must be positive");
  if (!std::is_sorted(lambdas.begin(), lambdas.end()))
    throw std::invalid_argument("sweep: lambda grid must be sorted");
  const SectorSolver solver(shape);
  SweepResult out{shape, with_chi ? options.dlambda : 0.0,
                  std::vector<SweepPoint>(lambdas.size())};
  parallel_for(static_cast<int>(lambdas.size()), options.threads, [&](int k) {
    const double lambda = lambdas[k];
    const GroundState g = solver.ground_state({options.epsilon, lambda});
    SweepPoint& p = out.points[k];
    p.lambda = lambda;
    p.energy = g.energy;
    p.populations = solver.populations(g.vector);
    p.degenerate = g.degenerate;
    if (with_chi) {
      const GroundState next = solver.ground_state({options.epsilon, lambda + options.dlambda});
      const double overlap = g.vector.dot(next.vector);
      p.fidelity = std::clamp(overlap * overlap, 0.0, 1.0);
      p.chi = 2.0 * (1.0 - p.fidelity) / (options.dlambda * options.dlambda);
      p.degenerate = p.degenerate || next.degenerate;
    } else {
      p.fidelity = p.chi = std::numeric_limits<double>::quiet_NaN();
    }
  });
  return out;
}

}  // namespace

SweepResult susceptibility_sweep(const IrrepShape& shape, const std::vector<double>& lambdas,
                                 const SweepOptions& options) {
  return run_sweep(shape, lambdas, options, true);
}

SweepResult population_sweep(const IrrepShape& shape, const std::vector<double>& lambdas,
                             const SweepOptions& options) {
  return run_sweep(shape, lambdas, options, false);
}

int first_chi_peak(const SweepResult& sweep) {
  const auto& p = sweep.points;
  for (std::size_t k = 1; k + 1 < p.size(); ++k) {
    if (p[k].degenerate || std::isnan(p[k].chi)) continue;
    if (p[k].chi > p[k - 1].chi && p[k].chi >= p[k + 1].chi) return static_cast<int>(k);
  }
  return -1;
}

int max_chi_index(const SweepResult& sweep) {
  int best = -1;
  for (std::size_t k = 0; k < sweep.points.size(); ++k) {
    const auto& p = sweep.points[k];
    if (p.degenerate || std::isnan(p.chi)) continue;
    if (best < 0 || p.chi > sweep.points[best].chi) best = static_cast<int>(k);
  }
  return best;
}

}  // namespace lmg3
