#include "lmg3/irrep_basis.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <tuple>

namespace lmg3 {

IrrepShape IrrepShape::make(int h1, int h2, int h3) {
  IrrepShape shape{h1, h2, h3};
  if (!shape.valid()) {
    throw std::invalid_argument("invalid Young frame " + shape.str() +
                                ": need h1 >= h2 >= h3 >= 0");
  }
  return shape;
}

std::string IrrepShape::str() const {
  std::ostringstream os;
  os << '[' << h1 << ',' << h2 << ',' << h3 << ']';
  return os.str();
}

IrrepShape parse_shape(const std::string& text) {
  std::vector<int> rows;
  std::string body = text;
  if (body.size() >= 2 && body.front() == '[' && body.back() == ']') body = body.substr(1, body.size() - 2);
  std::stringstream ss(body);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    int value = 0;
    try {
      value = std::stoi(item, &used);
    } catch (const std::exception&) {
      throw std::invalid_argument("malformed shape '" + text + "'");
    }
    if (used != item.size()) throw std::invalid_argument("malformed shape '" + text + "'");
    rows.push_back(value);
  }
  if (rows.size() < 2 || rows.size() > 3) {
    throw std::invalid_argument("shape '" + text + "' must have two or three rows");
  }
  return IrrepShape::make(rows[0], rows[1], rows.size() == 3 ? rows[2] : 0);
}

bool GtPattern::valid() const {
  return m13 >= m23 && m23 >= m33 && m33 >= 0 &&  //
         m13 >= m12 && m12 >= m23 &&              //
         m23 >= m22 && m22 >= m33 &&              //
         m12 >= m11 && m11 >= m22;
}

std::string GtPattern::str() const {
  std::ostringstream os;
  os << '{' << m13 << ',' << m23 << ',' << m33 << "; " << m12 << ',' << m22 << "; " << m11
     << '}';
  return os.str();
}

SectorProportions SectorProportions::of(const IrrepShape& shape) {
  const double n = shape.particles();
  if (n == 0) throw std::invalid_argument("empty shape has no proportions");
  const double nu = shape.h3 / n;
  // [N/3, N/3, N/3] has nu = 1/3 and no meaningful mu; report the symmetric end.
  const double mu = nu < 1.0 / 3.0 - 1e-15 ? shape.h1 / ((1.0 - nu) * n) : 1.0;
  return {mu, nu};
}

bool SectorProportions::admissible(double tol) const {
  if (nu < -tol || nu > 1.0 / 3.0 + tol) return false;
  if (nu >= 1.0 / 3.0 - tol) return true;
  return mu >= 0.5 - tol && mu <= (1.0 - 2.0 * nu) / (1.0 - nu) + tol;
}

std::vector<GtPattern> enumerate_basis(const IrrepShape& shape) {
  if (!shape.valid()) IrrepShape::make(shape.h1, shape.h2, shape.h3);
  std::vector<GtPattern> out;
  out.reserve(static_cast<std::size_t>(dimension(shape)));
  for (int m12 = shape.h1; m12 >= shape.h2; --m12)
    for (int m22 = shape.h2; m22 >= shape.h3; --m22)
      for (int m11 = m12; m11 >= m22; --m11)
        out.push_back({shape.h1, shape.h2, shape.h3, m12, m22, m11});
  return out;
}

std::int64_t dimension(const IrrepShape& shape) {
  if (!shape.valid()) IrrepShape::make(shape.h1, shape.h2, shape.h3);
  const std::int64_t a = 1 + shape.h1 - shape.h2;
  const std::int64_t b = 2 + shape.h1 - shape.h3;
  const std::int64_t c = 1 + shape.h2 - shape.h3;
  return a * b * c / 2;
}

std::int64_t multiplicity(const IrrepShape& shape) {
  if (!shape.valid()) IrrepShape::make(shape.h1, shape.h2, shape.h3);
  const int rows[3] = {shape.h1, shape.h2, shape.h3};
  std::vector<__int128> hooks;
  for (int r = 0; r < 3; ++r) {
    for (int c = 0; c < rows[r]; ++c) {
      int leg = 0;
      for (int below = r + 1; below < 3; ++below)
        if (rows[below] > c) ++leg;
      hooks.push_back(rows[r] - c + leg);
    }
  }
  // N! / prod(hooks), cancelling as we go so intermediates stay small.
  __int128 result = 1;
  for (int k = 2; k <= shape.particles(); ++k) {
    result *= k;
    for (auto& d : hooks) {
      if (d == 1) continue;
      __int128 x = result, y = d;
      while (y != 0) {
        const __int128 t = x % y;
        x = y;
        y = t;
      }
      result /= x;
      d /= x;
    }
  }
  if (std::any_of(hooks.begin(), hooks.end(), [](__int128 d) { return d != 1; }) ||
      result > std::numeric_limits<std::int64_t>::max()) {
    throw std::overflow_error("multiplicity of " + shape.str() + " exceeds 64-bit range");
  }
  return static_cast<std::int64_t>(result);
}

std::vector<IrrepShape> shapes_with_particles(int particles, int levels) {
  if (particles < 0) throw std::invalid_argument("negative particle number");
  if (levels != 2 && levels != 3) throw std::invalid_argument("only U(2) and U(3) supported");
  std::vector<IrrepShape> out;
  for (int h1 = particles; h1 >= 0; --h1)
    for (int h2 = std::min(h1, particles - h1); h2 >= 0; --h2) {
      const int h3 = particles - h1 - h2;
      if (h3 > h2) continue;
      if (levels == 2 && h3 != 0) continue;
      out.push_back({h1, h2, h3});
    }
  return out;
}

std::vector<SpinMultiplicity> catalan_series(int particles) {
  if (particles < 1) throw std::invalid_argument("catalan_series needs N >= 1");
  std::vector<SpinMultiplicity> out;
  for (int k = 0; k <= particles / 2; ++k) {
    // binomial(N+1, k) computed exactly, then the (N+1-2k)/(N+1) factor.
    __int128 binom = 1;
    for (int i = 1; i <= k; ++i) binom = binom * (particles + 2 - i) / i;
    const __int128 m = binom * (particles + 1 - 2 * k) / (particles + 1);
    out.push_back({particles - 2 * k, static_cast<std::int64_t>(m)});
  }
  return out;
}

Weight weight_of(const GtPattern& p) {
  const int row1 = p.m11;
  const int row2 = p.m12 + p.m22;
  const int row3 = p.m13 + p.m23 + p.m33;
  return {row1, row2 - row1, row3 - row2};
}

GtPattern hw_pattern(const IrrepShape& s) { return {s.h1, s.h2, s.h3, s.h1, s.h2, s.h1}; }

GtPattern lw_pattern(const IrrepShape& s) { return {s.h1, s.h2, s.h3, s.h2, s.h3, s.h3}; }

bool weight_higher(const Weight& a, const Weight& b) {
  if (a.w1 != b.w1) return a.w1 > b.w1;
  if (a.w2 != b.w2) return a.w2 > b.w2;
  return a.w3 > b.w3;
}

SectorBasis::SectorBasis(const IrrepShape& shape)
    : shape_(IrrepShape::make(shape.h1, shape.h2, shape.h3)), patterns_(enumerate_basis(shape)) {}

int SectorBasis::index_of(const GtPattern& pattern) const {
  if (pattern.shape() != shape_ || !pattern.valid()) return -1;
  // patterns_ is sorted descending on (m12, m22, m11).
  const auto key = [](const GtPattern& p) { return std::tuple(p.m12, p.m22, p.m11); };
  const auto it = std::lower_bound(
      patterns_.begin(), patterns_.end(), pattern,
      [&](const GtPattern& a, const GtPattern& b) { return key(a) > key(b); });
  if (it == patterns_.end() || key(*it) != key(pattern)) return -1;
  return static_cast<int>(it - patterns_.begin());
}

}  // namespace lmg3
