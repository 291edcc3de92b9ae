#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <vector>

namespace lmg3 {

/// Young-frame label h = [h1, h2, h3] of a U(3) (or, with h3 = 0, U(2)) irrep
/// appearing in the N-fold tensor power of the fundamental representation.
struct IrrepShape {
  int h1 = 0;
  int h2 = 0;
  int h3 = 0;

  /// Validating constructor; throws std::invalid_argument unless h1 >= h2 >= h3 >= 0.
  static IrrepShape make(int h1, int h2, int h3 = 0);

  int particles() const { return h1 + h2 + h3; }
  /// 2 when the third row is empty, 3 otherwise.
  int levels() const { return h3 == 0 ? 2 : 3; }
  bool valid() const { return h1 >= h2 && h2 >= h3 && h3 >= 0; }

  std::string str() const;
  friend auto operator<=>(const IrrepShape&, const IrrepShape&) = default;
};

/// Parses "h1,h2,h3", "[h1,h2,h3]" or "h1,h2". Throws std::invalid_argument on malformed input.
IrrepShape parse_shape(const std::string& text);

/// Gelfand-Tsetlin pattern
///
///     m13   m23   m33
///        m12   m22
///           m11
///
/// The top row is the owning shape.
struct GtPattern {
  int m13 = 0, m23 = 0, m33 = 0;
  int m12 = 0, m22 = 0;
  int m11 = 0;

  IrrepShape shape() const { return {m13, m23, m33}; }
  /// Betweenness conditions.
  bool valid() const;
  std::string str() const;
  friend auto operator<=>(const GtPattern&, const GtPattern&) = default;
};

/// Level populations (eigenvalues of S_11, S_22, S_33).
struct Weight {
  int w1 = 0, w2 = 0, w3 = 0;
  int operator[](int level) const { return level == 1 ? w1 : level == 2 ? w2 : w3; }
  friend auto operator<=>(const Weight&, const Weight&) = default;
};

/// Proportions (mu, nu) of a shape: h1 = mu (1-nu) N, h2 = (1-mu)(1-nu) N, h3 = nu N.
struct SectorProportions {
  double mu = 1.0;
  double nu = 0.0;

  static SectorProportions of(const IrrepShape& shape);
  /// mu in [1/2, (1-2nu)/(1-nu)], nu in [0, 1/3].
  bool admissible(double tol = 1e-12) const;
};

/// All GT patterns of `shape`, ordered lexicographically descending on (m12, m22, m11).
/// The highest-weight pattern comes first and the lowest-weight pattern last.
std::vector<GtPattern> enumerate_basis(const IrrepShape& shape);

/// (1 + h1 - h2)(2 + h1 - h3)(1 + h2 - h3) / 2
std::int64_t dimension(const IrrepShape& shape);

/// Number of copies of `shape` in the N-fold tensor power of the fundamental
/// representation: the number of standard Young tableaux (hook-length formula).
std::int64_t multiplicity(const IrrepShape& shape);

/// All shapes with N boxes and at most `levels` rows, ordered by descending h1, then h2.
std::vector<IrrepShape> shapes_with_particles(int particles, int levels = 3);

struct SpinMultiplicity {
  int two_j = 0;
  std::int64_t multiplicity = 0;
  double j() const { return two_j / 2.0; }
};

/// Clebsch-Gordan series of N spin-1/2: j_k = N/2 - k with
/// M_k = (N + 1 - 2k) / (N + 1) * binomial(N + 1, k), k = 0..floor(N/2).
std::vector<SpinMultiplicity> catalan_series(int particles);

Weight weight_of(const GtPattern& pattern);

GtPattern hw_pattern(const IrrepShape& shape);
GtPattern lw_pattern(const IrrepShape& shape);

/// Lexicographic order on weights: true if the first non-vanishing entry of a - b is positive.
bool weight_higher(const Weight& a, const Weight& b);

/// Enumerated basis of one irrep with O(log d) pattern-to-index lookup.
class SectorBasis {
 public:
  explicit SectorBasis(const IrrepShape& shape);

  const IrrepShape& shape() const { return shape_; }
  const std::vector<GtPattern>& patterns() const { return patterns_; }
  int size() const { return static_cast<int>(patterns_.size()); }
  const GtPattern& operator[](int index) const { return patterns_[index]; }

  /// Index of `pattern`, or -1 if it is not a pattern of this irrep.
  int index_of(const GtPattern& pattern) const;

 private:
  IrrepShape shape_;
  std::vector<GtPattern> patterns_;
};

}  // namespace lmg3
