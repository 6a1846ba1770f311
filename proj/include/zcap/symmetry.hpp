#pragma once

// The affine group G of Z_n^2 (translations and invertible 2x2 matrices),
// its action on points and point sets, and canonical orbit representatives.

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "zcap/cuts.hpp"
#include "zcap/ring.hpp"

namespace zcap {

struct Matrix2 {
  Int a = 1, b = 0;  // first row
  Int c = 0, d = 1;  // second row

  Int det(Int n) const { return mod(a * d - b * c, n); }
  Point apply(const Point& p, Int n) const { return {mod(a * p.u + b * p.v, n), mod(c * p.u + d * p.v, n)}; }
  Matrix2 times(const Matrix2& o, Int n) const;
  Matrix2 inverse(Int n) const;

  friend bool operator==(const Matrix2&, const Matrix2&) = default;
};

// x -> matrix * x + shift over Z_n.
class AffineMap {
 public:
  // Throws std::invalid_argument unless det(matrix) is a unit mod n.
  AffineMap(Int n, const Matrix2& matrix, const Point& shift = {});

  static AffineMap identity(Int n) { return AffineMap(n, Matrix2{}); }
  static AffineMap translation(Int n, const Point& shift) { return AffineMap(n, Matrix2{}, shift); }

  Int modulus() const { return n_; }
  const Matrix2& matrix() const { return m_; }
  const Point& shift() const { return shift_; }

  Point operator()(const Point& p) const;
  // (this o other)(x) = this(other(x))
  AffineMap compose(const AffineMap& other) const;
  AffineMap inverse() const;

 private:
  Int n_;
  Matrix2 m_;
  Point shift_;
};

Point apply(const AffineMap& map, const Point& p);
std::vector<Point> apply(const AffineMap& map, std::span<const Point> points);

// Checks that every line of Z_n^2 is mapped onto a line.
bool is_automorphism(const AffineMap& map, Int n);

// All of GL(2, Z_n), in lexicographic order of (a,b,c,d).
std::vector<Matrix2> invertible_matrices(Int n);
// Order of GL(2, Z_n).
Int general_linear_order(Int n);

// Some matrix M in GL(2, Z_n) with M * v = (1, 0); v must have content 1.
Matrix2 to_first_axis(const Point& v, Int n);

struct OrbitKey {
  std::vector<Point> canonical;  // sorted
  friend bool operator==(const OrbitKey&, const OrbitKey&) = default;
  friend auto operator<=>(const OrbitKey& a, const OrbitKey& b) { return a.canonical <=> b.canonical; }
};

struct CanonicalForm {
  OrbitKey key;
  AffineMap map;  // map(points) == key.canonical as sets
};

inline constexpr std::size_t kDefaultOrbitWorkLimit = std::size_t{1} << 31;

// Lexicographically least sorted image of the point set under G. Throws
// std::length_error when the estimated work exceeds work_limit.
CanonicalForm canonical_form(std::span<const Point> points, Int n, std::size_t work_limit = kDefaultOrbitWorkLimit);
OrbitKey orbit_canonical(std::span<const Point> points, Int n, std::size_t work_limit = kDefaultOrbitWorkLimit);

// An element of G mapping the set `from` onto the set `to`, if one exists.
std::optional<AffineMap> find_mapping(std::span<const Point> from, std::span<const Point> to, Int n);

// Case-differentiation cuts. `fixed_in` are points assumed in the cap; every
// point of `fixed_out` is an already refuted extension of fixed_in. Emits
// fix-one for fixed_in, fix-zero for fixed_out, then derived cuts:
//   fix-zero z        if some g in G maps {z} u fixed_in onto {a} u fixed_in,
//   pair-exclusion z,w if some g maps {z,w} u fixed_in onto {a,y} u fixed_in,
// for a in fixed_out.
std::vector<CutDescriptor> wlog_cuts(std::span<const Point> fixed_out, std::span<const Point> fixed_in, Int n);

}  // namespace zcap
