#pragma once

// Arithmetic over Z_n, points and lines of Z_n^2, and collinearity testing.
//
// Residues are represented by {0,...,n-1}. Point indices used by the search
// code are u*n + v, i.e. row-major in the lexicographic order of (u,v).

#include <compare>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace zcap {

using Int = std::int64_t;

// Largest modulus accepted by the collinearity code; products of two
// residues must fit into a signed 64-bit integer.
inline constexpr Int kMaxModulus = Int{1} << 31;

struct PrimePower {
  Int p = 0;
  int mu = 0;

  Int value() const;
  friend bool operator==(const PrimePower&, const PrimePower&) = default;
};

class Factorization {
 public:
  // Validates that the factors multiply to n, primes strictly increase and
  // every exponent is positive.
  Factorization(Int n, std::vector<PrimePower> factors);

  Int modulus() const { return n_; }
  const std::vector<PrimePower>& factors() const { return factors_; }
  bool is_prime_power() const { return factors_.size() == 1; }
  Int smallest_prime() const;

 private:
  Int n_;
  std::vector<PrimePower> factors_;
};

Factorization factorize(Int n);

Int gcd(Int a, Int b);
Int mod(Int a, Int n);
// Inverse of a modulo n; throws if gcd(a, n) != 1.
Int inverse_mod(Int a, Int n);
// gcd(u, v, n) for a direction or difference vector.
Int content(Int u, Int v, Int n);

struct Point {
  Int u = 0;
  Int v = 0;

  friend auto operator<=>(const Point&, const Point&) = default;
};

std::string to_string(const Point& p);

struct Line {
  Point anchor;     // lexicographic minimum of points
  Point direction;  // canonical generator of the cyclic subgroup
  std::vector<Point> points;  // sorted, exactly n entries

  bool contains(const Point& p) const;
  friend bool operator==(const Line& a, const Line& b) { return a.points == b.points; }
};

// Multiplicative function with psi(p^r) = (p+1) p^(r-1), psi(1) = 1.
Int psi(Int m);

bool is_collinear_prime_power(Int u2, Int v2, Int u3, Int v3, Int p, int r);
bool is_collinear_fix_zero(Int u2, Int v2, Int u3, Int v3, const Factorization& f);
// True iff all points lie on one common line. Repeated points are ignored.
bool is_collinear(std::span<const Point> points, const Factorization& f);
// Vanishing of the 3x3 determinant with a column of ones. Necessary for
// collinearity, sufficient only for prime n.
bool det_criterion(const Point& p1, const Point& p2, const Point& p3, Int n);

// Canonical generator: least element of {w*t : w a unit mod n}.
Point canonical_direction(const Point& t, Int n);
// One canonical generator per cyclic subgroup of order n, ascending.
std::vector<Point> canonical_directions(Int n);

Line make_line(const Point& through, const Point& direction, Int n);
std::vector<Line> enumerate_lines(Int n);
std::vector<Line> lines_through(const Point& p, Int n);
std::vector<Line> lines_through_pair(const Point& p, const Point& q, Int n);

// For n = p^r with r >= 2: p divides both coordinate differences.
bool neighbor_rel(const Point& a, const Point& b, const Factorization& f);

class CollinearityTable {
 public:
  static constexpr Int kDefaultLimit = 64;

  Int modulus() const { return n_; }
  // Whether (0,0), a, b are collinear.
  bool at(const Point& a, const Point& b) const;

 private:
  friend CollinearityTable build_collinearity_table(Int n, Int limit);
  explicit CollinearityTable(Int n);

  Int n_;
  std::vector<std::uint64_t> bits_;
};

CollinearityTable build_collinearity_table(Int n, Int limit = CollinearityTable::kDefaultLimit);

// Index form of the line system, shared by the solvers and the ILP builder.
// Lines are grouped by parallel class (one class per canonical direction);
// within a class they are ordered by anchor, which is also the order of
// enumerate_lines().
class LineIndex {
 public:
  explicit LineIndex(int n);

  int modulus() const { return n_; }
  int point_count() const { return n_ * n_; }
  int line_count() const { return static_cast<int>(line_class_.size()); }
  int class_count() const { return static_cast<int>(directions_.size()); }

  int index(const Point& p) const { return static_cast<int>(p.u) * n_ + static_cast<int>(p.v); }
  Point point(int index) const { return {index / n_, index % n_}; }

  std::span<const int> points_on(int line) const;
  // Indexed by parallel class: entry c is the line of class c through the point.
  std::span<const int> lines_through(int point) const;
  int line_class(int line) const { return line_class_[line]; }
  int class_begin(int cls) const { return cls * n_; }
  int class_end(int cls) const { return (cls + 1) * n_; }
  const Point& direction(int cls) const { return directions_[cls]; }

 private:
  int n_;
  std::vector<Point> directions_;
  std::vector<int> line_points_;   // line_count * n
  std::vector<int> point_lines_;   // point_count * class_count
  std::vector<int> line_class_;
};

// Cached, immutable per modulus.
const LineIndex& line_index(int n);

}  // namespace zcap
