#include "zcap/symmetry.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <set>
#include <stdexcept>

namespace zcap {

std::string to_string(CutKind kind) {
  switch (kind) {
    case CutKind::FixZero: return "fix-zero";
    case CutKind::FixOne: return "fix-one";
    case CutKind::PairExclusion: return "pair-exclusion";
    case CutKind::CardinalityLowerBound: return "cardinality-lower-bound";
  }
  return "unknown";
}

Matrix2 Matrix2::times(const Matrix2& o, Int n) const {
  return {mod(a * o.a + b * o.c, n), mod(a * o.b + b * o.d, n), mod(c * o.a + d * o.c, n), mod(c * o.b + d * o.d, n)};
}

Matrix2 Matrix2::inverse(Int n) const {
  const Int inv = inverse_mod(det(n), n);
  return {mod(d * inv, n), mod(-b * inv, n), mod(-c * inv, n), mod(a * inv, n)};
}

AffineMap::AffineMap(Int n, const Matrix2& matrix, const Point& shift) : n_(n), shift_{mod(shift.u, n), mod(shift.v, n)} {
  if (n < 1 || n > kMaxModulus) throw std::invalid_argument("AffineMap: bad modulus");
  m_ = {mod(matrix.a, n), mod(matrix.b, n), mod(matrix.c, n), mod(matrix.d, n)};
  if (gcd(m_.det(n), n) != 1) throw std::invalid_argument("AffineMap: matrix is not invertible modulo n");
}

Point AffineMap::operator()(const Point& p) const {
  const Point q = m_.apply(p, n_);
  return {mod(q.u + shift_.u, n_), mod(q.v + shift_.v, n_)};
}

AffineMap AffineMap::compose(const AffineMap& other) const {
  if (other.n_ != n_) throw std::invalid_argument("AffineMap: modulus mismatch");
  return AffineMap(n_, m_.times(other.m_, n_), (*this)(other.shift_));
}

AffineMap AffineMap::inverse() const {
  const Matrix2 inv = m_.inverse(n_);
  const Point s = inv.apply(shift_, n_);
  return AffineMap(n_, inv, {-s.u, -s.v});
}

Point apply(const AffineMap& map, const Point& p) { return map(p); }

std::vector<Point> apply(const AffineMap& map, std::span<const Point> points) {
  std::vector<Point> out;
  out.reserve(points.size());
  for (const auto& p : points) out.push_back(map(p));
  return out;
}

bool is_automorphism(const AffineMap& map, Int n) {
  if (map.modulus() != n) return false;
  const auto lines = enumerate_lines(n);
  std::set<std::vector<Point>> all;
  for (const auto& l : lines) all.insert(l.points);
  for (const auto& l : lines) {
    auto image = zcap::apply(map, std::span<const Point>(l.points));
    std::sort(image.begin(), image.end());
    if (!all.count(image)) return false;
  }
  return true;
}

std::vector<Matrix2> invertible_matrices(Int n) {
  std::vector<Matrix2> out;
  for (Int a = 0; a < n; ++a)
    for (Int b = 0; b < n; ++b)
      for (Int c = 0; c < n; ++c)
        for (Int d = 0; d < n; ++d)
          if (gcd(mod(a * d - b * c, n), n) == 1) out.push_back({a, b, c, d});
  return out;
}

Int general_linear_order(Int n) {
  Int order = 1;
  const Factorization fn = factorize(n);
  for (const auto& f : fn.factors()) {
    const Int p = f.p;
    for (int i = 0; i < 4 * (f.mu - 1); ++i) order *= p;
    order *= (p * p - 1) * (p * p - p);
  }
  return order;
}

Matrix2 to_first_axis(const Point& v, Int n) {
  if (content(v.u, v.v, n) != 1) throw std::invalid_argument("to_first_axis: vector must have content 1");
  if (n == 1) return {};
  // Complete v to a basis (v, s); the inverse of [v s] sends v to (1,0).
  for (Int su = 0; su < n; ++su) {
    for (Int sv = 0; sv < n; ++sv) {
      Matrix2 basis{mod(v.u, n), su, mod(v.v, n), sv};
      if (gcd(basis.det(n), n) == 1) return basis.inverse(n);
    }
  }
  throw std::logic_error("to_first_axis: no completion found");
}

namespace {

// Matrices S with S * (0, delta) = (0, delta).
const std::vector<Matrix2>& stabilizer_of_axis_point(Int n, Int delta) {
  static std::mutex mu;
  static std::map<std::pair<Int, Int>, std::vector<Matrix2>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto [it, inserted] = cache.try_emplace({n, delta});
  if (inserted) {
    const Int step = n / delta;
    for (Int a = 0; a < n; ++a)
      for (Int c = 0; c < n; ++c)
        for (Int b = 0; b < n; b += step)
          for (Int d = 1 % n; ; d = (d + step) % n) {
            Matrix2 s{a, b, c, d};
            if (gcd(s.det(n), n) == 1) it->second.push_back(s);
            if ((d + step) % n == 1 % n) break;
          }
  }
  return it->second;
}

// A matrix B in GL(2, Z_n) with B * d = (0, delta), where delta = content(d).
Matrix2 to_axis_point(const Point& d, Int delta, Int n) {
  const Int m = n / delta;
  const Int w0u = d.u / delta, w0v = d.v / delta;
  for (Int i = 0; i < delta; ++i) {
    for (Int j = 0; j < delta; ++j) {
      Point w{mod(w0u + i * m, n), mod(w0v + j * m, n)};
      if (content(w.u, w.v, n) != 1) continue;
      const Matrix2 m1 = to_first_axis(w, n);
      return {m1.c, m1.d, m1.a, m1.b};  // swap rows: w -> (0,1)
    }
  }
  throw std::logic_error("to_axis_point: no unimodular lift");
}

std::vector<Point> normalized(std::span<const Point> points, Int n) {
  if (n < 1 || n > kMaxModulus) throw std::invalid_argument("bad modulus");
  std::vector<Point> pts(points.begin(), points.end());
  for (const auto& p : pts)
    if (p.u < 0 || p.u >= n || p.v < 0 || p.v >= n)
      throw std::invalid_argument("point " + to_string(p) + " out of range");
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  return pts;
}

}  // namespace

CanonicalForm canonical_form(std::span<const Point> points, Int n, std::size_t work_limit) {
  const auto pts = normalized(points, n);
  if (pts.empty()) throw std::invalid_argument("orbit_canonical: empty point set");
  if (pts.size() == 1) return {OrbitKey{{Point{0, 0}}}, AffineMap::translation(n, {-pts[0].u, -pts[0].v})};

  // The least image starts with (0,0), (0,delta) where delta is the least
  // content of a difference; only maps realizing that prefix are swept.
  Int delta = n;
  std::size_t pairs = 0;
  for (const auto& a : pts)
    for (const auto& x : pts) {
      if (a == x) continue;
      const Int c = content(x.u - a.u, x.v - a.v, n);
      if (c < delta) {
        delta = c;
        pairs = 0;
      }
      if (c == delta) ++pairs;
    }
  const auto& stab = stabilizer_of_axis_point(n, delta);
  const double work = static_cast<double>(pairs) * static_cast<double>(stab.size()) * static_cast<double>(pts.size());
  if (work > static_cast<double>(work_limit)) throw std::length_error("orbit_canonical: work limit exceeded");

  std::vector<Point> best, image(pts.size());
  Matrix2 best_m;
  Point best_a;
  for (const auto& a : pts) {
    for (const auto& x : pts) {
      if (a == x) continue;
      const Point d{mod(x.u - a.u, n), mod(x.v - a.v, n)};
      if (content(d.u, d.v, n) != delta) continue;
      const Matrix2 base = to_axis_point(d, delta, n);
      for (const auto& s : stab) {
        const Matrix2 m = s.times(base, n);
        for (std::size_t i = 0; i < pts.size(); ++i) image[i] = m.apply({pts[i].u - a.u, pts[i].v - a.v}, n);
        std::sort(image.begin(), image.end());
        if (best.empty() || image < best) {
          best = image;
          best_m = m;
          best_a = a;
        }
      }
    }
  }
  const Point shift = best_m.apply(best_a, n);
  return {OrbitKey{best}, AffineMap(n, best_m, {-shift.u, -shift.v})};
}

OrbitKey orbit_canonical(std::span<const Point> points, Int n, std::size_t work_limit) {
  return canonical_form(points, n, work_limit).key;
}

std::optional<AffineMap> find_mapping(std::span<const Point> from, std::span<const Point> to, Int n) {
  const auto a = normalized(from, n);
  const auto b = normalized(to, n);
  if (a.size() != b.size() || a.empty()) return std::nullopt;
  const auto ca = canonical_form(a, n);
  const auto cb = canonical_form(b, n);
  if (!(ca.key == cb.key)) return std::nullopt;
  return cb.map.inverse().compose(ca.map);
}

std::vector<CutDescriptor> wlog_cuts(std::span<const Point> fixed_out, std::span<const Point> fixed_in, Int n) {
  const auto out = normalized(fixed_out, n);
  const auto in = normalized(fixed_in, n);
  for (const auto& p : out)
    if (std::binary_search(in.begin(), in.end(), p))
      throw std::invalid_argument("wlog_cuts: point " + to_string(p) + " is both fixed in and fixed out");

  std::vector<CutDescriptor> cuts;
  for (const auto& p : in) cuts.push_back(CutDescriptor::fix_one(p));
  for (const auto& p : out) cuts.push_back(CutDescriptor::fix_zero(p));
  if (out.empty()) return cuts;

  std::set<OrbitKey> refuted;
  for (const auto& a : out) {
    std::vector<Point> s = in;
    s.push_back(a);
    refuted.insert(orbit_canonical(s, n));
  }

  auto is_fixed = [&](const Point& p) {
    return std::binary_search(in.begin(), in.end(), p) || std::binary_search(out.begin(), out.end(), p);
  };
  std::vector<Point> free_points;
  std::vector<Point> s;
  for (Int u = 0; u < n; ++u) {
    for (Int v = 0; v < n; ++v) {
      const Point z{u, v};
      if (is_fixed(z)) continue;
      s = in;
      s.push_back(z);
      if (refuted.count(orbit_canonical(s, n)))
        cuts.push_back(CutDescriptor::fix_zero(z));
      else
        free_points.push_back(z);
    }
  }

  // Subsets of {z, w} u in of size |in|+1 that avoid z or w are covered by
  // the fix-zero cuts, so only subsets dropping a fixed-in point remain.
  if (in.empty()) return cuts;
  for (std::size_t i = 0; i < free_points.size(); ++i) {
    for (std::size_t j = i + 1; j < free_points.size(); ++j) {
      for (std::size_t drop = 0; drop < in.size(); ++drop) {
        s.clear();
        for (std::size_t k = 0; k < in.size(); ++k)
          if (k != drop) s.push_back(in[k]);
        s.push_back(free_points[i]);
        s.push_back(free_points[j]);
        if (refuted.count(orbit_canonical(s, n))) {
          cuts.push_back(CutDescriptor::pair_exclusion(free_points[i], free_points[j]));
          break;
        }
      }
    }
  }
  return cuts;
}

}  // namespace zcap
