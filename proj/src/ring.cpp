#include "zcap/ring.hpp"

#include <algorithm>
#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>

namespace zcap {

namespace {

bool is_prime(Int p) {
  if (p < 2) return false;
  for (Int d = 2; d * d <= p; ++d)
    if (p % d == 0) return false;
  return true;
}

Int ipow(Int base, int exp) {
  Int r = 1;
  while (exp-- > 0) r *= base;
  return r;
}

void check_point(const Point& p, Int n) {
  if (p.u < 0 || p.u >= n || p.v < 0 || p.v >= n)
    throw std::invalid_argument("point " + to_string(p) + " is not reduced modulo " + std::to_string(n));
}

// Exponent of p in gcd(u, v, q) for q = p^r; r for the zero vector.
int valuation(Int u, Int v, Int p, int r) {
  int k = 0;
  while (k < r && u % p == 0 && v % p == 0) {
    u /= p;
    v /= p;
    ++k;
  }
  return k;
}

}  // namespace

Int PrimePower::value() const { return ipow(p, mu); }

Factorization::Factorization(Int n, std::vector<PrimePower> factors) : n_(n), factors_(std::move(factors)) {
  if (n_ < 1) throw std::invalid_argument("modulus must be positive");
  if (n_ > kMaxModulus) throw std::invalid_argument("modulus exceeds 2^31");
  Int product = 1;
  Int last = 1;
  for (const auto& f : factors_) {
    if (f.mu < 1) throw std::invalid_argument("exponent must be positive");
    if (f.p <= last || !is_prime(f.p)) throw std::invalid_argument("factors must be increasing primes");
    last = f.p;
    for (int i = 0; i < f.mu; ++i) {
      product *= f.p;
      if (product > n_) throw std::invalid_argument("factors do not multiply to n");
    }
  }
  if (product != n_) throw std::invalid_argument("factors do not multiply to n");
}

Int Factorization::smallest_prime() const {
  if (factors_.empty()) throw std::logic_error("1 has no prime divisor");
  return factors_.front().p;
}

Factorization factorize(Int n) {
  if (n < 1) throw std::invalid_argument("factorize: n must be positive");
  std::vector<PrimePower> out;
  Int m = n;
  for (Int p = 2; p * p <= m; ++p) {
    if (m % p != 0) continue;
    int mu = 0;
    while (m % p == 0) {
      m /= p;
      ++mu;
    }
    out.push_back({p, mu});
  }
  if (m > 1) out.push_back({m, 1});
  return Factorization(n, std::move(out));
}

Int gcd(Int a, Int b) {
  a = a < 0 ? -a : a;
  b = b < 0 ? -b : b;
  while (b != 0) {
    Int t = a % b;
    a = b;
    b = t;
  }
  return a;
}

Int mod(Int a, Int n) {
  Int r = a % n;
  return r < 0 ? r + n : r;
}

Int inverse_mod(Int a, Int n) {
  Int old_r = mod(a, n), r = n;
  Int old_s = 1, s = 0;
  while (r != 0) {
    Int q = old_r / r;
    Int t = old_r - q * r;
    old_r = r;
    r = t;
    t = old_s - q * s;
    old_s = s;
    s = t;
  }
  if (old_r != 1 && n != 1) throw std::invalid_argument("element is not invertible");
  return mod(old_s, n);
}

Int content(Int u, Int v, Int n) { return gcd(gcd(u, v), n); }

std::string to_string(const Point& p) { return "(" + std::to_string(p.u) + "," + std::to_string(p.v) + ")"; }

bool Line::contains(const Point& p) const { return std::binary_search(points.begin(), points.end(), p); }

Int psi(Int m) {
  if (m < 1) throw std::invalid_argument("psi: argument must be positive");
  Int r = 1;
  const Factorization fm = factorize(m);
  for (const auto& f : fm.factors()) r *= (f.p + 1) * ipow(f.p, f.mu - 1);
  return r;
}

bool is_collinear_prime_power(Int u2, Int v2, Int u3, Int v3, Int p, int r) {
  Int q = ipow(p, r);
  u2 = mod(u2, q);
  v2 = mod(v2, q);
  u3 = mod(u3, q);
  v3 = mod(v3, q);
  while (r > 1 && u2 % p == 0 && v2 % p == 0 && u3 % p == 0 && v3 % p == 0) {
    u2 /= p;
    v2 /= p;
    u3 /= p;
    v3 /= p;
    q /= p;
    --r;
  }
  return mod(u2 * v3 - u3 * v2, q) == 0;
}

bool is_collinear_fix_zero(Int u2, Int v2, Int u3, Int v3, const Factorization& f) {
  const Int n = f.modulus();
  check_point({u2, v2}, n);
  check_point({u3, v3}, n);
  for (const auto& pp : f.factors()) {
    const Int q = pp.value();
    if (!is_collinear_prime_power(u2 % q, v2 % q, u3 % q, v3 % q, pp.p, pp.mu)) return false;
  }
  return true;
}

bool is_collinear(std::span<const Point> points, const Factorization& f) {
  if (points.empty()) throw std::invalid_argument("is_collinear: empty point list");
  const Int n = f.modulus();
  for (const auto& p : points) check_point(p, n);

  std::vector<Point> distinct(points.begin(), points.end());
  std::sort(distinct.begin(), distinct.end());
  distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
  if (distinct.size() <= 2) return true;

  const Point& base = points.front();
  std::vector<Point> diffs;
  diffs.reserve(distinct.size() - 1);
  for (const auto& p : distinct)
    if (p != base) diffs.push_back({mod(p.u - base.u, n), mod(p.v - base.v, n)});

  if (diffs.size() == 2) return is_collinear_fix_zero(diffs[0].u, diffs[0].v, diffs[1].u, diffs[1].v, f);

  // With more than three points the pivot has to be a difference of maximal
  // order in every p-component; the others must be multiples of it.
  for (const auto& pp : f.factors()) {
    const Int q = pp.value();
    std::size_t pivot = 0;
    int best = pp.mu + 1;
    for (std::size_t i = 0; i < diffs.size(); ++i) {
      int val = valuation(diffs[i].u % q, diffs[i].v % q, pp.p, pp.mu);
      if (val < best) {
        best = val;
        pivot = i;
      }
    }
    const Point& piv = diffs[pivot];
    for (std::size_t i = 0; i < diffs.size(); ++i) {
      if (i == pivot) continue;
      if (!is_collinear_prime_power(piv.u % q, piv.v % q, diffs[i].u % q, diffs[i].v % q, pp.p, pp.mu))
        return false;
    }
  }
  return true;
}

bool det_criterion(const Point& p1, const Point& p2, const Point& p3, Int n) {
  if (n < 1 || n > kMaxModulus) throw std::invalid_argument("det_criterion: bad modulus");
  check_point(p1, n);
  check_point(p2, n);
  check_point(p3, n);
  Int a = mod(p2.u - p1.u, n), b = mod(p2.v - p1.v, n);
  Int c = mod(p3.u - p1.u, n), d = mod(p3.v - p1.v, n);
  return mod(a * d - b * c, n) == 0;
}

Point canonical_direction(const Point& t, Int n) {
  if (content(t.u, t.v, n) != 1) throw std::invalid_argument("direction does not generate a subgroup of order n");
  Point best{mod(t.u, n), mod(t.v, n)};
  for (Int w = 1; w < n; ++w) {
    if (gcd(w, n) != 1) continue;
    Point cand{mod(w * t.u, n), mod(w * t.v, n)};
    if (cand < best) best = cand;
  }
  return best;
}

std::vector<Point> canonical_directions(Int n) {
  if (n < 1) throw std::invalid_argument("modulus must be positive");
  std::vector<Int> units;
  for (Int w = 1; w <= n; ++w)
    if (gcd(w, n) == 1) units.push_back(w % n);
  std::vector<char> seen(static_cast<std::size_t>(n * n), 0);
  std::vector<Point> out;
  for (Int u = 0; u < n; ++u) {
    for (Int v = 0; v < n; ++v) {
      if (seen[u * n + v] || content(u, v, n) != 1) continue;
      out.push_back({u, v});
      for (Int w : units) seen[mod(w * u, n) * n + mod(w * v, n)] = 1;
    }
  }
  return out;
}

Line make_line(const Point& through, const Point& direction, Int n) {
  check_point(through, n);
  Line line;
  line.direction = canonical_direction(direction, n);
  line.points.reserve(static_cast<std::size_t>(n));
  for (Int w = 0; w < n; ++w)
    line.points.push_back({mod(through.u + w * direction.u, n), mod(through.v + w * direction.v, n)});
  std::sort(line.points.begin(), line.points.end());
  line.anchor = line.points.front();
  return line;
}

namespace {

Line line_from_index(const LineIndex& idx, int l) {
  Line line;
  line.direction = idx.direction(idx.line_class(l));
  for (int p : idx.points_on(l)) line.points.push_back(idx.point(p));
  line.anchor = line.points.front();
  return line;
}

int checked_int(Int n) {
  if (n < 1) throw std::invalid_argument("modulus must be positive");
  if (n > 4096) throw std::invalid_argument("line enumeration is limited to n <= 4096");
  return static_cast<int>(n);
}

}  // namespace

std::vector<Line> enumerate_lines(Int n) {
  const LineIndex& idx = line_index(checked_int(n));
  std::vector<Line> out;
  out.reserve(static_cast<std::size_t>(idx.line_count()));
  for (int l = 0; l < idx.line_count(); ++l) out.push_back(line_from_index(idx, l));
  return out;
}

std::vector<Line> lines_through(const Point& p, Int n) {
  const LineIndex& idx = line_index(checked_int(n));
  check_point(p, n);
  std::vector<Line> out;
  for (int l : idx.lines_through(idx.index(p))) out.push_back(line_from_index(idx, l));
  return out;
}

std::vector<Line> lines_through_pair(const Point& p, const Point& q, Int n) {
  if (p == q) throw std::invalid_argument("lines_through_pair: points must be distinct");
  check_point(q, n);
  std::vector<Line> out;
  for (auto& line : lines_through(p, n))
    if (line.contains(q)) out.push_back(std::move(line));
  return out;
}

bool neighbor_rel(const Point& a, const Point& b, const Factorization& f) {
  if (!f.is_prime_power() || f.factors().front().mu < 2)
    throw std::invalid_argument("neighbor_rel: modulus must be p^r with r >= 2");
  check_point(a, f.modulus());
  check_point(b, f.modulus());
  const Int p = f.factors().front().p;
  return (a.u - b.u) % p == 0 && (a.v - b.v) % p == 0;
}

CollinearityTable::CollinearityTable(Int n) : n_(n) {
  const std::size_t cells = static_cast<std::size_t>(n * n) * static_cast<std::size_t>(n * n);
  bits_.assign((cells + 63) / 64, 0);
}

bool CollinearityTable::at(const Point& a, const Point& b) const {
  check_point(a, n_);
  check_point(b, n_);
  const std::size_t nn = static_cast<std::size_t>(n_ * n_);
  const std::size_t bit = static_cast<std::size_t>(a.u * n_ + a.v) * nn + static_cast<std::size_t>(b.u * n_ + b.v);
  return (bits_[bit / 64] >> (bit % 64)) & 1U;
}

CollinearityTable build_collinearity_table(Int n, Int limit) {
  if (n < 1) throw std::invalid_argument("modulus must be positive");
  if (n > limit) throw std::length_error("collinearity table limited to n <= " + std::to_string(limit));
  const Factorization f = factorize(n);
  CollinearityTable table(n);
  const Int nn = n * n;
  for (Int a = 0; a < nn; ++a) {
    for (Int b = a; b < nn; ++b) {
      if (!is_collinear_fix_zero(a / n, a % n, b / n, b % n, f)) continue;
      const std::size_t ab = static_cast<std::size_t>(a * nn + b);
      const std::size_t ba = static_cast<std::size_t>(b * nn + a);
      table.bits_[ab / 64] |= std::uint64_t{1} << (ab % 64);
      table.bits_[ba / 64] |= std::uint64_t{1} << (ba % 64);
    }
  }
  return table;
}

LineIndex::LineIndex(int n) : n_(n) {
  if (n < 1) throw std::invalid_argument("modulus must be positive");
  directions_ = canonical_directions(n);
  const int classes = class_count();
  const int nn = n * n;
  line_points_.reserve(static_cast<std::size_t>(classes) * nn);
  point_lines_.assign(static_cast<std::size_t>(nn) * classes, -1);
  line_class_.reserve(static_cast<std::size_t>(classes) * n);
  std::vector<int> pts(static_cast<std::size_t>(n));
  for (int c = 0; c < classes; ++c) {
    const Point t = directions_[c];
    for (int start = 0; start < nn; ++start) {
      if (point_lines_[static_cast<std::size_t>(start) * classes + c] >= 0) continue;
      const int line = line_count();
      const Int su = start / n, sv = start % n;
      for (int w = 0; w < n; ++w)
        pts[w] = static_cast<int>(mod(su + w * t.u, n) * n + mod(sv + w * t.v, n));
      std::sort(pts.begin(), pts.end());
      for (int p : pts) {
        point_lines_[static_cast<std::size_t>(p) * classes + c] = line;
        line_points_.push_back(p);
      }
      line_class_.push_back(c);
    }
  }
}

std::span<const int> LineIndex::points_on(int line) const {
  return {line_points_.data() + static_cast<std::size_t>(line) * n_, static_cast<std::size_t>(n_)};
}

std::span<const int> LineIndex::lines_through(int point) const {
  const std::size_t c = directions_.size();
  return {point_lines_.data() + static_cast<std::size_t>(point) * c, c};
}

const LineIndex& line_index(int n) {
  static std::mutex mu;
  static std::map<int, std::unique_ptr<LineIndex>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto& slot = cache[n];
  if (!slot) slot = std::make_unique<LineIndex>(n);
  return *slot;
}

}  // namespace zcap
