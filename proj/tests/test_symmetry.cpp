#include <doctest.h>

#include <random>
#include <set>

#include "oracles.hpp"
#include "zcap/solvers.hpp"
#include "zcap/symmetry.hpp"

using namespace zcap;

namespace {

AffineMap random_map(Int n, std::mt19937_64& rng) {
  std::uniform_int_distribution<Int> r(0, n - 1);
  for (;;) {
    Matrix2 m{r(rng), r(rng), r(rng), r(rng)};
    if (gcd(m.det(n), n) == 1) return AffineMap(n, m, {r(rng), r(rng)});
  }
}

std::vector<Point> random_points(Int n, int k, std::mt19937_64& rng) {
  std::uniform_int_distribution<Int> r(0, n - 1);
  std::set<Point> s;
  while (static_cast<int>(s.size()) < std::min<Int>(k, n * n)) s.insert({r(rng), r(rng)});
  return {s.begin(), s.end()};
}

// Least sorted image over every element of the affine group.
std::vector<Point> brute_canonical(const std::vector<Point>& pts, Int n) {
  std::vector<Point> best;
  for (Int a = 0; a < n; ++a)
    for (Int b = 0; b < n; ++b)
      for (Int c = 0; c < n; ++c)
        for (Int d = 0; d < n; ++d) {
          if (gcd(mod(a * d - b * c, n), n) != 1) continue;
          for (Int x = 0; x < n; ++x)
            for (Int y = 0; y < n; ++y) {
              std::vector<Point> img;
              for (const auto& p : pts) img.push_back({mod(a * p.u + b * p.v + x, n), mod(c * p.u + d * p.v + y, n)});
              std::sort(img.begin(), img.end());
              if (best.empty() || img < best) best = img;
            }
        }
  return best;
}

int max_cap_containing(Int n, const std::vector<Point>& in) {
  SearchOptions o;
  o.forced_in = in;
  const auto r = max_cap(n, o);
  REQUIRE(r.exact());
  return r.certificate ? static_cast<int>(r.certificate->size()) : 0;
}

}  // namespace

TEST_CASE("apply examples") {
  CHECK(AffineMap::identity(12)({3, 7}) == Point{3, 7});
  CHECK(AffineMap::translation(12, {9, 5})({3, 7}) == Point{0, 0});
  CHECK(zcap::apply(AffineMap(5, {2, 0, 0, 1}), Point{1, 3}) == Point{2, 3});
  CHECK_THROWS_AS(AffineMap(6, {2, 0, 0, 1}), std::invalid_argument);
}

TEST_CASE("automorphisms") {
  for (Int n = 1; n <= 12; ++n) CHECK(is_automorphism(AffineMap::translation(n, {n / 2, n - 1}), n));
  CHECK(is_automorphism(AffineMap(5, {2, 1, 1, 1}, {3, 4}), 5));
  std::mt19937_64 rng(1);
  for (Int n : {4, 6, 8, 9, 10}) CHECK(is_automorphism(random_map(n, rng), n));
}

TEST_CASE("composition and inverse") {
  std::mt19937_64 rng(2);
  for (Int n : {5, 8, 12, 25}) {
    for (int t = 0; t < 50; ++t) {
      const AffineMap f = random_map(n, rng), g = random_map(n, rng);
      const Point p{static_cast<Int>(t) % n, (3 * t) % n};
      CHECK(f.compose(g)(p) == f(g(p)));
      CHECK(f.inverse()(f(p)) == p);
    }
  }
}

TEST_CASE("general linear group order") {
  for (Int n = 1; n <= 8; ++n) CHECK(static_cast<Int>(invertible_matrices(n).size()) == general_linear_order(n));
  for (Int p : {2, 3, 5, 7}) {
    // images of the basis vectors, i.e. the columns, determine the matrix
    std::set<std::pair<Point, Point>> images;
    for (const auto& m : invertible_matrices(p)) images.insert({m.apply({1, 0}, p), m.apply({0, 1}, p)});
    CHECK(static_cast<Int>(images.size()) == (p * p - 1) * (p * p - p));
  }
}

TEST_CASE("to_first_axis") {
  for (Int n : {6, 12, 25}) {
    for (Int u = 0; u < n; ++u)
      for (Int v = 0; v < n; ++v) {
        if (content(u, v, n) != 1) continue;
        const Matrix2 m = to_first_axis({u, v}, n);
        CHECK(gcd(m.det(n), n) == 1);
        CHECK(m.apply({u, v}, n) == Point{1 % n, 0});
      }
  }
}

TEST_CASE("collinearity is preserved and reflected by the group") {
  std::mt19937_64 rng(3);
  for (Int n = 2; n <= 12; ++n) {
    const auto f = factorize(n);
    int bad = 0;
    for (int t = 0; t < 1000; ++t) {
      const AffineMap g = random_map(n, rng);
      auto pts = random_points(n, 3, rng);
      if (t % 2 == 0 && pts.size() == 3) {
        // make it collinear half of the time
        pts[2] = {mod(pts[0].u + 2 * (pts[1].u - pts[0].u), n), mod(pts[0].v + 2 * (pts[1].v - pts[0].v), n)};
      }
      const auto img = zcap::apply(g, std::span<const Point>(pts));
      if (is_collinear(pts, f) != is_collinear(img, f)) ++bad;
    }
    CHECK_MESSAGE(bad == 0, "n = " << n);
  }
}

TEST_CASE("caps are mapped to caps") {
  std::mt19937_64 rng(4);
  for (Int n = 2; n <= 12; ++n) {
    const Cap c = greedy_complete(Cap(n, {}), n);
    for (int t = 0; t < 20; ++t) {
      const auto img = zcap::apply(random_map(n, rng), std::span<const Point>(c.points()));
      CHECK(is_cap(img, n));
    }
  }
}

TEST_CASE("orbit_canonical examples") {
  const std::vector<Point> one{{3, 4}};
  CHECK(orbit_canonical(one, 5).canonical == std::vector<Point>{{0, 0}});
  const std::vector<Point> pair{{2, 3}, {4, 1}};
  CHECK(orbit_canonical(pair, 5).canonical == std::vector<Point>{{0, 0}, {0, 1}});
  CHECK_THROWS_AS(orbit_canonical(std::vector<Point>{}, 5), std::invalid_argument);
  CHECK_THROWS_AS(orbit_canonical(pair, 25, 10), std::length_error);
}

TEST_CASE("orbit_canonical equals the brute-force least image") {
  std::mt19937_64 rng(5);
  for (Int n : {2, 3, 4, 5, 6}) {
    for (int t = 0; t < 40; ++t) {
      const auto pts = random_points(n, 2 + t % 4, rng);
      CHECK(orbit_canonical(pts, n).canonical == brute_canonical(pts, n));
    }
  }
}

TEST_CASE("canonical form is stable and idempotent") {
  std::mt19937_64 rng(6);
  for (Int n = 2; n <= 12; ++n) {
    for (int t = 0; t < 30; ++t) {
      const auto pts = random_points(n, 2 + t % 5, rng);
      const auto key = orbit_canonical(pts, n);
      const auto img = zcap::apply(random_map(n, rng), std::span<const Point>(pts));
      CHECK(orbit_canonical(img, n) == key);
      CHECK(orbit_canonical(key.canonical, n) == key);
      const auto cf = canonical_form(pts, n);
      auto mapped = zcap::apply(cf.map, std::span<const Point>(pts));
      std::sort(mapped.begin(), mapped.end());
      CHECK(mapped == key.canonical);
    }
  }
}

TEST_CASE("find_mapping") {
  std::mt19937_64 rng(7);
  for (Int n : {7, 9, 12}) {
    const auto pts = random_points(n, 4, rng);
    const AffineMap g = random_map(n, rng);
    auto img = zcap::apply(g, std::span<const Point>(pts));
    const auto m = find_mapping(pts, img, n);
    REQUIRE(m.has_value());
    auto got = zcap::apply(*m, std::span<const Point>(pts));
    std::sort(got.begin(), got.end());
    std::sort(img.begin(), img.end());
    CHECK(got == img);
  }
  // a collinear triple and a triangle are not equivalent
  const std::vector<Point> line{{0, 0}, {1, 0}, {2, 0}}, tri{{0, 0}, {1, 0}, {0, 1}};
  CHECK_FALSE(find_mapping(line, tri, 7).has_value());
}

TEST_CASE("104 orbits of three neighbour pairs in Z_25") {
  // c1 = (0,0), c3 = (1,0), c5 = (0,1) and c2, c4, c6 in the respective
  // neighbourhoods; only 6-sets that are caps count.
  const Int n = 25;
  const Point c[3] = {{0, 0}, {1, 0}, {0, 1}};
  std::vector<Point> nb[3];
  for (int k = 0; k < 3; ++k)
    for (Int x = 0; x < 5; ++x)
      for (Int y = 0; y < 5; ++y)
        if (x || y) nb[k].push_back({c[k].u + 5 * x, c[k].v + 5 * y});
  std::set<OrbitKey> orbits;
  for (const auto& a : nb[0])
    for (const auto& b : nb[1])
      for (const auto& d : nb[2]) {
        const std::vector<Point> s{c[0], a, c[1], b, c[2], d};
        if (is_cap(s, n)) orbits.insert(orbit_canonical(s, n));
      }
  CHECK(orbits.size() == 104);
}

TEST_CASE("wlog_cuts basics") {
  CHECK(wlog_cuts({}, {}, 5).empty());
  const std::vector<Point> origin{{0, 0}};
  const auto cuts = wlog_cuts({}, origin, 5);
  REQUIRE(cuts.size() == 1);
  CHECK(cuts[0] == CutDescriptor::fix_one({0, 0}));
  CHECK_THROWS_AS(wlog_cuts(origin, origin, 5), std::invalid_argument);
}

TEST_CASE("wlog_cuts witnesses for n = 14") {
  const Int n = 14;
  const std::vector<Point> out{{0, 0}}, in{{1, 0}};
  const auto cuts = wlog_cuts(out, in, n);
  int fix_zero = 0;
  for (const auto& c : cuts) {
    if (c.kind != CutKind::FixZero || c.points[0] == Point{0, 0}) continue;
    ++fix_zero;
    const std::vector<Point> from{c.points[0], in[0]}, to{out[0], in[0]};
    const auto g = find_mapping(from, to, n);
    REQUIRE(g.has_value());
    auto img = zcap::apply(*g, std::span<const Point>(from));
    std::sort(img.begin(), img.end());
    auto want = to;
    std::sort(want.begin(), want.end());
    CHECK(img == want);
    CHECK(is_automorphism(*g, n));
  }
  CHECK(fix_zero > 0);
}

TEST_CASE("wlog_cuts are sound") {
  // Every derived cut excludes only caps that are equivalent to caps
  // containing a refuted point, so optima never exceed the refuted optimum.
  for (Int n : {5, 6, 7}) {
    const std::vector<Point> in{{0, 0}, {1, 0}};
    const std::vector<Point> out{{0, 1}, {2, 3}};
    int refuted = 0;
    for (const auto& a : out) {
      auto s = in;
      s.push_back(a);
      refuted = std::max(refuted, max_cap_containing(n, s));
    }
    for (const auto& c : wlog_cuts(out, in, n)) {
      if (c.kind == CutKind::FixZero) {
        auto s = in;
        s.push_back(c.points[0]);
        CHECK(max_cap_containing(n, s) <= refuted);
      } else if (c.kind == CutKind::PairExclusion) {
        auto s = in;
        s.push_back(c.points[0]);
        s.push_back(c.points[1]);
        if (!is_cap(s, n)) continue;
        CHECK(max_cap_containing(n, s) <= refuted);
      }
    }
  }
}
