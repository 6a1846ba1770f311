#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <set>

#include "oracles.hpp"
#include "zcap/cap_io.hpp"
#include "zcap/solvers.hpp"

using namespace zcap;

namespace {

std::vector<Point> cap20() { return read_cap_file(ZCAP_TEST_DATA "/cap20_n25.txt").points; }

void check_certificate(const SolveResult& r) {
  REQUIRE(r.certificate.has_value());
  const auto& pts = r.certificate->points();
  CHECK(is_cap(pts, r.n));
  if (r.problem == Problem::Sigma) CHECK(is_permutation_set(pts));
  if (r.problem == Problem::N2) {
    CHECK(is_complete(*r.certificate));
    if (r.exact())
      CHECK(static_cast<Int>(pts.size()) == r.hi);
    else
      CHECK(static_cast<Int>(pts.size()) >= r.hi);
  } else {
    CHECK(static_cast<Int>(pts.size()) == r.lo);
  }
}

}  // namespace

TEST_CASE("Cap construction") {
  CHECK(Cap(5, {{0, 0}, {1, 2}}).size() == 2);
  CHECK_THROWS_AS(Cap(3, {{0, 0}, {1, 1}, {2, 2}}), std::invalid_argument);
  CHECK_THROWS_AS(Cap(3, {{0, 0}, {0, 0}}), std::invalid_argument);
  CHECK_THROWS_AS(Cap(3, {{0, 3}}), std::invalid_argument);
  CHECK_THROWS_AS(Cap(5, {{0, 0}, {0, 1}}, CapVariant::Permutation), std::invalid_argument);
  const Cap c(5, {{3, 1}, {0, 0}});
  CHECK(c.points().front() == Point{0, 0});
}

TEST_CASE("is_cap examples") {
  CHECK(is_cap(cap20(), 25));
  CHECK(is_cap(std::vector<Point>{{0, 0}, {0, 1}, {1, 0}, {1, 1}}, 2));
  CHECK_FALSE(is_cap(std::vector<Point>{{0, 0}, {1, 1}, {2, 2}}, 3));
}

TEST_CASE("is_cap agrees with triple testing") {
  std::mt19937_64 rng(1);
  for (Int n : {4, 5, 6, 8, 9}) {
    const oracle::CollinearOracle col(n);
    std::uniform_int_distribution<Int> r(0, n - 1);
    for (int t = 0; t < 300; ++t) {
      std::set<Point> s;
      while (static_cast<int>(s.size()) < 3 + t % 6) s.insert({r(rng), r(rng)});
      const std::vector<Point> pts(s.begin(), s.end());
      CHECK(is_cap(pts, n) == oracle::naive_is_cap(pts, col));
    }
  }
}

TEST_CASE("completeness and extendable points") {
  CHECK_FALSE(is_complete(Cap(7, {})));
  CHECK(extendable_points(Cap(2, {{0, 0}, {0, 1}, {1, 0}, {1, 1}})).empty());
  CHECK(extendable_points(Cap(5, {{0, 0}})).size() == 24);
  const Int n = 8;
  const oracle::CollinearOracle col(n);
  const Cap c(n, {{0, 0}, {2, 4}});
  std::vector<Point> expected;
  for (Int u = 0; u < n; ++u)
    for (Int v = 0; v < n; ++v) {
      const Point z{u, v};
      if (z == Point{0, 0} || z == Point{2, 4}) continue;
      if (!col({0, 0}, {2, 4}, z)) expected.push_back(z);
    }
  CHECK(extendable_points(c) == expected);
  std::mt19937_64 rng(2);
  for (Int m : {5, 6, 7}) {
    const oracle::CollinearOracle cm(m);
    for (int seed = 0; seed < 20; ++seed) {
      const Cap g = greedy_complete(Cap(m, {}), seed);
      CHECK(is_complete(g));
      CHECK(oracle::naive_is_complete(g.points(), m, cm));
    }
  }
}

TEST_CASE("greedy completion") {
  const Cap full(2, {{0, 0}, {0, 1}, {1, 0}, {1, 1}});
  CHECK(greedy_complete(full, 1).points() == full.points());
  CHECK(greedy_complete(Cap(2, {}), 9).size() == 4);
  const Cap seeded = greedy_complete(Cap(7, {{0, 0}, {1, 3}}), 3);
  CHECK(std::binary_search(seeded.points().begin(), seeded.points().end(), Point{1, 3}));
  std::size_t smallest = 100;
  for (std::uint64_t seed = 0; seed < 1000; ++seed) smallest = std::min(smallest, greedy_complete(Cap(5, {}), seed).size());
  CHECK(smallest == 5);
  CHECK(greedy_complete(Cap(9, {}), 42).points() == greedy_complete(Cap(9, {}), 42).points());
}

TEST_CASE("coprime bound") {
  CHECK(coprime_upper_bound_m2(2, 3, 4, 4) == 8);
  CHECK(coprime_upper_bound_m2(3, 5, 4, 6) == 18);
  CHECK(coprime_upper_bound_m2(2, 7, 4, 8) == 16);
  CHECK_THROWS_AS(coprime_upper_bound_m2(2, 4, 4, 6), std::invalid_argument);
  CHECK_THROWS_AS(coprime_upper_bound_m2(1, 4, 1, 6), std::invalid_argument);
}

TEST_CASE("n2 bounds") {
  CHECK(n2_lower_bound(2) == 4);
  CHECK(n2_lower_bound(11) == 6);  // ceil(sqrt(22) + 1/2) = 6
  CHECK(n2_lower_bound(13) == 6);
  CHECK(n2_upper_bound(13) == 14);
  CHECK(n2_upper_bound(25) == 6);
  for (Int n = 2; n <= 60; ++n) {
    const Int p = factorize(n).smallest_prime();
    const Int lo = std::max<Int>(4, static_cast<Int>(std::ceil(std::sqrt(2.0 * p) + 0.5)));
    CHECK(n2_lower_bound(n) == lo);
    CHECK(n2_lower_bound(n) <= n2_upper_bound(n));
  }
}

TEST_CASE("names and options") {
  CHECK(parse_problem("sigma") == Problem::Sigma);
  CHECK_THROWS_AS(parse_problem("m3"), std::invalid_argument);
  CHECK(to_string(Problem::N2) == "n2");
  CHECK(to_string(SolveStatus::Timeout) == "timeout");
  SearchOptions o;
  o.thread_count = 0;
  CHECK_THROWS_AS(max_cap(5, o), std::invalid_argument);
  CHECK_THROWS_AS(max_cap(1), std::invalid_argument);
  CHECK_THROWS_AS(max_cap(kMaxSolverModulus + 1), std::invalid_argument);
  SolveResult r;
  r.lo = 18;
  r.hi = 24;
  CHECK(r.value_string() == "18-24");
}

TEST_CASE("small values against exhaustive enumeration") {
  for (Int n = 2; n <= 7; ++n) {
    const oracle::CollinearOracle col(n);
    const auto m2 = max_cap(n);
    const auto sg = sigma_cap(n);
    CHECK(m2.exact());
    CHECK(sg.exact());
    CHECK_MESSAGE(m2.lo == oracle::naive_max_cap(n, false, col), "n = " << n);
    CHECK_MESSAGE(sg.lo == oracle::naive_max_cap(n, true, col), "n = " << n);
    check_certificate(m2);
    check_certificate(sg);
    CHECK(is_complete(*m2.certificate));
    if (n <= 5) {
      const auto n2 = min_complete_cap(n);
      CHECK(n2.lo == oracle::naive_min_complete_cap(n, col));
      check_certificate(n2);
    }
  }
}

TEST_CASE("symmetry breaking does not change values") {
  SearchOptions plain;
  plain.use_symmetry = false;
  for (Int n = 2; n <= 8; ++n) {
    CHECK(max_cap(n).lo == max_cap(n, plain).lo);
    CHECK(sigma_cap(n).lo == sigma_cap(n, plain).lo);
    CHECK(min_complete_cap(n).lo == min_complete_cap(n, plain).lo);
  }
}

TEST_CASE("sanity relations") {
  for (Int n = 2; n <= 12; ++n) {
    const auto m2 = max_cap(n), sg = sigma_cap(n), n2 = min_complete_cap(n);
    REQUIRE(m2.exact());
    REQUIRE(sg.exact());
    REQUIRE(n2.exact());
    CHECK(sg.lo <= n);
    CHECK(n2.lo <= m2.lo);
    CHECK(n2.lo >= n2_lower_bound(n));
    CHECK(n2.lo <= n2_upper_bound(n));
    check_certificate(m2);
    check_certificate(sg);
    check_certificate(n2);
  }
}

TEST_CASE("forced points and cuts") {
  SearchOptions o;
  o.forced_in = {{0, 0}, {1, 0}};
  o.forced_out = {{0, 1}};
  const auto r = max_cap(7, o);
  REQUIRE(r.certificate.has_value());
  const auto& pts = r.certificate->points();
  CHECK(std::binary_search(pts.begin(), pts.end(), Point{0, 0}));
  CHECK(std::binary_search(pts.begin(), pts.end(), Point{1, 0}));
  CHECK_FALSE(std::binary_search(pts.begin(), pts.end(), Point{0, 1}));
  CHECK(r.lo == 8);

  // asking for more than the optimum leaves no certificate
  SearchOptions over;
  over.cuts = {CutDescriptor::cardinality_lower_bound(8)};
  const auto none = max_cap(7, over);
  CHECK_FALSE(none.certificate.has_value());
  CHECK(none.hi == 8);

  SearchOptions clash;
  clash.forced_in = {{0, 0}};
  clash.forced_out = {{0, 0}};
  CHECK_THROWS_AS(max_cap(5, clash), std::invalid_argument);

  SearchOptions pair;
  pair.cuts = {CutDescriptor::fix_one({0, 0}), CutDescriptor::pair_exclusion({1, 0}, {0, 1})};
  const auto rp = max_cap(5, pair);
  const auto& pp = rp.certificate->points();
  const bool both = std::binary_search(pp.begin(), pp.end(), Point{1, 0}) &&
                    std::binary_search(pp.begin(), pp.end(), Point{0, 1});
  CHECK_FALSE(both);
  CHECK(rp.lo == 6);
}

TEST_CASE("timeouts give intervals") {
  SearchOptions o;
  o.time_limit = 0.0;
  const auto r = max_cap(24, o);
  CHECK(r.lo <= r.hi);
  CHECK(r.hi <= 48);
  check_certificate(r);
  if (!r.exact()) CHECK(r.status != SolveStatus::Optimal);
  const auto s = min_complete_cap(29, o);
  CHECK(s.lo <= s.hi);
  CHECK(s.hi <= 30);
  CHECK(min_complete_cap(25, o).hi <= 6);
  check_certificate(s);
}

TEST_CASE("deterministic across thread counts") {
  for (Int n : {8, 9, 10}) {
    std::vector<std::vector<Point>> certs;
    for (int t : {1, 2, 4}) {
      SearchOptions o;
      o.thread_count = t;
      for (const auto& r : {max_cap(n, o), sigma_cap(n, o), min_complete_cap(n, o)}) {
        REQUIRE(r.certificate.has_value());
        certs.push_back(r.certificate->points());
      }
    }
    for (std::size_t i = 3; i < certs.size(); ++i) CHECK(certs[i] == certs[i % 3]);
  }
}
