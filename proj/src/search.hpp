#pragma once

// Bitset depth-first search shared by the m2, n2 and sigma solvers.
//
// A search runs over a list of cases. Each case fixes some points in the cap,
// forbids others and may carry symmetry rules; the union of the cases covers
// every cap up to the symmetry group in use. Cases run independently (possibly
// on several threads) and the result is assembled from the case outcomes in
// case order, so it does not depend on scheduling.

#include <array>
#include <atomic>
#include <bit>
#include <chrono>
#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "zcap/ring.hpp"
#include "zcap/symmetry.hpp"

namespace zcap::detail {

template <int W>
struct Bits {
  std::array<std::uint64_t, W> w{};

  void set(int i) { w[i >> 6] |= std::uint64_t{1} << (i & 63); }
  void reset(int i) { w[i >> 6] &= ~(std::uint64_t{1} << (i & 63)); }
  bool test(int i) const { return (w[i >> 6] >> (i & 63)) & 1U; }
  bool any() const {
    for (auto x : w)
      if (x) return true;
    return false;
  }
  int count() const {
    int c = 0;
    for (auto x : w) c += std::popcount(x);
    return c;
  }
  int first() const {
    for (int k = 0; k < W; ++k)
      if (w[k]) return k * 64 + std::countr_zero(w[k]);
    return -1;
  }
  void andnot(const Bits& o) {
    for (int k = 0; k < W; ++k) w[k] &= ~o.w[k];
  }
  Bits& operator|=(const Bits& o) {
    for (int k = 0; k < W; ++k) w[k] |= o.w[k];
    return *this;
  }
  static int count_and(const Bits& a, const Bits& b) {
    int c = 0;
    for (int k = 0; k < W; ++k) c += std::popcount(a.w[k] & b.w[k]);
    return c;
  }
  template <class F>
  void for_each(F&& f) const {
    for (int k = 0; k < W; ++k) {
      std::uint64_t x = w[k];
      while (x) {
        f(k * 64 + std::countr_zero(x));
        x &= x - 1;
      }
    }
  }
};

struct CaseSpec {
  std::vector<int> fixed_in;
  std::vector<int> fixed_out;
  std::vector<std::pair<int, int>> pair_exclusions;
  // Indexed by difference vector (u*n+v): pairs whose difference is marked
  // may not both be in the cap.
  std::vector<char> forbidden_difference;
  // When >= 0: for every ordered pair (P,Q) of cap points with content(Q-P)=1
  // and every further cap point R, the class of R relative to (P,Q) must be
  // at least this value.
  int min_triple_class = -1;
};

enum class Mode { Maximize, CompleteExact };

// Immutable tables for one modulus and one line capacity profile.
struct Geometry {
  int n = 0;
  int points = 0;
  const LineIndex* index = nullptr;
  std::vector<std::uint8_t> capacity;  // per line
  std::vector<int> content_of;         // per difference vector
  std::vector<Matrix2> to_axis;        // per difference vector of content 1
  std::vector<int> triple_class;       // per point, class relative to ((0,0),(1,0))
  std::vector<int> lines_of_point;     // points * classes, copy of index data

  int diff(int to, int from) const {
    const int du = (to / n - from / n + n) % n;
    const int dv = (to % n - from % n + n) % n;
    return du * n + dv;
  }
  // Class of point r relative to the ordered content-1 pair (p, q).
  int class_relative(int p, int q, int r) const {
    const Matrix2& m = to_axis[diff(q, p)];
    const int d = diff(r, p);
    const Int du = d / n, dv = d % n;
    const Int x = mod(m.a * du + m.b * dv, n), y = mod(m.c * du + m.d * dv, n);
    return triple_class[x * n + y];
  }
};

Geometry make_geometry(int n, bool permutation);

// Ordered third-point classes relative to ((0,0),(1,0)): the class of (x,y)
// is (gcd(y,n), x mod gcd(y,n)). Returns the representatives (x, e) ordered
// by (e, x), skipping y = 0, and fills `class_of_point`.
std::vector<Point> triple_class_representatives(int n, std::vector<int>* class_of_point);

struct Control {
  std::atomic<int> shared_best{-1};
  std::atomic<bool> timed_out{false};
  std::atomic<int> cancel_above{1 << 30};
  std::atomic<std::uint64_t> nodes{0};
  std::optional<std::chrono::steady_clock::time_point> deadline;

  void cancel_from(int case_index) {
    int cur = cancel_above.load();
    while (case_index < cur && !cancel_above.compare_exchange_weak(cur, case_index)) {
    }
  }
};

struct CaseOutcome {
  bool finished = false;
  bool feasible = true;        // fixed points were consistent
  int root_bound = 0;          // bound on the cap size within this case
  std::vector<int> best;       // best (Maximize) or found (CompleteExact) cap
  std::uint64_t nodes = 0;
};

struct RunRequest {
  Mode mode = Mode::Maximize;
  int threshold = -1;  // Maximize: record caps strictly larger than this
  int upper = 1 << 30; // Maximize: stop a case once this size is reached
  int target = 0;      // CompleteExact: exact cap size
  int threads = 1;
};

// Runs all cases and returns one outcome per case (same order).
std::vector<CaseOutcome> run_cases(const Geometry& geo, const std::vector<CaseSpec>& cases, const RunRequest& req,
                                   Control& control);

}  // namespace zcap::detail
