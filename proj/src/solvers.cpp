#include "zcap/solvers.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <map>
#include <mutex>
#include <random>
#include <stdexcept>

#include "search.hpp"

namespace zcap {

namespace {

void check_modulus(Int n) {
  if (n < 1) throw std::invalid_argument("modulus must be positive");
  if (n > kMaxSolverModulus) throw std::invalid_argument("solvers support n <= " + std::to_string(kMaxSolverModulus));
}

bool in_range(const Point& p, Int n) { return p.u >= 0 && p.u < n && p.v >= 0 && p.v < n; }

// Per-line occupancy of a point set.
std::vector<int> line_counts(std::span<const Point> points, const LineIndex& idx) {
  std::vector<int> count(static_cast<std::size_t>(idx.line_count()), 0);
  for (const auto& p : points)
    for (int l : idx.lines_through(idx.index(p))) ++count[l];
  return count;
}

bool is_row_or_column(const LineIndex& idx, int line) {
  const Point& t = idx.direction(idx.line_class(line));
  const Int one = 1 % idx.modulus();
  return (t.u == one && t.v == 0) || (t.u == 0 && t.v == one);
}

std::vector<Point> extendable(std::span<const Point> points, Int n, CapVariant variant) {
  const LineIndex& idx = line_index(static_cast<int>(n));
  const auto count = line_counts(points, idx);
  std::vector<char> in(static_cast<std::size_t>(idx.point_count()), 0);
  for (const auto& p : points) in[idx.index(p)] = 1;
  std::vector<Point> out;
  for (int q = 0; q < idx.point_count(); ++q) {
    if (in[q]) continue;
    bool ok = true;
    for (int l : idx.lines_through(q)) {
      const int limit = (variant == CapVariant::Permutation && is_row_or_column(idx, l)) ? 1 : 2;
      if (count[l] >= limit) {
        ok = false;
        break;
      }
    }
    if (ok) out.push_back(idx.point(q));
  }
  return out;
}

Cap cap_from_indices(Int n, const std::vector<int>& idxs, CapVariant variant) {
  std::vector<Point> pts;
  for (int i : idxs) pts.push_back({i / n, i % n});
  return Cap(n, std::move(pts), variant);
}

std::vector<Int> proper_divisors(Int n) {
  std::vector<Int> out;
  for (Int d = 1; d < n; ++d)
    if (n % d == 0) out.push_back(d);
  return out;
}

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

bool constrained(const SearchOptions& opts) {
  return !opts.forced_in.empty() || !opts.forced_out.empty() || !opts.cuts.empty();
}

// The user-supplied constraints as a single search case. Returns the
// cardinality lower bound l (or -1) through `min_card`.
detail::CaseSpec constraint_case(Int n, const SearchOptions& opts, Int* min_card) {
  detail::CaseSpec spec;
  *min_card = -1;
  auto index = [n](const Point& p) { return static_cast<int>(p.u * n + p.v); };
  for (const auto& p : opts.forced_in) spec.fixed_in.push_back(index(p));
  for (const auto& p : opts.forced_out) spec.fixed_out.push_back(index(p));
  for (const auto& c : opts.cuts) {
    switch (c.kind) {
      case CutKind::FixOne: spec.fixed_in.push_back(index(c.points.at(0))); break;
      case CutKind::FixZero: spec.fixed_out.push_back(index(c.points.at(0))); break;
      case CutKind::PairExclusion:
        spec.pair_exclusions.push_back({index(c.points.at(0)), index(c.points.at(1))});
        break;
      case CutKind::CardinalityLowerBound: *min_card = std::max(*min_card, c.bound); break;
    }
  }
  std::sort(spec.fixed_in.begin(), spec.fixed_in.end());
  spec.fixed_in.erase(std::unique(spec.fixed_in.begin(), spec.fixed_in.end()), spec.fixed_in.end());
  for (int p : spec.fixed_out)
    if (std::binary_search(spec.fixed_in.begin(), spec.fixed_in.end(), p))
      throw std::invalid_argument("conflicting constraints: a point is both forced in and forced out");
  return spec;
}

// Cases covering all caps with at least three points up to the affine group.
// First every cap with a pair of content 1, split by the least class of a
// third point relative to such a pair; then caps whose least pair content is
// d > 1, anchored at (0,0), (d,0).
std::vector<detail::CaseSpec> affine_cases(int n) {
  std::vector<detail::CaseSpec> cases;
  const auto reps = detail::triple_class_representatives(n, nullptr);
  for (std::size_t c = 0; c < reps.size(); ++c) {
    detail::CaseSpec spec;
    spec.fixed_in = {0, 1 * n + 0, static_cast<int>(reps[c].u * n + reps[c].v)};
    spec.min_triple_class = static_cast<int>(c);
    cases.push_back(std::move(spec));
  }
  const auto divisors = proper_divisors(n);
  for (std::size_t k = 1; k < divisors.size(); ++k) {
    const Int d = divisors[k];
    detail::CaseSpec spec;
    spec.fixed_in = {0, static_cast<int>(d * n)};
    spec.forbidden_difference.assign(static_cast<std::size_t>(n) * n, 0);
    for (int v = 0; v < n * n; ++v) {
      const Int c = content(v / n, v % n, n);
      if (c < d) spec.forbidden_difference[v] = 1;
    }
    spec.forbidden_difference[0] = 0;
    cases.push_back(std::move(spec));
  }
  return cases;
}

// Cases for permutation caps with at least two points, up to translations,
// diagonal unit matrices and the axis swap. The class of a difference (x,y)
// is the sorted pair {gcd(x,n), gcd(y,n)}; cases are ordered by the least
// class occurring in the cap.
std::vector<detail::CaseSpec> permutation_cases(int n) {
  std::vector<std::pair<Int, Int>> classes;
  for (Int g : proper_divisors(n))
    for (Int h : proper_divisors(n))
      if (g <= h) classes.push_back({g, h});
  std::sort(classes.begin(), classes.end());
  std::vector<detail::CaseSpec> cases;
  for (std::size_t k = 0; k < classes.size(); ++k) {
    detail::CaseSpec spec;
    spec.fixed_in = {0, static_cast<int>(classes[k].first * n + classes[k].second)};
    spec.forbidden_difference.assign(static_cast<std::size_t>(n) * n, 0);
    for (int v = 0; v < n * n; ++v) {
      const Int x = v / n, y = v % n;
      if (x == 0 || y == 0) continue;
      std::pair<Int, Int> c{gcd(x, n), gcd(y, n)};
      if (c.first > c.second) std::swap(c.first, c.second);
      if (c < classes[k]) spec.forbidden_difference[v] = 1;
    }
    cases.push_back(std::move(spec));
  }
  return cases;
}

Cap best_greedy(Int n, CapVariant variant, bool maximize, int rounds) {
  std::optional<Cap> best;
  const Cap empty(n, {}, variant);
  for (int seed = 1; seed <= rounds; ++seed) {
    Cap c = greedy_complete(empty, static_cast<std::uint64_t>(seed));
    if (!best || (maximize ? c.size() > best->size() : c.size() < best->size())) best = std::move(c);
  }
  return *best;
}

struct Assembled {
  bool all_finished = true;
  int best_size = -1;
  std::vector<int> best;
  int open_bound = -1;  // largest root bound among unfinished cases
};

Assembled assemble(const std::vector<detail::CaseOutcome>& outcomes) {
  Assembled a;
  for (const auto& o : outcomes) {
    if (!o.finished) {
      a.all_finished = false;
      a.open_bound = std::max(a.open_bound, o.root_bound);
    }
    if (!o.best.empty() && static_cast<int>(o.best.size()) > a.best_size) {
      a.best_size = static_cast<int>(o.best.size());
      a.best = o.best;
    }
  }
  return a;
}

std::mutex m2_memo_mu;
std::map<Int, Int> m2_memo;

// Upper bound on m2 from the parallel classes and coprime splittings.
Int m2_upper_bound(Int n, const SearchOptions& opts) {
  Int bound = 2 * n;
  for (Int a = 2; a * a <= n; ++a) {
    const Int b = n / a;
    if (n % a != 0 || gcd(a, b) != 1) continue;
    SearchOptions sub;
    sub.time_limit = opts.time_limit;
    sub.thread_count = opts.thread_count;
    Int ma, mb;
    {
      const SolveResult ra = max_cap(a, sub);
      const SolveResult rb = max_cap(b, sub);
      ma = ra.hi;
      mb = rb.hi;
    }
    bound = std::min(bound, coprime_upper_bound_m2(a, b, ma, mb));
  }
  return bound;
}

SolveResult maximize(Problem problem, Int n, const SearchOptions& opts) {
  const auto start = Clock::now();
  const bool permutation = problem == Problem::Sigma;
  const CapVariant variant = permutation ? CapVariant::Permutation : CapVariant::Plain;
  SolveResult result;
  result.problem = problem;
  result.n = n;

  detail::Control control;
  if (opts.time_limit) control.deadline = start + std::chrono::duration_cast<Clock::duration>(std::chrono::duration<double>(*opts.time_limit));

  Int upper = permutation ? n : 2 * n;
  std::vector<detail::CaseSpec> cases;
  std::optional<Cap> incumbent;
  Int min_card = -1;
  if (constrained(opts)) {
    cases.push_back(constraint_case(n, opts, &min_card));
    if (!permutation) upper = std::min(upper, m2_upper_bound(n, opts));
  } else {
    incumbent = best_greedy(n, variant, true, 32);
    if (!permutation) {
      std::lock_guard<std::mutex> lock(m2_memo_mu);
      if (auto it = m2_memo.find(n); it != m2_memo.end()) upper = it->second;
    }
    if (!permutation && upper == 2 * n) upper = std::min(upper, m2_upper_bound(n, opts));
    if (opts.use_symmetry) {
      cases = permutation ? permutation_cases(static_cast<int>(n)) : affine_cases(static_cast<int>(n));
    } else {
      cases.push_back({});
    }
  }

  const int threshold = incumbent ? static_cast<int>(incumbent->size()) : static_cast<int>(min_card);
  std::vector<detail::CaseOutcome> outcomes;
  if (!incumbent || static_cast<Int>(incumbent->size()) < upper) {
    const detail::Geometry geo = detail::make_geometry(static_cast<int>(n), permutation);
    detail::RunRequest req;
    req.mode = detail::Mode::Maximize;
    req.threshold = threshold;
    req.upper = static_cast<int>(upper);
    req.threads = opts.thread_count;
    outcomes = detail::run_cases(geo, cases, req, control);
  }
  const Assembled a = assemble(outcomes);

  if (a.best_size > threshold) incumbent = cap_from_indices(n, a.best, variant);
  const Int found = incumbent ? static_cast<Int>(incumbent->size()) : 0;
  result.certificate = incumbent;
  result.lo = found;
  if (a.all_finished || (incumbent && found >= upper)) {
    // Every case was exhausted (or the upper bound was attained).
    result.hi = incumbent ? found : std::max<Int>(min_card, 0);
    if (!incumbent) result.lo = 0;
    result.status = incumbent ? SolveStatus::Optimal : SolveStatus::Bounded;
  } else {
    result.hi = std::min<Int>(upper, std::max<Int>(found, a.open_bound));
    result.status = control.timed_out ? SolveStatus::Timeout : SolveStatus::Bounded;
  }
  if (!permutation && !constrained(opts) && result.exact()) {
    std::lock_guard<std::mutex> lock(m2_memo_mu);
    m2_memo[n] = result.lo;
  }
  result.nodes = control.nodes.load();
  result.elapsed_seconds = seconds_since(start);
  return result;
}

}  // namespace

Cap::Cap(Int n, std::vector<Point> points, CapVariant variant) : n_(n), points_(std::move(points)), variant_(variant) {
  check_modulus(n);
  for (const auto& p : points_)
    if (!in_range(p, n)) throw std::invalid_argument("point " + to_string(p) + " out of range");
  std::sort(points_.begin(), points_.end());
  if (std::adjacent_find(points_.begin(), points_.end()) != points_.end())
    throw std::invalid_argument("cap contains a repeated point");
  if (!is_cap(points_, n)) throw std::invalid_argument("point set contains three collinear points");
  if (variant == CapVariant::Permutation && !is_permutation_set(points_))
    throw std::invalid_argument("point set repeats a row or a column");
}

bool is_cap(std::span<const Point> points, Int n) {
  check_modulus(n);
  for (const auto& p : points)
    if (!in_range(p, n)) throw std::invalid_argument("point " + to_string(p) + " out of range");
  std::vector<Point> pts(points.begin(), points.end());
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  const LineIndex& idx = line_index(static_cast<int>(n));
  for (int c : line_counts(pts, idx))
    if (c > 2) return false;
  return true;
}

bool is_permutation_set(std::span<const Point> points) {
  std::vector<Int> us, vs;
  for (const auto& p : points) {
    us.push_back(p.u);
    vs.push_back(p.v);
  }
  std::sort(us.begin(), us.end());
  std::sort(vs.begin(), vs.end());
  return std::adjacent_find(us.begin(), us.end()) == us.end() && std::adjacent_find(vs.begin(), vs.end()) == vs.end();
}

bool is_complete(const Cap& cap) { return extendable_points(cap).empty(); }

std::vector<Point> extendable_points(const Cap& cap) {
  return extendable(cap.points(), cap.modulus(), cap.variant());
}

Cap greedy_complete(const Cap& cap, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<Point> pts = cap.points();
  for (;;) {
    const auto ext = extendable(pts, cap.modulus(), cap.variant());
    if (ext.empty()) break;
    std::uniform_int_distribution<std::size_t> pick(0, ext.size() - 1);
    pts.push_back(ext[pick(rng)]);
  }
  return Cap(cap.modulus(), std::move(pts), cap.variant());
}

Int coprime_upper_bound_m2(Int n, Int m, Int m2n, Int m2m) {
  if (n <= 1 || m <= 1) throw std::invalid_argument("coprime_upper_bound_m2: n, m must exceed 1");
  if (gcd(n, m) != 1) throw std::invalid_argument("coprime_upper_bound_m2: n and m must be coprime");
  return std::min(n * m2m, m2n * m);
}

Int n2_lower_bound(Int n) {
  if (n < 2) throw std::invalid_argument("n2 bounds need n > 1");
  const Int p = factorize(n).smallest_prime();
  const Int k = static_cast<Int>(std::ceil(std::sqrt(2.0 * static_cast<double>(p)) + 0.5 - 1e-12));
  return std::max<Int>(4, k);
}

Int n2_upper_bound(Int n) {
  if (n < 2) throw std::invalid_argument("n2 bounds need n > 1");
  return std::max<Int>(4, factorize(n).smallest_prime() + 1);
}

std::string to_string(Problem p) {
  switch (p) {
    case Problem::M2: return "m2";
    case Problem::N2: return "n2";
    case Problem::Sigma: return "sigma";
  }
  return "unknown";
}

std::string to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::Optimal: return "optimal";
    case SolveStatus::Bounded: return "bounded";
    case SolveStatus::Timeout: return "timeout";
  }
  return "unknown";
}

Problem parse_problem(const std::string& name) {
  if (name == "m2") return Problem::M2;
  if (name == "n2") return Problem::N2;
  if (name == "sigma") return Problem::Sigma;
  throw std::invalid_argument("unknown problem '" + name + "' (expected m2, n2 or sigma)");
}

void SearchOptions::validate(Int n) const {
  if (thread_count < 1) throw std::invalid_argument("thread_count must be at least 1");
  if (time_limit && *time_limit < 0) throw std::invalid_argument("time limit must be non-negative");
  auto check = [n](const Point& p) {
    if (!in_range(p, n)) throw std::invalid_argument("constraint point " + to_string(p) + " out of range");
  };
  for (const auto& p : forced_in) check(p);
  for (const auto& p : forced_out) check(p);
  for (const auto& c : cuts)
    for (const auto& p : c.points) check(p);
}

std::string SolveResult::value_string() const {
  if (lo == hi) return std::to_string(lo);
  return std::to_string(lo) + "-" + std::to_string(hi);
}

SolveResult max_cap(Int n, const SearchOptions& opts) {
  check_modulus(n);
  if (n < 2) throw std::invalid_argument("max_cap needs n >= 2");
  opts.validate(n);
  return maximize(Problem::M2, n, opts);
}

SolveResult sigma_cap(Int n, const SearchOptions& opts) {
  check_modulus(n);
  opts.validate(n);
  if (n == 1) {
    SolveResult r;
    r.problem = Problem::Sigma;
    r.n = 1;
    r.lo = r.hi = 1;
    r.certificate = Cap(1, {Point{0, 0}}, CapVariant::Permutation);
    return r;
  }
  return maximize(Problem::Sigma, n, opts);
}

SolveResult min_complete_cap(Int n, const SearchOptions& opts) {
  check_modulus(n);
  if (n < 2) throw std::invalid_argument("min_complete_cap needs n >= 2");
  opts.validate(n);
  const auto start = Clock::now();
  SolveResult result;
  result.problem = Problem::N2;
  result.n = n;

  detail::Control control;
  if (opts.time_limit) control.deadline = start + std::chrono::duration_cast<Clock::duration>(std::chrono::duration<double>(*opts.time_limit));

  std::vector<detail::CaseSpec> cases;
  Int lo = n2_lower_bound(n);
  Int hi = 2 * n;  // n2 <= m2 <= 2n
  if (constrained(opts)) {
    Int min_card = -1;
    cases.push_back(constraint_case(n, opts, &min_card));
    lo = std::max(lo, min_card + 1);
  } else {
    Cap greedy = best_greedy(n, CapVariant::Plain, false, 64);
    hi = static_cast<Int>(greedy.size());
    result.certificate = std::move(greedy);
    if (opts.use_symmetry)
      cases = affine_cases(static_cast<int>(n));
    else
      cases.push_back({});
  }

  const detail::Geometry geo = detail::make_geometry(static_cast<int>(n), false);
  bool timed_out = false;
  for (Int k = lo; k < hi; ++k) {
    detail::RunRequest req;
    req.mode = detail::Mode::CompleteExact;
    req.target = static_cast<int>(k);
    req.threads = opts.thread_count;
    control.cancel_above = 1 << 30;
    const auto outcomes = detail::run_cases(geo, cases, req, control);
    // The first case (in order) holding a complete cap of size k decides.
    bool found = false;
    bool open = false;
    for (const auto& o : outcomes) {
      if (!o.best.empty()) {
        result.certificate = cap_from_indices(n, o.best, CapVariant::Plain);
        found = true;
        break;
      }
      if (!o.finished) open = true;
    }
    if (found) {
      hi = k;
      break;
    }
    if (open || control.timed_out) {
      timed_out = true;
      break;
    }
    lo = k + 1;
  }
  if (!result.certificate) hi = std::max(hi, lo);
  // on a timeout the certificate can be larger than the known bound
  if (!constrained(opts)) hi = std::min(hi, std::max(lo, n2_upper_bound(n)));
  result.lo = lo;
  result.hi = hi;
  result.status = lo == hi ? SolveStatus::Optimal : (timed_out ? SolveStatus::Timeout : SolveStatus::Bounded);
  result.nodes = control.nodes.load();
  result.elapsed_seconds = seconds_since(start);
  return result;
}

SolveResult solve(Problem problem, Int n, const SearchOptions& opts) {
  switch (problem) {
    case Problem::M2: return max_cap(n, opts);
    case Problem::N2: return min_complete_cap(n, opts);
    case Problem::Sigma: return sigma_cap(n, opts);
  }
  throw std::invalid_argument("unknown problem");
}

}  // namespace zcap
