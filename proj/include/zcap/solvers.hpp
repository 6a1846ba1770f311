#pragma once

// Exact solvers for the maximum cap size m2, the minimum complete cap size
// n2 and the permutation cap size sigma of Z_n^2.

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "zcap/cuts.hpp"
#include "zcap/ring.hpp"

namespace zcap {

enum class CapVariant { Plain, Permutation };

// A point set with no three collinear points; permutation caps additionally
// have at most one point per row and per column.
class Cap {
 public:
  // Throws std::invalid_argument if the points do not form a cap of the
  // requested variant (or are out of range / repeated).
  Cap(Int n, std::vector<Point> points, CapVariant variant = CapVariant::Plain);

  Int modulus() const { return n_; }
  const std::vector<Point>& points() const { return points_; }  // sorted
  CapVariant variant() const { return variant_; }
  std::size_t size() const { return points_.size(); }

 private:
  Int n_;
  std::vector<Point> points_;
  CapVariant variant_;
};

bool is_cap(std::span<const Point> points, Int n);
bool is_permutation_set(std::span<const Point> points);
bool is_complete(const Cap& cap);
std::vector<Point> extendable_points(const Cap& cap);

// Adds uniformly random extendable points until the cap is complete.
Cap greedy_complete(const Cap& cap, std::uint64_t seed);

// min(n * m2(Z_m^2), m2(Z_n^2) * m) for coprime n, m > 1.
Int coprime_upper_bound_m2(Int n, Int m, Int m2n, Int m2m);

// Lower bound max(4, ceil(sqrt(2p) + 1/2)) and upper bound max(4, p + 1) on
// n2(Z_n^2), p the least prime divisor of n > 1.
Int n2_lower_bound(Int n);
Int n2_upper_bound(Int n);

enum class Problem { M2, N2, Sigma };
enum class SolveStatus { Optimal, Bounded, Timeout };

std::string to_string(Problem p);
std::string to_string(SolveStatus s);
Problem parse_problem(const std::string& name);

struct SearchOptions {
  std::optional<double> time_limit;  // seconds
  bool use_symmetry = true;
  int thread_count = 1;
  // Restrict to caps containing forced_in and avoiding forced_out. Symmetry
  // breaking is only applied when both lists and `cuts` are empty.
  std::vector<Point> forced_in;
  std::vector<Point> forced_out;
  std::vector<CutDescriptor> cuts;

  void validate(Int n) const;
};

struct SolveResult {
  Problem problem = Problem::M2;
  Int n = 0;
  Int lo = 0;  // value when lo == hi
  Int hi = 0;
  SolveStatus status = SolveStatus::Optimal;
  std::optional<Cap> certificate;
  std::uint64_t nodes = 0;
  double elapsed_seconds = 0.0;

  bool exact() const { return lo == hi; }
  // "12" or "18-24"
  std::string value_string() const;
};

SolveResult max_cap(Int n, const SearchOptions& opts = {});
SolveResult sigma_cap(Int n, const SearchOptions& opts = {});
SolveResult min_complete_cap(Int n, const SearchOptions& opts = {});
SolveResult solve(Problem problem, Int n, const SearchOptions& opts = {});

// Largest modulus the solvers accept (n^2 points must fit the bitsets).
inline constexpr Int kMaxSolverModulus = 32;

}  // namespace zcap
