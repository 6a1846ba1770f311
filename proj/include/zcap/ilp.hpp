#pragma once

// 0-1 integer programs for m2, sigma and n2, and an LP-format writer.
//
// Variables: x_i_j for the point (i,j) (0-based, row-major order), then, for
// n2 only, y_L<k> for the k-th line in enumerate_lines order.

#include <filesystem>
#include <map>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "zcap/cuts.hpp"
#include "zcap/ring.hpp"
#include "zcap/solvers.hpp"

namespace zcap {

enum class Sense { Maximize, Minimize };
enum class Relation { LessEqual, GreaterEqual, Equal };

struct Term {
  int var = 0;
  Int coef = 1;
  friend bool operator==(const Term&, const Term&) = default;
};

struct Constraint {
  std::string name;
  std::vector<Term> terms;
  Relation relation = Relation::LessEqual;
  Int rhs = 0;
};

struct IlpModel {
  Problem problem = Problem::M2;
  Int n = 0;
  Sense sense = Sense::Maximize;
  std::vector<std::string> variables;
  std::vector<Term> objective;
  std::vector<Constraint> constraints;
  // Variables fixed by cuts (variable index -> value).
  std::map<int, int> fixed;

  int point_variable(const Point& p) const { return static_cast<int>(p.u * n + p.v); }
  // -1 if there is no such variable.
  int variable_index(const std::string& name) const;
};

// Throws std::invalid_argument for n < 2 or n too large for line enumeration.
IlpModel build_model(Problem problem, Int n);

// Appends one constraint per cut. Throws std::invalid_argument on a point out
// of range or on a variable fixed to both 0 and 1.
IlpModel apply_cuts(IlpModel model, std::span<const CutDescriptor> cuts);

void write_lp(const IlpModel& model, std::ostream& out);
// Throws std::runtime_error naming the path when the file cannot be written.
void write_lp(const IlpModel& model, const std::filesystem::path& path);
std::string to_lp_string(const IlpModel& model);

struct Evaluation {
  bool feasible = true;
  Int objective = 0;
  std::vector<std::string> violated;  // names of violated constraints
};

// The assignment must give every model variable the value 0 or 1; extra keys
// are ignored. Throws std::invalid_argument otherwise.
Evaluation evaluate_assignment(const IlpModel& model, const std::map<std::string, int>& assignment);

// x from the point set; for n2 models y_L = 1 exactly on lines holding at
// least two of the points.
std::map<std::string, int> assignment_from_points(const IlpModel& model, std::span<const Point> points);

std::string point_variable_name(const Point& p);

}  // namespace zcap
