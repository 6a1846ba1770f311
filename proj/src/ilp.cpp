#include "zcap/ilp.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace zcap {

namespace {

constexpr std::size_t kLineWidth = 78;

void check_point(const Point& p, Int n) {
  if (p.u < 0 || p.u >= n || p.v < 0 || p.v >= n)
    throw std::invalid_argument("cut point " + to_string(p) + " out of range for n = " + std::to_string(n));
}

std::vector<Term> all_points(Int n) {
  std::vector<Term> terms;
  for (int i = 0; i < n * n; ++i) terms.push_back({i, 1});
  return terms;
}

const char* relation_text(Relation r) {
  switch (r) {
    case Relation::LessEqual: return "<=";
    case Relation::GreaterEqual: return ">=";
    case Relation::Equal: return "=";
  }
  return "?";
}

// Writes "name: t1 + t2 ..." folding long rows onto indented continuation lines.
void write_expression(std::ostream& out, const std::string& label, const std::vector<Term>& terms,
                      const std::vector<std::string>& names) {
  std::string line = " " + label + ":";
  bool first = true;
  for (const auto& t : terms) {
    std::string piece;
    if (first)
      piece = t.coef < 0 ? " -" : " ";
    else
      piece = t.coef < 0 ? " - " : " + ";
    first = false;
    const Int mag = t.coef < 0 ? -t.coef : t.coef;
    if (mag != 1) piece += std::to_string(mag) + " ";
    piece += names[t.var];
    if (line.size() + piece.size() > kLineWidth) {
      out << line << '\n';
      line = "  ";
    }
    line += piece;
  }
  if (first) line += " 0";
  out << line;
}

}  // namespace

std::string point_variable_name(const Point& p) { return "x_" + std::to_string(p.u) + "_" + std::to_string(p.v); }

int IlpModel::variable_index(const std::string& name) const {
  for (std::size_t i = 0; i < variables.size(); ++i)
    if (variables[i] == name) return static_cast<int>(i);
  return -1;
}

IlpModel build_model(Problem problem, Int n) {
  if (n < 2) throw std::invalid_argument("build_model needs n >= 2");
  const LineIndex& idx = line_index(static_cast<int>(n));
  IlpModel m;
  m.problem = problem;
  m.n = n;
  for (Int u = 0; u < n; ++u)
    for (Int v = 0; v < n; ++v) m.variables.push_back(point_variable_name({u, v}));

  auto line_terms = [&](int line) {
    std::vector<Term> terms;
    for (int p : idx.points_on(line)) terms.push_back({p, 1});
    std::sort(terms.begin(), terms.end(), [](const Term& a, const Term& b) { return a.var < b.var; });
    return terms;
  };

  m.sense = problem == Problem::N2 ? Sense::Minimize : Sense::Maximize;
  m.objective = all_points(n);
  for (int l = 0; l < idx.line_count(); ++l)
    m.constraints.push_back({"capL" + std::to_string(l), line_terms(l), Relation::LessEqual, 2});

  if (problem == Problem::Sigma) {
    for (Int i = 0; i < n; ++i) {
      std::vector<Term> terms;
      for (Int j = 0; j < n; ++j) terms.push_back({static_cast<int>(i * n + j), 1});
      m.constraints.push_back({"row" + std::to_string(i), std::move(terms), Relation::LessEqual, 1});
    }
    for (Int j = 0; j < n; ++j) {
      std::vector<Term> terms;
      for (Int i = 0; i < n; ++i) terms.push_back({static_cast<int>(i * n + j), 1});
      m.constraints.push_back({"col" + std::to_string(j), std::move(terms), Relation::LessEqual, 1});
    }
  }

  if (problem == Problem::N2) {
    const int y0 = static_cast<int>(m.variables.size());
    for (int l = 0; l < idx.line_count(); ++l) m.variables.push_back("y_L" + std::to_string(l));
    for (int l = 0; l < idx.line_count(); ++l) {
      auto terms = line_terms(l);
      terms.push_back({y0 + l, -2});
      m.constraints.push_back({"pairL" + std::to_string(l), std::move(terms), Relation::GreaterEqual, 0});
    }
    for (int p = 0; p < idx.point_count(); ++p) {
      std::vector<Term> terms{{p, 1}};
      for (int l : idx.lines_through(p)) terms.push_back({y0 + l, 1});
      const Point q = idx.point(p);
      m.constraints.push_back({"cover_" + std::to_string(q.u) + "_" + std::to_string(q.v), std::move(terms),
                               Relation::GreaterEqual, 1});
    }
  }
  return m;
}

IlpModel apply_cuts(IlpModel model, std::span<const CutDescriptor> cuts) {
  for (const auto& cut : cuts)
    for (const auto& p : cut.points) check_point(p, model.n);
  int exclusions = 0, cardinality = 0;
  for (const auto& c : model.constraints) {
    if (c.name.rfind("excl", 0) == 0) ++exclusions;
    if (c.name.rfind("card", 0) == 0) ++cardinality;
  }
  for (const auto& cut : cuts) {
    switch (cut.kind) {
      case CutKind::FixZero:
      case CutKind::FixOne: {
        if (cut.points.size() != 1) throw std::invalid_argument("fix cut needs exactly one point");
        const int var = model.point_variable(cut.points[0]);
        const int value = cut.kind == CutKind::FixOne ? 1 : 0;
        auto [it, inserted] = model.fixed.try_emplace(var, value);
        if (!inserted) {
          if (it->second != value)
            throw std::invalid_argument("conflicting cuts: " + model.variables[var] + " fixed to both 0 and 1");
          break;
        }
        model.constraints.push_back({"fix" + std::to_string(value) + "_" + model.variables[var].substr(2),
                                     {{var, 1}}, Relation::Equal, value});
        break;
      }
      case CutKind::PairExclusion: {
        if (cut.points.size() != 2) throw std::invalid_argument("pair exclusion needs exactly two points");
        int a = model.point_variable(cut.points[0]), b = model.point_variable(cut.points[1]);
        if (a == b) throw std::invalid_argument("pair exclusion needs two distinct points");
        if (a > b) std::swap(a, b);
        model.constraints.push_back({"excl" + std::to_string(exclusions++), {{a, 1}, {b, 1}}, Relation::LessEqual, 1});
        break;
      }
      case CutKind::CardinalityLowerBound:
        if (cut.bound < 0) throw std::invalid_argument("cardinality bound must be non-negative");
        model.constraints.push_back(
            {"card" + std::to_string(cardinality++), all_points(model.n), Relation::GreaterEqual, cut.bound + 1});
        break;
    }
  }
  return model;
}

void write_lp(const IlpModel& model, std::ostream& out) {
  out << "\\ " << to_string(model.problem) << " n=" << model.n << "\n";
  out << (model.sense == Sense::Maximize ? "Maximize" : "Minimize") << "\n";
  write_expression(out, "obj", model.objective, model.variables);
  out << "\nSubject To\n";
  for (const auto& c : model.constraints) {
    write_expression(out, c.name, c.terms, model.variables);
    out << ' ' << relation_text(c.relation) << ' ' << c.rhs << '\n';
  }
  out << "Binaries\n";
  std::string line;
  for (const auto& v : model.variables) {
    if (!line.empty() && line.size() + v.size() + 1 > kLineWidth) {
      out << line << '\n';
      line.clear();
    }
    line += ' ' + v;
  }
  if (!line.empty()) out << line << '\n';
  out << "End\n";
}

void write_lp(const IlpModel& model, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
  write_lp(model, out);
  out.flush();
  if (!out) throw std::runtime_error("failed writing '" + path.string() + "'");
}

std::string to_lp_string(const IlpModel& model) {
  std::ostringstream out;
  write_lp(model, out);
  return out.str();
}

Evaluation evaluate_assignment(const IlpModel& model, const std::map<std::string, int>& assignment) {
  std::vector<int> value(model.variables.size());
  for (std::size_t i = 0; i < model.variables.size(); ++i) {
    auto it = assignment.find(model.variables[i]);
    if (it == assignment.end()) throw std::invalid_argument("assignment misses variable " + model.variables[i]);
    if (it->second != 0 && it->second != 1)
      throw std::invalid_argument("variable " + model.variables[i] + " must be 0 or 1");
    value[i] = it->second;
  }
  Evaluation e;
  for (const auto& t : model.objective) e.objective += t.coef * value[t.var];
  for (const auto& c : model.constraints) {
    Int lhs = 0;
    for (const auto& t : c.terms) lhs += t.coef * value[t.var];
    const bool ok = c.relation == Relation::LessEqual      ? lhs <= c.rhs
                    : c.relation == Relation::GreaterEqual ? lhs >= c.rhs
                                                           : lhs == c.rhs;
    if (!ok) {
      e.feasible = false;
      e.violated.push_back(c.name);
    }
  }
  return e;
}

std::map<std::string, int> assignment_from_points(const IlpModel& model, std::span<const Point> points) {
  std::map<std::string, int> a;
  for (const auto& v : model.variables) a[v] = 0;
  for (const auto& p : points) {
    check_point(p, model.n);
    a[point_variable_name(p)] = 1;
  }
  if (model.problem == Problem::N2) {
    const LineIndex& idx = line_index(static_cast<int>(model.n));
    std::vector<int> count(static_cast<std::size_t>(idx.line_count()), 0);
    std::vector<Point> pts(points.begin(), points.end());
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    for (const auto& p : pts)
      for (int l : idx.lines_through(idx.index(p))) ++count[l];
    for (int l = 0; l < idx.line_count(); ++l)
      if (count[l] >= 2) a["y_L" + std::to_string(l)] = 1;
  }
  return a;
}

}  // namespace zcap
