#include "cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <map>
#include <optional>
#include <sstream>

#include "zcap/cap_io.hpp"
#include "zcap/ilp.hpp"
#include "zcap/ring.hpp"
#include "zcap/solvers.hpp"

namespace zcap::cli {

namespace {

constexpr int kOk = 0;
constexpr int kNegative = 1;
constexpr int kUsage = 2;
constexpr int kIo = 3;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

Point parse_point(const std::string& token) {
  const auto comma = token.find(',');
  if (comma == std::string::npos) throw UsageError("malformed point '" + token + "' (expected u,v)");
  Point p;
  try {
    std::size_t a = 0, b = 0;
    const std::string us = token.substr(0, comma), vs = token.substr(comma + 1);
    p.u = std::stoll(us, &a);
    p.v = std::stoll(vs, &b);
    if (a != us.size() || b != vs.size()) throw std::invalid_argument("trailing characters");
  } catch (const std::exception&) {
    throw UsageError("malformed point '" + token + "' (expected u,v)");
  }
  return p;
}

Point parse_point_in_range(const std::string& token, Int n) {
  const Point p = parse_point(token);
  if (p.u < 0 || p.u >= n || p.v < 0 || p.v >= n)
    throw UsageError("point " + to_string(p) + " out of range for n = " + std::to_string(n));
  return p;
}

std::string format_points(const std::vector<Point>& pts) {
  std::string s;
  for (const auto& p : pts) {
    if (!s.empty()) s += ' ';
    s += to_string(p);
  }
  return s;
}

int default_threads() {
  if (const char* env = std::getenv("ZCAP_THREADS")) {
    try {
      const int t = std::stoi(env);
      if (t >= 1) return t;
    } catch (const std::exception&) {
    }
  }
  return 1;
}

// Values and ranges published for small n. An entry {lo, hi} with lo == hi is
// an exact value.
using Range = std::pair<Int, Int>;

const std::map<Int, Range>& expected_m2() {
  static const std::map<Int, Range> t = {
      {2, {4, 4}},   {3, {4, 4}},   {4, {6, 6}},   {5, {6, 6}},   {6, {8, 8}},   {7, {8, 8}},
      {8, {8, 8}},   {9, {9, 9}},   {10, {12, 12}}, {11, {12, 12}}, {12, {12, 12}}, {14, {12, 12}},
      {15, {15, 15}}, {16, {14, 14}}, {18, {17, 17}}, {20, {18, 18}}, {21, {18, 18}}, {22, {18, 24}},
      {24, {18, 24}},
  };
  return t;
}

const std::map<Int, Range>& expected_sigma() {
  static const std::map<Int, Range> t = {
      {1, {1, 1}},    {2, {2, 2}},    {3, {2, 2}},    {4, {4, 4}},    {5, {4, 4}},    {6, {6, 6}},
      {7, {6, 6}},    {8, {8, 8}},    {9, {6, 6}},    {10, {8, 8}},   {11, {10, 10}}, {12, {12, 12}},
      {13, {12, 12}}, {14, {12, 12}}, {15, {13, 13}}, {16, {13, 13}}, {17, {16, 16}}, {18, {13, 13}},
      {19, {18, 18}}, {20, {16, 16}}, {21, {16, 17}}, {22, {16, 17}}, {23, {22, 22}}, {24, {20, 22}},
      {25, {19, 22}}, {26, {18, 24}}, {27, {18, 25}}, {28, {22, 27}}, {29, {28, 28}}, {30, {22, 29}},
  };
  return t;
}

std::optional<Range> expected_n2(Int n) {
  static const std::map<Int, Range> t = {
      {2, {4, 4}},   {3, {4, 4}},   {5, {5, 5}},    {7, {6, 6}},    {11, {7, 7}},   {13, {8, 8}},
      {17, {8, 10}}, {19, {8, 11}}, {23, {8, 12}},  {25, {4, 6}},   {29, {11, 15}}, {31, {9, 16}},
      {37, {10, 17}}, {41, {10, 20}}, {43, {10, 21}}, {47, {11, 22}},
  };
  if (auto it = t.find(n); it != t.end()) return it->second;
  if (n > 1 && (n % 2 == 0 || n % 3 == 0)) return Range{4, 4};
  return std::nullopt;
}

std::string range_string(const Range& r) {
  return r.first == r.second ? std::to_string(r.first) : std::to_string(r.first) + "-" + std::to_string(r.second);
}

bool consistent(const SolveResult& r, const Range& expected) {
  return r.lo <= expected.second && expected.first <= r.hi;
}

int cmd_collinear(Int n, const std::vector<std::string>& tokens, std::ostream& out) {
  if (n < 1 || n > kMaxModulus) throw UsageError("modulus out of range");
  if (tokens.size() < 3) throw UsageError("collinear needs at least three points");
  std::vector<Point> pts;
  for (const auto& t : tokens) {
    const Point p = parse_point(t);
    pts.push_back({mod(p.u, n), mod(p.v, n)});
  }
  const bool c = is_collinear(pts, factorize(n));
  out << (c ? "collinear" : "not collinear") << '\n';
  return c ? kOk : kNegative;
}

int cmd_lines(Int n, bool count, const std::optional<std::string>& through, std::ostream& out) {
  if (n < 1 || n > kMaxModulus) throw UsageError("modulus out of range");
  if (count && !through) {
    out << psi(n * n) << '\n';
    return kOk;
  }
  if (n > 4096) throw UsageError("line listing is limited to n <= 4096");
  std::vector<Line> lines;
  if (through) {
    lines = lines_through(parse_point_in_range(*through, n), n);
  } else {
    lines = enumerate_lines(n);
  }
  if (count) {
    out << lines.size() << '\n';
    return kOk;
  }
  for (const auto& l : lines)
    out << to_string(l.anchor) << ' ' << to_string(l.direction) << ' ' << format_points(l.points) << '\n';
  return kOk;
}

struct SolveArgs {
  std::string problem;
  Int n = 0;
  double time_limit = 60.0;
  int threads = 1;
  bool no_symmetry = false;
  bool json = false;
  bool grid = false;
  std::string cap_out;
};

int cmd_solve(const SolveArgs& a, std::ostream& out) {
  Problem problem;
  try {
    problem = parse_problem(a.problem);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  SearchOptions opts;
  if (a.time_limit > 0) opts.time_limit = a.time_limit;
  opts.thread_count = a.threads;
  opts.use_symmetry = !a.no_symmetry;
  SolveResult r;
  try {
    r = solve(problem, a.n, opts);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  if (a.json) {
    out << result_to_json(r).dump() << '\n';
  } else {
    out << "problem: " << to_string(r.problem) << '\n';
    out << "n: " << r.n << '\n';
    out << "value: " << r.value_string() << '\n';
    out << "status: " << to_string(r.status) << '\n';
    out << "nodes: " << r.nodes << '\n';
    out << "elapsed: " << std::fixed << std::setprecision(3) << r.elapsed_seconds << " s\n";
    if (r.certificate) out << "cap: " << format_points(r.certificate->points()) << '\n';
  }
  if (a.grid && r.certificate && !a.json) out << render_grid(r.n, r.certificate->points());
  if (!a.cap_out.empty() && r.certificate) {
    std::ofstream f(a.cap_out);
    if (!f) throw std::ios_base::failure("cannot open '" + a.cap_out + "' for writing");
    write_cap_file(f, r.n, r.certificate->points());
    if (!f) throw std::ios_base::failure("failed writing '" + a.cap_out + "'");
  }
  return kOk;
}

int cmd_verify(const std::string& path, bool complete, bool permutation, bool grid, std::ostream& out,
               std::ostream& err) {
  CapFile file;
  try {
    file = read_cap_file(path);
  } catch (const ParseError& e) {
    err << path << ": " << e.what() << '\n';
    return kUsage;
  } catch (const std::runtime_error& e) {
    err << e.what() << '\n';
    return kUsage;
  }
  if (complete && file.n > kMaxSolverModulus) {
    err << "completeness check is limited to n <= " << kMaxSolverModulus << '\n';
    return kUsage;
  }
  std::vector<std::string> failures;
  if (!is_cap(file.points, file.n)) failures.push_back("three collinear points");
  if (permutation && !is_permutation_set(file.points)) failures.push_back("a row or column holds two points");
  if (failures.empty() && complete) {
    const Cap cap(file.n, file.points, permutation ? CapVariant::Permutation : CapVariant::Plain);
    const auto ext = extendable_points(cap);
    if (!ext.empty()) failures.push_back("not complete, " + to_string(ext.front()) + " can be added");
  }
  if (grid) out << render_grid(file.n, file.points);
  if (failures.empty()) {
    out << "pass: " << file.points.size() << " points, n = " << file.n << '\n';
    return kOk;
  }
  out << "fail:";
  for (std::size_t i = 0; i < failures.size(); ++i) out << (i ? "; " : " ") << failures[i];
  out << '\n';
  return kNegative;
}

struct ExportArgs {
  std::string problem;
  Int n = 0;
  std::string output;
  std::vector<std::string> fix_in, fix_out;
  std::optional<Int> min_card;
};

int cmd_export(const ExportArgs& a, std::ostream& out) {
  Problem problem;
  try {
    problem = parse_problem(a.problem);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  if (a.n < 2 || a.n > 4096) throw UsageError("export needs 2 <= n <= 4096");
  std::vector<CutDescriptor> cuts;
  for (const auto& t : a.fix_in) cuts.push_back(CutDescriptor::fix_one(parse_point_in_range(t, a.n)));
  for (const auto& t : a.fix_out) cuts.push_back(CutDescriptor::fix_zero(parse_point_in_range(t, a.n)));
  if (a.min_card) {
    if (*a.min_card < 0) throw UsageError("--min-card must be non-negative");
    cuts.push_back(CutDescriptor::cardinality_lower_bound(*a.min_card));
  }
  IlpModel model;
  try {
    model = apply_cuts(build_model(problem, a.n), cuts);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  const std::string path = a.output.empty() ? a.problem + "_" + std::to_string(a.n) + ".lp" : a.output;
  write_lp(model, std::filesystem::path(path));
  out << "wrote " << path << ": " << model.variables.size() << " variables, " << model.constraints.size()
      << " constraints\n";
  return kOk;
}

int cmd_tables(Int max_n, double time_limit, int threads, std::ostream& out) {
  if (max_n < 1 || max_n > kMaxSolverModulus) throw UsageError("--max-n must be in 1.." + std::to_string(kMaxSolverModulus));
  SearchOptions opts;
  if (time_limit > 0) opts.time_limit = time_limit;
  opts.thread_count = threads;
  bool mismatch = false;
  auto cell = [&](const std::optional<SolveResult>& r, const std::optional<Range>& expected) {
    if (!r) return std::string("-");
    std::string s = r->value_string();
    if (expected) {
      if (!consistent(*r, *expected)) {
        s += " (expected " + range_string(*expected) + ")";
        mismatch = true;
      }
    }
    return s;
  };
  out << std::left << std::setw(4) << "n" << std::setw(22) << "m2" << std::setw(22) << "n2"
      << "sigma" << '\n';
  for (Int n = 1; n <= max_n; ++n) {
    std::optional<SolveResult> m2, n2, sg;
    if (n >= 2) {
      m2 = max_cap(n, opts);
      n2 = min_complete_cap(n, opts);
    }
    sg = sigma_cap(n, opts);
    std::optional<Range> em, es;
    if (auto it = expected_m2().find(n); it != expected_m2().end()) em = it->second;
    if (auto it = expected_sigma().find(n); it != expected_sigma().end()) es = it->second;
    out << std::setw(4) << n << std::setw(22) << cell(m2, em) << std::setw(22) << cell(n2, expected_n2(n))
        << cell(sg, es) << '\n';
  }
  out << (mismatch ? "mismatch against published values\n" : "all values agree with published values\n");
  return mismatch ? kNegative : kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Caps and lines in Z_n x Z_n", "zcap"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all");

  Int n = 0;
  std::vector<std::string> tokens;
  auto* collinear = app.add_subcommand("collinear", "Test whether points lie on a common line");
  collinear->add_option("n", n, "Modulus")->required();
  collinear->add_option("points", tokens, "Points as u,v");

  bool count = false;
  std::optional<std::string> through;
  auto* lines = app.add_subcommand("lines", "List or count lines");
  lines->add_option("n", n, "Modulus")->required();
  lines->add_flag("--count", count, "Print the number of lines only");
  lines->add_option("--through", through, "Only lines through the point u,v");

  SolveArgs sa;
  sa.threads = default_threads();
  auto* solve_cmd = app.add_subcommand("solve", "Compute m2, n2 or sigma");
  solve_cmd->add_option("problem", sa.problem, "m2, n2 or sigma")->required();
  solve_cmd->add_option("n", sa.n, "Modulus")->required();
  solve_cmd->add_option("--time-limit", sa.time_limit, "Seconds, 0 for no limit (default 60)");
  solve_cmd->add_option("--threads", sa.threads, "Worker threads (default $ZCAP_THREADS or 1)")->check(CLI::PositiveNumber);
  solve_cmd->add_flag("--no-symmetry", sa.no_symmetry, "Disable symmetry breaking");
  solve_cmd->add_flag("--json", sa.json, "Print a JSON result record");
  solve_cmd->add_flag("--grid", sa.grid, "Draw the certificate");
  solve_cmd->add_option("--cap-out", sa.cap_out, "Write the certificate as a cap file");

  std::string path;
  bool complete = false, permutation = false, vgrid = false;
  auto* verify = app.add_subcommand("verify", "Check a cap file");
  verify->add_option("file", path, "Cap file")->required();
  verify->add_flag("--complete", complete, "Also require completeness");
  verify->add_flag("--permutation", permutation, "Also require one point per row and column");
  verify->add_flag("--grid", vgrid, "Draw the point set");

  ExportArgs ea;
  auto* exp = app.add_subcommand("export", "Write the integer program in LP format");
  exp->add_option("problem", ea.problem, "m2, n2 or sigma")->required();
  exp->add_option("n", ea.n, "Modulus")->required();
  exp->add_option("-o,--output", ea.output, "Output path (default <problem>_<n>.lp)");
  exp->add_option("--fix-in", ea.fix_in, "Point u,v forced into the cap");
  exp->add_option("--fix-out", ea.fix_out, "Point u,v forced out of the cap");
  exp->add_option("--min-card", ea.min_card, "Require more than this many points");

  Int max_n = 10;
  double table_limit = 60.0;
  int table_threads = default_threads();
  auto* tables = app.add_subcommand("tables", "Recompute the value tables");
  tables->add_option("--max-n", max_n, "Largest modulus (default 10)");
  tables->add_option("--time-limit", table_limit, "Seconds per instance (default 60)");
  tables->add_option("--threads", table_threads, "Worker threads")->check(CLI::PositiveNumber);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    app.exit(e, out, err);
    return kOk;
  } catch (const CLI::CallForAllHelp& e) {
    app.exit(e, out, err);
    return kOk;
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kUsage;
  }

  try {
    if (*collinear) return cmd_collinear(n, tokens, out);
    if (*lines) return cmd_lines(n, count, through, out);
    if (*solve_cmd) return cmd_solve(sa, out);
    if (*verify) return cmd_verify(path, complete, permutation, vgrid, out, err);
    if (*exp) return cmd_export(ea, out);
    if (*tables) return cmd_tables(max_n, table_limit, table_threads, out);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::ios_base::failure& e) {
    err << "error: " << e.what() << '\n';
    return kIo;
  } catch (const std::runtime_error& e) {
    err << "error: " << e.what() << '\n';
    return kIo;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }
  return kUsage;
}

}  // namespace zcap::cli
