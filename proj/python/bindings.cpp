#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "zcap/cap_io.hpp"
#include "zcap/ilp.hpp"
#include "zcap/ring.hpp"
#include "zcap/solvers.hpp"
#include "zcap/symmetry.hpp"

namespace py = pybind11;
using namespace zcap;

namespace {

using PyPoint = std::pair<Int, Int>;

std::vector<Point> to_points(const std::vector<PyPoint>& pts) {
  std::vector<Point> out;
  out.reserve(pts.size());
  for (const auto& [u, v] : pts) out.push_back({u, v});
  return out;
}

std::vector<PyPoint> from_points(const std::vector<Point>& pts) {
  std::vector<PyPoint> out;
  out.reserve(pts.size());
  for (const auto& p : pts) out.push_back({p.u, p.v});
  return out;
}

CapVariant variant(bool permutation) { return permutation ? CapVariant::Permutation : CapVariant::Plain; }

CutKind parse_kind(const std::string& s) {
  if (s == "fix-zero") return CutKind::FixZero;
  if (s == "fix-one") return CutKind::FixOne;
  if (s == "pair-exclusion") return CutKind::PairExclusion;
  if (s == "cardinality-lower-bound") return CutKind::CardinalityLowerBound;
  throw std::invalid_argument("unknown cut kind '" + s + "'");
}

py::dict cut_to_dict(const CutDescriptor& c) {
  py::dict d;
  d["kind"] = to_string(c.kind);
  d["points"] = from_points(c.points);
  d["bound"] = c.bound;
  return d;
}

CutDescriptor cut_from_dict(const py::dict& d) {
  CutDescriptor c;
  c.kind = parse_kind(d["kind"].cast<std::string>());
  if (d.contains("points")) c.points = to_points(d["points"].cast<std::vector<PyPoint>>());
  if (d.contains("bound")) c.bound = d["bound"].cast<Int>();
  return c;
}

std::vector<CutDescriptor> cuts_from_list(const std::vector<py::dict>& cuts) {
  std::vector<CutDescriptor> out;
  for (const auto& d : cuts) out.push_back(cut_from_dict(d));
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Caps, lines and symmetry in Z_n x Z_n";

  py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);

  m.def("psi", &psi, py::arg("m"));
  m.def(
      "is_collinear",
      [](const std::vector<PyPoint>& pts, Int n) { return is_collinear(to_points(pts), factorize(n)); },
      py::arg("points"), py::arg("n"));
  m.def(
      "enumerate_lines",
      [](Int n) {
        std::vector<std::vector<PyPoint>> out;
        for (const auto& l : enumerate_lines(n)) out.push_back(from_points(l.points));
        return out;
      },
      py::arg("n"), "Point lists of all lines, in enumeration order.");
  m.def(
      "lines_through",
      [](PyPoint p, Int n) {
        std::vector<std::vector<PyPoint>> out;
        for (const auto& l : lines_through({p.first, p.second}, n)) out.push_back(from_points(l.points));
        return out;
      },
      py::arg("point"), py::arg("n"));

  m.def(
      "apply_affine",
      [](std::array<Int, 4> matrix, PyPoint shift, const std::vector<PyPoint>& pts, Int n) {
        const AffineMap g(n, {matrix[0], matrix[1], matrix[2], matrix[3]}, {shift.first, shift.second});
        return from_points(zcap::apply(g, std::span<const Point>(to_points(pts))));
      },
      py::arg("matrix"), py::arg("shift"), py::arg("points"), py::arg("n"),
      "Image of the points under x -> M x + shift; M given as (m11, m12, m21, m22).");
  m.def(
      "orbit_canonical",
      [](const std::vector<PyPoint>& pts, Int n) { return from_points(orbit_canonical(to_points(pts), n).canonical); },
      py::arg("points"), py::arg("n"));
  m.def(
      "wlog_cuts",
      [](const std::vector<PyPoint>& fixed_out, const std::vector<PyPoint>& fixed_in, Int n) {
        std::vector<py::dict> out;
        for (const auto& c : wlog_cuts(to_points(fixed_out), to_points(fixed_in), n)) out.push_back(cut_to_dict(c));
        return out;
      },
      py::arg("fixed_out"), py::arg("fixed_in"), py::arg("n"));

  m.def(
      "is_cap", [](const std::vector<PyPoint>& pts, Int n) { return is_cap(to_points(pts), n); }, py::arg("points"),
      py::arg("n"));
  m.def(
      "is_complete",
      [](const std::vector<PyPoint>& pts, Int n, bool permutation) {
        return is_complete(Cap(n, to_points(pts), variant(permutation)));
      },
      py::arg("points"), py::arg("n"), py::arg("permutation") = false);
  m.def(
      "extendable_points",
      [](const std::vector<PyPoint>& pts, Int n, bool permutation) {
        return from_points(extendable_points(Cap(n, to_points(pts), variant(permutation))));
      },
      py::arg("points"), py::arg("n"), py::arg("permutation") = false);
  m.def(
      "greedy_complete",
      [](const std::vector<PyPoint>& pts, Int n, std::uint64_t seed, bool permutation) {
        return from_points(greedy_complete(Cap(n, to_points(pts), variant(permutation)), seed).points());
      },
      py::arg("points"), py::arg("n"), py::arg("seed") = 0, py::arg("permutation") = false);

  m.def(
      "solve",
      [](const std::string& problem, Int n, std::optional<double> time_limit, int threads, bool use_symmetry,
         const std::vector<PyPoint>& forced_in, const std::vector<PyPoint>& forced_out,
         const std::vector<py::dict>& cuts) {
        SearchOptions o;
        o.time_limit = time_limit;
        o.thread_count = threads;
        o.use_symmetry = use_symmetry;
        o.forced_in = to_points(forced_in);
        o.forced_out = to_points(forced_out);
        o.cuts = cuts_from_list(cuts);
        const Problem p = parse_problem(problem);
        SolveResult r;
        {
          py::gil_scoped_release release;
          r = solve(p, n, o);
        }
        return py::module_::import("json").attr("loads")(result_to_json(r).dump());
      },
      py::arg("problem"), py::arg("n"), py::arg("time_limit") = py::none(), py::arg("threads") = 1,
      py::arg("use_symmetry") = true, py::arg("forced_in") = std::vector<PyPoint>{},
      py::arg("forced_out") = std::vector<PyPoint>{}, py::arg("cuts") = std::vector<py::dict>{},
      "Solve m2, n2 or sigma; returns the result record as a dict.");

  m.def(
      "lp_text",
      [](const std::string& problem, Int n, const std::vector<py::dict>& cuts) {
        return to_lp_string(apply_cuts(build_model(parse_problem(problem), n), cuts_from_list(cuts)));
      },
      py::arg("problem"), py::arg("n"), py::arg("cuts") = std::vector<py::dict>{});
  m.def(
      "write_lp",
      [](const std::string& problem, Int n, const std::filesystem::path& path, const std::vector<py::dict>& cuts) {
        write_lp(apply_cuts(build_model(parse_problem(problem), n), cuts_from_list(cuts)), path);
      },
      py::arg("problem"), py::arg("n"), py::arg("path"), py::arg("cuts") = std::vector<py::dict>{});
  m.def(
      "model_size",
      [](const std::string& problem, Int n) {
        const auto model = build_model(parse_problem(problem), n);
        return std::make_pair(model.variables.size(), model.constraints.size());
      },
      py::arg("problem"), py::arg("n"), "(variables, constraints) of the integer program.");
  m.def(
      "evaluate_points",
      [](const std::string& problem, Int n, const std::vector<PyPoint>& pts) {
        const auto model = build_model(parse_problem(problem), n);
        const auto e = evaluate_assignment(model, assignment_from_points(model, to_points(pts)));
        return std::make_pair(e.feasible, e.objective);
      },
      py::arg("problem"), py::arg("n"), py::arg("points"),
      "(feasible, objective) of the integer program at the point set.");

  m.def(
      "read_cap_file",
      [](const std::filesystem::path& path) {
        const auto f = read_cap_file(path);
        return std::make_pair(f.n, from_points(f.points));
      },
      py::arg("path"));
}
