#include "zcap/cap_io.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace zcap {

namespace {

bool parse_int(const std::string& token, Int& out) {
  if (token.empty()) return false;
  std::size_t pos = 0;
  try {
    out = std::stoll(token, &pos);
  } catch (const std::exception&) {
    return false;
  }
  return pos == token.size();
}

}  // namespace

CapFile parse_cap_file(std::istream& in) {
  CapFile file;
  bool have_header = false;
  std::set<Point> seen;
  std::string raw;
  int lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    if (!raw.empty() && raw.back() == '\r') raw.pop_back();
    const auto start = raw.find_first_not_of(" \t");
    if (start == std::string::npos || raw[start] == '#') continue;
    std::istringstream ls(raw);
    std::vector<std::string> tok;
    for (std::string t; ls >> t;) tok.push_back(t);
    if (!have_header) {
      Int n = 0;
      if (tok.size() != 2 || tok[0] != "n" || !parse_int(tok[1], n)) throw ParseError(lineno, "expected header 'n <modulus>'");
      if (n < 1 || n > kMaxModulus) throw ParseError(lineno, "modulus out of range");
      file.n = n;
      have_header = true;
      continue;
    }
    Point p;
    if (tok.size() != 2 || !parse_int(tok[0], p.u) || !parse_int(tok[1], p.v))
      throw ParseError(lineno, "expected '<u> <v>'");
    if (p.u < 0 || p.u >= file.n || p.v < 0 || p.v >= file.n)
      throw ParseError(lineno, "point " + to_string(p) + " out of range for n = " + std::to_string(file.n));
    if (!seen.insert(p).second) throw ParseError(lineno, "duplicate point " + to_string(p));
    file.points.push_back(p);
  }
  if (!have_header) throw ParseError(lineno, "missing header 'n <modulus>'");
  return file;
}

CapFile read_cap_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path.string() + "'");
  return parse_cap_file(in);
}

void write_cap_file(std::ostream& out, Int n, std::span<const Point> points) {
  out << "n " << n << '\n';
  for (const auto& p : points) out << p.u << ' ' << p.v << '\n';
}

nlohmann::json result_to_json(const SolveResult& result) {
  nlohmann::json j;
  j["problem"] = to_string(result.problem);
  j["n"] = result.n;
  if (result.exact())
    j["value"] = result.lo;
  else
    j["value"] = nlohmann::json::array({result.lo, result.hi});
  j["status"] = to_string(result.status);
  if (result.certificate) {
    auto cap = nlohmann::json::array();
    for (const auto& p : result.certificate->points()) cap.push_back({p.u, p.v});
    j["cap"] = cap;
  }
  j["nodes"] = result.nodes;
  j["elapsed_ms"] = static_cast<std::int64_t>(std::llround(result.elapsed_seconds * 1000.0));
  return j;
}

std::string render_grid(Int n, std::span<const Point> points) {
  std::set<Point> in(points.begin(), points.end());
  std::string out;
  for (Int v = n - 1; v >= 0; --v) {
    for (Int u = 0; u < n; ++u) {
      if (u) out += ' ';
      out += in.count({u, v}) ? "●" : ".";
    }
    out += '\n';
  }
  return out;
}

}  // namespace zcap
