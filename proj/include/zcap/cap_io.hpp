#pragma once

// Text cap files and JSON result records.
//
// Cap file:   n <modulus>
//             <u> <v>        one point per line, 0-based residues
// Lines starting with '#' and blank lines are ignored.

#include <filesystem>
#include <istream>
#include <ostream>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "zcap/ring.hpp"
#include "zcap/solvers.hpp"

namespace zcap {

struct CapFile {
  Int n = 0;
  std::vector<Point> points;  // in file order
};

class ParseError : public std::runtime_error {
 public:
  ParseError(int line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

CapFile parse_cap_file(std::istream& in);
// Throws std::runtime_error if the file cannot be opened, ParseError otherwise.
CapFile read_cap_file(const std::filesystem::path& path);
void write_cap_file(std::ostream& out, Int n, std::span<const Point> points);

// Keys: problem, n, value (integer or [lo, hi]), status, cap (list of [u, v],
// present iff there is a certificate), nodes, elapsed_ms.
nlohmann::json result_to_json(const SolveResult& result);

// Rows from v = n-1 down to 0, '.' for empty cells and a filled circle for
// points.
std::string render_grid(Int n, std::span<const Point> points);

}  // namespace zcap
