#pragma once

#include <string>
#include <vector>

#include "zcap/ring.hpp"

namespace zcap {

enum class CutKind { FixZero, FixOne, PairExclusion, CardinalityLowerBound };

// A symmetry-breaking or case-differentiation constraint on the point
// variables. FixZero/FixOne carry one point, PairExclusion two, and
// CardinalityLowerBound carries the size l of a known cap (the cut asks for
// at least l+1 points).
struct CutDescriptor {
  CutKind kind = CutKind::FixZero;
  std::vector<Point> points;
  Int bound = 0;

  static CutDescriptor fix_zero(const Point& p) { return {CutKind::FixZero, {p}, 0}; }
  static CutDescriptor fix_one(const Point& p) { return {CutKind::FixOne, {p}, 0}; }
  static CutDescriptor pair_exclusion(const Point& a, const Point& b) { return {CutKind::PairExclusion, {a, b}, 0}; }
  static CutDescriptor cardinality_lower_bound(Int l) { return {CutKind::CardinalityLowerBound, {}, l}; }

  friend bool operator==(const CutDescriptor&, const CutDescriptor&) = default;
};

std::string to_string(CutKind kind);

}  // namespace zcap
