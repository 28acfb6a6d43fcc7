#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace rldp {

/// One side of an axis-aligned event. Endpoints may be infinite; each end is
/// closed unless flagged open.
struct Interval {
  double lo;
  double hi;
  bool lo_open = false;
  bool hi_open = false;

  static Interval closed(double lo, double hi) { return {lo, hi, false, false}; }
  static Interval everything();

  bool contains(double x) const;
  bool empty() const;
};

using Box = std::vector<Interval>;

bool box_contains(const Box& box, const std::vector<double>& point);
Box full_box(int dim);

/// Parses one interval per coordinate, coordinates separated by ';'.
/// Accepted forms: "a,b" (closed), "[a,b]", "(a,b)", "[a,b)", "(a,b]".
/// Endpoints accept "inf", "-inf".
Box parse_box(std::string_view text);
std::string to_string(const Box& box);

}  // namespace rldp
