#include "rldp/box.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <fmt/format.h>

#include "rldp/logmath.hpp"

namespace rldp {
namespace {

// Endpoint comparisons absorb rounding in k*h/t.
double slack(double x) { return 1e-12 * std::max(1.0, std::abs(x)); }

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t");
  return std::string(s.substr(b, e - b + 1));
}

double parse_endpoint(const std::string& s) {
  std::size_t used = 0;
  double x = 0.0;
  try {
    x = std::stod(s, &used);
  } catch (const std::exception&) {
    throw std::invalid_argument("bad interval endpoint '" + s + "'");
  }
  if (used != s.size()) throw std::invalid_argument("bad interval endpoint '" + s + "'");
  return x;
}

Interval parse_interval(std::string_view text) {
  std::string s = trim(text);
  if (s.empty()) throw std::invalid_argument("empty interval");
  Interval iv{0.0, 0.0};
  if (s.front() == '[' || s.front() == '(') {
    iv.lo_open = s.front() == '(';
    s.erase(0, 1);
    if (s.empty() || (s.back() != ']' && s.back() != ')'))
      throw std::invalid_argument("unterminated interval '" + std::string(text) + "'");
    iv.hi_open = s.back() == ')';
    s.pop_back();
  }
  const auto comma = s.find(',');
  if (comma == std::string::npos)
    throw std::invalid_argument("interval '" + std::string(text) + "' needs two endpoints");
  iv.lo = parse_endpoint(trim(std::string_view(s).substr(0, comma)));
  iv.hi = parse_endpoint(trim(std::string_view(s).substr(comma + 1)));
  if (iv.lo > iv.hi)
    throw std::invalid_argument("interval '" + std::string(text) + "' has lo > hi");
  return iv;
}

}  // namespace

Interval Interval::everything() { return {kNegInf, kInf, false, false}; }

bool Interval::contains(double x) const {
  const bool above = std::isinf(lo) ? x >= lo
                     : lo_open      ? x > lo + slack(lo)
                                    : x >= lo - slack(lo);
  const bool below = std::isinf(hi) ? x <= hi
                     : hi_open      ? x < hi - slack(hi)
                                    : x <= hi + slack(hi);
  return above && below;
}

bool Interval::empty() const {
  if (lo > hi) return true;
  if (lo == hi) return lo_open || hi_open;
  return false;
}

bool box_contains(const Box& box, const std::vector<double>& point) {
  for (std::size_t j = 0; j < box.size(); ++j)
    if (!box[j].contains(point[j])) return false;
  return true;
}

Box full_box(int dim) { return Box(static_cast<std::size_t>(dim), Interval::everything()); }

Box parse_box(std::string_view text) {
  Box box;
  std::size_t start = 0;
  while (true) {
    const auto semi = text.find(';', start);
    box.push_back(parse_interval(text.substr(start, semi - start)));
    if (semi == std::string_view::npos) break;
    start = semi + 1;
  }
  return box;
}

std::string to_string(const Box& box) {
  std::string out;
  for (std::size_t j = 0; j < box.size(); ++j) {
    if (j) out += ';';
    out += fmt::format("{}{},{}{}", box[j].lo_open ? '(' : '[', box[j].lo, box[j].hi,
                       box[j].hi_open ? ')' : ']');
  }
  return out;
}

}  // namespace rldp
