#pragma once

#include <cstddef>
#include <vector>

namespace rldp {

/// Discrete convexity check over consecutive collinear triples of a grid:
/// for x_mid = lam * x_a + (1 - lam) * x_b the value must satisfy
/// f(x_mid) <= lam * f(x_a) + (1 - lam) * f(x_b) + tolerance.
/// Triples with a non-finite value are skipped.
struct ConvexityCertificate {
  std::size_t triples_checked = 0;
  std::size_t violations = 0;
  double worst_excess = 0.0;

  bool ok() const { return violations == 0; }
};

ConvexityCertificate check_convexity(const std::vector<std::vector<double>>& points,
                                     const std::vector<double>& values, double tolerance);

}  // namespace rldp
