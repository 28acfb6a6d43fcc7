#include "rldp/convexity.hpp"

#include <algorithm>
#include <cmath>

namespace rldp {
namespace {

// Returns lam in (0,1) with mid = lam * a + (1 - lam) * b, or a negative
// number when the three points are not collinear with mid strictly inside.
double interpolation_weight(const std::vector<double>& a, const std::vector<double>& mid,
                            const std::vector<double>& b) {
  double num = 0.0, den = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) {
    num += (b[j] - mid[j]) * (b[j] - a[j]);
    den += (b[j] - a[j]) * (b[j] - a[j]);
  }
  if (den == 0.0) return -1.0;
  const double lam = num / den;
  if (!(lam > 0.0 && lam < 1.0)) return -1.0;
  for (std::size_t j = 0; j < a.size(); ++j) {
    const double proj = lam * a[j] + (1.0 - lam) * b[j];
    if (std::abs(proj - mid[j]) > 1e-12 * std::max(1.0, std::abs(mid[j]))) return -1.0;
  }
  return lam;
}

}  // namespace

ConvexityCertificate check_convexity(const std::vector<std::vector<double>>& points,
                                     const std::vector<double>& values, double tolerance) {
  ConvexityCertificate cert;
  for (std::size_t i = 0; i + 2 < points.size(); ++i) {
    const double fa = values[i], fm = values[i + 1], fb = values[i + 2];
    if (!std::isfinite(fa) || !std::isfinite(fm) || !std::isfinite(fb)) continue;
    const double lam = interpolation_weight(points[i], points[i + 1], points[i + 2]);
    if (lam < 0.0) continue;
    ++cert.triples_checked;
    const double excess = fm - (lam * fa + (1.0 - lam) * fb);
    if (excess > tolerance) {
      ++cert.violations;
      cert.worst_excess = std::max(cert.worst_excess, excess);
    }
  }
  return cert;
}

}  // namespace rldp
