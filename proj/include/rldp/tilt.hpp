#pragma once

#include <span>
#include <vector>

#include "rldp/convexity.hpp"
#include "rldp/model.hpp"
#include "rldp/renewal_kernel.hpp"

namespace rldp {

enum class TiltStatus { converged, plus_infinity };

const char* to_string(TiltStatus s);

/// z(phi) with the bisection bracket that certifies it.
struct TiltResult {
  double value = 0.0;
  double lo = 0.0;
  double hi = 0.0;
  int iterations = 0;
  TiltStatus status = TiltStatus::converged;
};

/// a_s = e^{phi . f(s) + v(s)} p(s). On a model with Cauchy noise, phi must
/// vanish on the noise coordinate (z is +inf otherwise) and std::domain_error
/// is thrown.
LogWeightSequence tilted_weights(const RenewalModel& model, std::span<const double> phi);

/// z(phi) = inf{zeta : E[e^{phi(X1) + v(S1) - zeta S1} 1{S1 < inf}] <= 1}.
TiltResult z_of(const RenewalModel& model, std::span<const double> phi);
inline TiltResult z_of(const RenewalModel& model, double phi) {
  return z_of(model, std::span<const double>(&phi, 1));
}

/// ln A(zeta; phi) for bracket certificates.
double log_tilt_transform(const RenewalModel& model, std::span<const double> phi, double zeta);

struct ZGraph {
  std::vector<std::vector<double>> phi;
  std::vector<TiltResult> z;
  ConvexityCertificate convexity;
};

ZGraph z_graph(const RenewalModel& model, const std::vector<std::vector<double>>& grid,
               unsigned workers = 1);

}  // namespace rldp
