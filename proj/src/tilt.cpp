#include "rldp/tilt.hpp"

#include <cmath>
#include <stdexcept>

#include "rldp/logmath.hpp"
#include "rldp/parallel.hpp"

namespace rldp {
namespace {

double dot(std::span<const double> a, const std::vector<double>& b) {
  double out = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) out += a[j] * b[j];
  return out;
}

}  // namespace

const char* to_string(TiltStatus s) {
  return s == TiltStatus::converged ? "converged" : "plus_infinity";
}

LogWeightSequence tilted_weights(const RenewalModel& model, std::span<const double> phi) {
  if (static_cast<int>(phi.size()) != model.dim())
    throw std::invalid_argument("phi dimension does not match the reward dimension");
  if (const auto& noise = model.spec().reward.noise; noise && phi[noise->coordinate] != 0.0)
    throw std::domain_error("z is infinite off the hyperplane phi_j = 0 of the Cauchy coordinate");

  auto w = pinning_weights(model);
  for (long s = 1; s <= w.head_length(); ++s)
    if (w.head[s - 1] != kNegInf) w.head[s - 1] += dot(phi, model.reward(s));
  if (w.tail) {
    const auto& affine = *model.spec().reward.tail_affine;
    for (std::size_t j = 0; j < phi.size(); ++j) {
      w.tail->intercept += phi[j] * affine[j].first;
      w.tail->slope += phi[j] * affine[j].second;
    }
  }
  return w;
}

TiltResult z_of(const RenewalModel& model, std::span<const double> phi) {
  const auto root = psi_bracket(tilted_weights(model, phi));
  return {root.value, root.lo, root.hi, root.iterations, TiltStatus::converged};
}

double log_tilt_transform(const RenewalModel& model, std::span<const double> phi, double zeta) {
  return tilted_weights(model, phi).log_transform(zeta);
}

ZGraph z_graph(const RenewalModel& model, const std::vector<std::vector<double>>& grid,
               unsigned workers) {
  ZGraph g;
  g.phi = grid;
  g.z.resize(grid.size());
  parallel_for(grid.size(), workers, [&](std::size_t i) { g.z[i] = z_of(model, grid[i]); });
  std::vector<double> values(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) values[i] = g.z[i].value;
  g.convexity = check_convexity(grid, values, 1e-9);
  return g;
}

}  // namespace rldp
