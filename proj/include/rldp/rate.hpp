#pragma once

#include <span>
#include <string_view>
#include <vector>

#include "rldp/box.hpp"
#include "rldp/convexity.hpp"
#include "rldp/model.hpp"

namespace rldp {

/// constrained:  I(w)     = sup_phi { phi.w - z(phi) + z(0) }
/// free_lower:   I_inf(w) = sup_phi { phi.w - max{z(phi), ell_inf} + max{z(0), ell_sup} }
/// free_upper:   I_sup(w) = sup_phi { phi.w - max{z(phi), ell_sup} + max{z(0), ell_inf} }
enum class RateKind { constrained, free_lower, free_upper };
enum class RateStatus { finite, infinite, lower_bound_only };

const char* to_string(RateKind k);
const char* to_string(RateStatus s);
RateKind parse_rate_kind(std::string_view text);

struct RateValue {
  double value = 0.0;
  RateStatus status = RateStatus::finite;
  std::vector<double> arg_phi;
  double certificate = 0.0;  // objective at arg_phi
};

struct RateOptions {
  double box = 200.0;                   // search box |phi|_inf <= box
  double divergence_threshold = 1e6;
  double slope_min = 1e-3;              // outward slope certifying divergence
  double stationarity_tol = 1e-5;       // one-sided slopes certifying a maximum
  double fd_relative_step = 1e-6;
  int max_sweeps = 200;                 // coordinate ascent, d >= 2
};

/// The concave objective phi -> phi.w - Z(phi) + C of a rate kind.
class RateObjective {
 public:
  RateObjective(const RenewalModel& model, RateKind kind, std::vector<double> w);

  double operator()(std::span<const double> phi) const;
  double tilt(std::span<const double> phi) const;  // Z(phi)
  double constant() const { return constant_; }

 private:
  const RenewalModel& model_;
  std::vector<double> w_;
  double floor_;     // ell entering Z, -inf for the constrained kind
  double constant_;  // C
};

RateValue rate(const RenewalModel& model, RateKind kind, std::span<const double> w,
               const RateOptions& options = {});
inline RateValue rate(const RenewalModel& model, RateKind kind, double w,
                      const RateOptions& options = {}) {
  return rate(model, kind, std::span<const double>(&w, 1), options);
}

struct RateCurve {
  std::vector<std::vector<double>> w;
  std::vector<RateValue> values;
  ConvexityCertificate convexity;
};

RateCurve rate_curve(const RenewalModel& model, RateKind kind,
                     const std::vector<std::vector<double>>& grid, unsigned workers = 1,
                     const RateOptions& options = {});

/// Per-coordinate bounding box of the closed convex hull on which the rate is
/// finite: reward ratios f(s)/s (and 0 for free kinds with ell > -inf).
struct RewardHull {
  std::vector<double> lo;
  std::vector<double> hi;
};

RewardHull reward_ratio_hull(const RenewalModel& model, RateKind kind);

struct RateMinimum {
  std::vector<double> w;
  double value = 0.0;
  bool certified = false;  // constrained kind: value <= 1e-6
};

/// Grid search plus golden refinement, d <= 2.
RateMinimum rate_minimum(const RenewalModel& model, RateKind kind, unsigned workers = 1);

/// inf over a 1-D interval of a convex rate function. +inf when the interval
/// misses the hull of reward ratios.
RateValue rate_inf_over_interval(const RenewalModel& model, RateKind kind, const Interval& box,
                                 const RateOptions& options = {});

struct GridAxis {
  double lo = 0.0;
  double hi = 0.0;
  long n = 1;
};

std::vector<std::vector<double>> make_grid(const std::vector<GridAxis>& axes);

struct BiconjugateLevel {
  std::size_t grid_points = 0;
  std::size_t finite_points = 0;
  std::size_t skipped_points = 0;  // lower_bound_only rates left out of the sup
  double max_gap = 0.0;            // max |z(phi) - J*(phi)|
  double max_violation = 0.0;      // max (J*(phi) - z(phi))_+
  std::vector<double> conjugate;   // J*(phi) per phi
};

struct BiconjugateReport {
  std::vector<std::vector<double>> phi;
  std::vector<double> z;
  BiconjugateLevel coarse;
  BiconjugateLevel fine;  // every axis refined to 2n - 1 points

  bool shrinks() const { return fine.max_gap <= coarse.max_gap + 1e-12; }
  bool dominated(double eps) const {
    return coarse.max_violation <= eps && fine.max_violation <= eps;
  }
};

/// Recomputes J*(phi) = sup_w { phi.w - (I(w) - z(0)) } on a w grid and
/// compares it with z(phi).
BiconjugateReport biconjugate_check(const RenewalModel& model, const std::vector<GridAxis>& w_axes,
                                    const std::vector<std::vector<double>>& phi_grid,
                                    unsigned workers = 1);

}  // namespace rldp
