#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace rldp {

class ModelError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// p(s) = c * rho^s for every s beyond the head.
struct GeometricTail {
  double rho = 0.5;
  double c = 1.0;
};

struct WaitingDistribution {
  std::map<long, double> head;
  std::optional<GeometricTail> tail;
  double p_infinity = 0.0;
};

/// v(s) from the head table (missing entries are 0), and
/// v(s) = gamma + delta * s beyond the head.
struct Potential {
  std::map<long, double> head;
  std::optional<std::pair<double, double>> tail_affine;
};

struct CauchyNoise {
  int coordinate = 0;
};

/// Deterministic reward f(s) with an optional additive standard-Cauchy
/// component on one coordinate.
struct RewardMap {
  int dim = 1;
  std::map<long, std::vector<double>> head;
  std::optional<std::vector<std::pair<double, double>>> tail_affine;
  std::optional<CauchyNoise> noise;
};

/// Raw model description, as read from a config file. Not yet validated.
struct ModelSpec {
  std::string name;
  WaitingDistribution waiting;
  Potential potential;
  RewardMap reward;
};

struct Finding {
  std::string check;
  bool pass = true;
  std::string detail;
};

struct ValidationReport {
  std::vector<Finding> findings;
  std::optional<long> period;  // set when the support is periodic
  double extensivity_witness = 0.0;
  double total_mass = 0.0;

  bool ok() const;
  std::string summary() const;
};

ValidationReport validate(const ModelSpec& spec);

struct TailExponents {
  double ell_inf;
  double ell_sup;
};

/// A model that passed validation. Every computation downstream takes this
/// type, so an invalid configuration can never reach the numerics.
class RenewalModel {
 public:
  explicit RenewalModel(ModelSpec spec);

  const ModelSpec& spec() const { return spec_; }
  const std::string& name() const { return spec_.name; }
  int dim() const { return spec_.reward.dim; }

  /// Largest s with p(s) > 0 in the head (the head length s0).
  long head_length() const { return s0_; }
  const std::vector<long>& head_support() const { return support_; }
  bool has_tail() const { return spec_.waiting.tail.has_value(); }
  bool has_noise() const { return spec_.reward.noise.has_value(); }
  double p_infinity() const { return spec_.waiting.p_infinity; }

  double prob(long s) const;
  double log_prob(long s) const;
  double potential(long s) const;
  std::vector<double> reward(long s) const;

  /// ln P[S1 > t] in closed form, t >= 0.
  double log_survival(long t) const;

  double extensivity_witness() const { return z_o_; }

 private:
  ModelSpec spec_;
  long s0_ = 0;
  std::vector<long> support_;
  double z_o_ = 0.0;
};

/// Largest t that is not a sum of support elements; 0 when every t >= 1 is.
/// Throws ModelError on a periodic support.
long frobenius_horizon(const WaitingDistribution& waiting);
long frobenius_horizon(const RenewalModel& model);

TailExponents tail_exponents(const RenewalModel& model);

}  // namespace rldp
