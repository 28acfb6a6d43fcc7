#include <doctest.h>

#include <cmath>
#include <filesystem>

#include "rldp/config.hpp"
#include "rldp/logmath.hpp"
#include "rldp/model.hpp"
#include "support.hpp"

using namespace rldp;
using rldp::test::finite_spec;

namespace {

bool failed(const ValidationReport& r, const std::string& check) {
  for (const auto& f : r.findings)
    if (f.check == check) return !f.pass;
  return false;
}

}  // namespace

TEST_SUITE("model") {
  TEST_CASE("every shipped model validates") {
    for (const auto& entry : std::filesystem::directory_iterator(RLDP_MODELS_DIR)) {
      CAPTURE(entry.path().string());
      const auto report = validate(load_model_spec(entry.path()));
      CHECK(report.ok());
    }
  }

  TEST_CASE("normalization within 1e-12") {
    CHECK(validate(finite_spec({{1, 0.5}, {2, 0.5 + 5e-13}})).ok());
    const auto r = validate(finite_spec({{1, 0.5}, {2, 0.4}}));
    CHECK(failed(r, "normalization"));
    CHECK(r.total_mass == doctest::Approx(0.9));
  }

  TEST_CASE("geometric tail mass uses the closed form") {
    auto spec = finite_spec({{1, 0.5}});
    spec.waiting.tail = GeometricTail{0.5, 1.0};
    spec.potential.tail_affine = {{0.0, 0.0}};
    spec.reward.tail_affine = {{{1.0, 0.0}}};
    const auto r = validate(spec);
    CHECK(r.ok());
    CHECK(r.total_mass == doctest::Approx(1.0).epsilon(1e-15));
  }

  TEST_CASE("probabilities outside [0,1] are rejected") {
    CHECK(failed(validate(finite_spec({{1, 1.5}, {2, -0.5}})), "probabilities"));
    CHECK(failed(validate(finite_spec({{0, 0.5}, {1, 0.5}})), "probabilities"));
    CHECK(failed(validate(finite_spec({{1, 1.0}}, std::nan(""))), "probabilities"));
    CHECK(failed(validate(finite_spec({{1, 1.0 - 1e-301}, {2, 1e-301}})), "probabilities"));
  }

  TEST_CASE("aperiodicity") {
    CHECK(validate(finite_spec({{2, 0.5}, {3, 0.5}})).ok());
    const auto r = validate(finite_spec({{2, 0.5}, {4, 0.5}}));
    CHECK(failed(r, "aperiodicity"));
    REQUIRE(r.period.has_value());
    CHECK(*r.period == 2);
    CHECK_THROWS_AS(RenewalModel(finite_spec({{2, 0.5}, {4, 0.5}})), ModelError);
  }

  TEST_CASE("extensivity witness for v = s^2 is the max over the head") {
    const auto m = test::finite_model({{1, 0.5}, {2, 0.3}, {3, 0.2}}, 0.0,
                                      {{1, 1.0}, {2, 4.0}, {3, 9.0}});
    double expected = kNegInf;
    for (long s : {1L, 2L, 3L})
      expected = std::max(expected, (double(s * s) + std::log(m.prob(s))) / double(s));
    CHECK(m.extensivity_witness() == doctest::Approx(expected).epsilon(1e-15));
    for (long s : {1L, 2L, 3L})
      CHECK(m.potential(s) + m.log_prob(s) <= m.extensivity_witness() * double(s) + 1e-12);
  }

  TEST_CASE("tail and reward requirements") {
    auto spec = finite_spec({{1, 0.5}});
    spec.waiting.tail = GeometricTail{0.5, 1.0};
    CHECK(failed(validate(spec), "potential"));
    spec.potential.tail_affine = {{0.0, -1.0}};
    CHECK(failed(validate(spec), "reward"));

    auto noisy = finite_spec({{2, 0.5}, {3, 0.5}});
    noisy.reward.noise = CauchyNoise{3};
    CHECK(failed(validate(noisy), "reward"));

    auto missing = finite_spec({{1, 0.5}, {2, 0.5}});
    missing.reward.head.erase(2);
    CHECK(failed(validate(missing), "reward"));
  }

  TEST_CASE("frobenius horizon") {
    CHECK(frobenius_horizon(test::finite_model({{2, 0.5}, {3, 0.5}})) == 1);
    CHECK(frobenius_horizon(test::finite_model({{3, 0.5}, {5, 0.5}})) == 7);
    CHECK(frobenius_horizon(test::finite_model({{1, 0.2}, {7, 0.8}})) == 0);
    CHECK(frobenius_horizon(test::finite_model({{4, 0.3}, {6, 0.3}, {9, 0.4}})) == 11);
    WaitingDistribution periodic;
    periodic.head = {{2, 0.5}, {4, 0.5}};
    CHECK_THROWS_AS(frobenius_horizon(periodic), ModelError);
  }

  TEST_CASE("tail exponents") {
    const auto finite = tail_exponents(test::finite_model({{1, 0.5}, {2, 0.5}}));
    CHECK(finite.ell_inf == kNegInf);
    CHECK(finite.ell_sup == kNegInf);
    const auto transient = tail_exponents(test::finite_model({{1, 0.7}}, 0.3));
    CHECK(transient.ell_inf == 0.0);
    CHECK(transient.ell_sup == 0.0);
    const auto geo = tail_exponents(test::shipped("geometric"));
    CHECK(geo.ell_inf == doctest::Approx(std::log(0.5)));
    CHECK(geo.ell_sup == doctest::Approx(std::log(0.5)));
  }

  TEST_CASE("survival function in closed form") {
    const auto m = test::shipped("geometric");
    // P[S1 > t] = rho^{t+1} / (1 - rho) * c = 0.5^t for this model.
    for (long t : {0L, 1L, 2L, 10L, 50L})
      CHECK(m.log_survival(t) == doctest::Approx(double(t) * std::log(0.5)).epsilon(1e-13));
    const auto p = test::shipped("pinned");
    CHECK(std::exp(p.log_survival(0)) == doctest::Approx(1.0));
    CHECK(std::exp(p.log_survival(1)) == doctest::Approx(0.7));
    CHECK(std::exp(p.log_survival(3)) == doctest::Approx(0.2));
    CHECK(std::exp(p.log_survival(100)) == doctest::Approx(0.2));
  }

  TEST_CASE("tail potential and rewards are affine beyond the head") {
    const auto m = test::shipped("geometric");
    CHECK(m.potential(7) == doctest::Approx(-7.0));
    CHECK(m.reward(7)[0] == doctest::Approx(1.0));
    CHECK(m.prob(3) == doctest::Approx(0.125));
  }

  TEST_CASE("config errors") {
    CHECK_THROWS_AS(parse_model("{"), ConfigError);
    CHECK_THROWS_AS(parse_model(R"({"reward": {"dim": 1, "head": {}}})"), ConfigError);
    CHECK_THROWS_AS(parse_model(R"({"waiting": {"head": {"1": "x"}}, "reward": {"dim": 1,
                    "head": {"1": 1}}})"),
                    ConfigError);
    CHECK_THROWS_AS(parse_model(R"({"waiting": {"head": {"1": 1}, "tail": {"type": "zeta"}},
                    "reward": {"dim": 1, "head": {"1": 1}}})"),
                    ConfigError);
    CHECK_THROWS_AS(load_model_spec("/nonexistent/model.json"), ConfigError);
    const auto spec = parse_model(R"({"waiting": {"head": {"1": 1}}, "reward": {"dim": 2,
                                      "head": {"1": [1, 2]}, "noise": "none"}})");
    CHECK(spec.reward.dim == 2);
    CHECK_FALSE(spec.reward.noise.has_value());
  }
}
