#include <doctest.h>

#include <cmath>
#include <vector>

#include "rldp/logmath.hpp"
#include "rldp/rate.hpp"
#include "rldp/tilt.hpp"
#include "support.hpp"

using namespace rldp;

namespace {

// Count model: (e^{k-z} + e^{k-2z}) / 2 = 1, i.e. x^2 + x = 2 e^{-k} with x = e^{-z}.
double count_z(double k) {
  const double a = std::exp(-k);
  return -std::log(4.0 * a / (1.0 + std::sqrt(1.0 + 8.0 * a)));
}

}  // namespace

TEST_SUITE("tilt") {
  TEST_CASE("renewal-count closed form on 101 points") {
    const auto m = test::shipped("count");
    for (int i = 0; i <= 100; ++i) {
      const double k = -3.0 + 0.06 * i;
      CHECK(std::abs(z_of(m, k).value - count_z(k)) < 1e-10);
    }
  }

  TEST_CASE("X = S gives z(k) = k") {
    for (const char* name : {"uniform12", "xs23"}) {
      const auto m = test::shipped(name);
      const auto g = z_graph(m, {{-1.0}, {0.0}, {1.0}}, 2);
      CHECK(std::abs(g.z[0].value + 1.0) < 1e-10);
      CHECK(std::abs(g.z[1].value) < 1e-10);
      CHECK(std::abs(g.z[2].value - 1.0) < 1e-10);
    }
  }

  TEST_CASE("z(0) for the fibonacci weights is ln of the golden ratio") {
    CHECK(std::abs(z_of(test::shipped("fibonacci"), 0.0).value -
                   std::log((1.0 + std::sqrt(5.0)) / 2.0)) < 1e-11);
  }

  TEST_CASE("converged status comes with a bracket certificate") {
    for (const char* name : {"count", "pinned", "geometric", "squared", "transient"}) {
      CAPTURE(name);
      const auto m = test::shipped(name);
      for (double phi : {-2.0, -0.5, 0.0, 0.7, 2.0}) {
        const auto r = z_of(m, phi);
        REQUIRE(r.status == TiltStatus::converged);
        const std::vector<double> p{phi};
        CHECK(log_tilt_transform(m, p, r.hi) <= 0.0);
        CHECK(log_tilt_transform(m, p, r.lo) > 0.0);
        CHECK(r.lo <= r.value);
        CHECK(r.value <= r.hi);
        CHECK(r.hi - r.lo <= 2e-12 * std::max(1.0, std::abs(r.value)));
      }
    }
  }

  TEST_CASE("transient model") {
    // z(k) = k + ln q with q = 1/2.
    const auto m = test::shipped("transient");
    for (double k : {-1.0, 0.0, 0.5, 3.0})
      CHECK(std::abs(z_of(m, k).value - (k + std::log(0.5))) < 1e-10);
  }

  TEST_CASE("z is convex and finite above -inf on a grid") {
    std::vector<std::vector<double>> grid;
    for (int i = 0; i <= 60; ++i) grid.push_back({-3.0 + 0.1 * i});
    for (const char* name : {"count", "pinned", "geometric", "squared"}) {
      const auto g = z_graph(test::shipped(name), grid, 4);
      CHECK(g.convexity.ok());
      for (const auto& r : g.z) CHECK(r.value > kNegInf);
    }
  }

  TEST_CASE("two-dimensional tilt") {
    const auto m = test::shipped("pair");
    // phi = (k, 0) reduces to the 1-D count-like model with three atoms.
    const std::vector<double> phi{0.3, 0.0};
    const double z = z_of(m, phi).value;
    const double lhs = std::log((std::exp(0.3 - z) + std::exp(0.3 - 2 * z) + std::exp(0.3 - 3 * z)) / 3.0);
    CHECK(std::abs(lhs) < 1e-10);
    const auto g = z_graph(m, make_grid({{-1.0, 1.0, 7}, {-1.0, 1.0, 7}}), 2);
    CHECK(g.convexity.ok());
  }

  TEST_CASE("Cauchy coordinate rejects nonzero tilts") {
    const auto m = test::shipped("cauchy");
    const std::vector<double> bad{0.0, 0.1};
    CHECK_THROWS_AS(z_of(m, bad), std::domain_error);
    const std::vector<double> good{1.0, 0.0};
    CHECK(std::abs(z_of(m, good).value - 1.0) < 1e-10);
  }

  TEST_CASE("batching identity") {
    const auto m = test::shipped("pinned");
    const auto g = z_graph(m, {{0.0}});
    REQUIRE(g.z.size() == 1);
    CHECK(g.z[0].value == z_of(m, 0.0).value);
  }
}
