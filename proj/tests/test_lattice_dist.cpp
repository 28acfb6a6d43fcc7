#include <doctest.h>

#include <array>
#include <cmath>
#include <functional>
#include <map>
#include <numbers>

#include "rldp/lattice_dist.hpp"
#include "rldp/logmath.hpp"
#include "rldp/renewal_kernel.hpp"
#include "support.hpp"

using namespace rldp;

namespace {

using CellMap = std::map<std::array<long, 2>, LogAccumulator>;

// Composition enumeration with explicit survival sums.
void enumerate(const RenewalModel& m, const LatticeSpec& spec, long t, CellMap& mu, CellMap& nu) {
  std::function<void(long, std::array<long, 2>, double)> walk = [&](long time,
                                                                     std::array<long, 2> cell,
                                                                     double lw) {
    if (time == t) mu[cell].add(lw);
    double tail = m.p_infinity();
    for (long s : m.head_support())
      if (s > t - time) tail += m.prob(s);
    if (tail > 0.0) nu[cell].add(lw + std::log(tail));
    for (long s : m.head_support()) {
      if (time + s > t) continue;
      const auto k = spec.cell(m.reward(s));
      walk(time + s, {cell[0] + k[0], cell[1] + k[1]}, lw + m.potential(s) + std::log(m.prob(s)));
    }
  };
  walk(0, {0, 0}, 0.0);
}

void check_against(const LatticeMeasure& m, CellMap& oracle) {
  std::size_t nonzero = 0;
  for (std::size_t i = 0; i < m.log_mass.size(); ++i) {
    if (m.log_mass[i] == kNegInf) continue;
    ++nonzero;
    const auto it = oracle.find(m.cell_of(i));
    REQUIRE(it != oracle.end());
    CHECK(std::abs(m.log_mass[i] - it->second.value()) < 1e-10);
  }
  std::size_t expected = 0;
  for (const auto& [cell, acc] : oracle)
    if (acc.value() > kNegInf) ++expected;
  CHECK(nonzero == expected);
}

}  // namespace

TEST_SUITE("lattice_dist") {
  TEST_CASE("renewal-count masses at t = 2") {
    const auto m = test::shipped("count");
    const auto mus = mu_exact(m, LatticeSpec::infer(m), 2);
    CHECK(std::exp(mus[2].at(1)) == doctest::Approx(0.5));
    CHECK(std::exp(mus[2].at(2)) == doctest::Approx(0.25));
    CHECK(std::exp(mus[2].log_normalizer) == doctest::Approx(0.75));
    CHECK(std::exp(prob_box(mus[2], parse_box("0.9,1.1"), true)) == doctest::Approx(1.0 / 3.0));
    CHECK(prob_box(mus[2], parse_box("5,6"), true) == kNegInf);
  }

  TEST_CASE("t = 0 is a unit mass at the origin") {
    for (const char* name : {"count", "pair", "pinned"}) {
      const auto m = test::shipped(name);
      const auto spec = LatticeSpec::infer(m);
      for (const auto& measure : {mu_exact(m, spec, 0)[0], nu_exact(m, spec, 0)[0]}) {
        CHECK(measure.log_mass.size() == 1);
        CHECK(measure.at(0, 0) == 0.0);
        CHECK(measure.log_normalizer == 0.0);
      }
    }
  }

  TEST_CASE("free law examples") {
    const auto xs = test::shipped("xs23");
    const auto nu1 = nu_exact(xs, LatticeSpec::infer(xs), 1)[1];
    CHECK(nu1.at(0) == doctest::Approx(0.0));
    CHECK(nu1.log_normalizer == doctest::Approx(0.0));

    const auto tr = test::shipped("transient");
    const auto nu3 = nu_exact(tr, LatticeSpec::infer(tr), 3)[3];
    for (long n = 0; n < 3; ++n)
      CHECK(std::exp(nu3.at(n)) == doctest::Approx(std::pow(0.5, n) * 0.5));
    CHECK(std::exp(nu3.at(3)) == doctest::Approx(0.125));
    CHECK(std::abs(nu3.log_normalizer) < 1e-14);
  }

  TEST_CASE("brute-force equivalence for every DP-eligible shipped model") {
    for (const char* name : {"count", "fibonacci", "uniform12", "transient", "xs23", "pinned",
                             "pair", "squared"}) {
      CAPTURE(name);
      const auto m = test::shipped(name);
      const auto spec = LatticeSpec::infer(m);
      const auto mus = mu_exact(m, spec, 12);
      const auto nus = nu_exact(m, spec, 12);
      for (long t = 0; t <= 12; ++t) {
        CellMap mu, nu;
        enumerate(m, spec, t, mu, nu);
        check_against(mus[t], mu);
        check_against(nus[t], nu);
      }
    }
  }

  TEST_CASE("normalizers equal the partition functions") {
    for (const char* name : {"pinned", "squared", "transient", "pair"}) {
      CAPTURE(name);
      const auto m = test::shipped(name);
      const auto spec = LatticeSpec::infer(m);
      const auto zc = partition_constrained(m, 60);
      const auto zf = partition_free(m, 60);
      const auto mus = mu_exact(m, spec, 60);
      const auto nus = nu_exact(m, spec, 60);
      for (long t = 0; t <= 60; ++t) {
        CHECK(std::abs(mus[t].log_normalizer - zc[t]) < 1e-9);
        CHECK(std::abs(nus[t].log_normalizer - zf[t]) < 1e-9);
        CHECK(prob_box(mus[t], full_box(m.dim()), false) == 0.0);
        CHECK(prob_box(nus[t], full_box(m.dim()), false) == 0.0);
      }
    }
  }

  TEST_CASE("measures_at agrees with the full sweep") {
    const auto m = test::shipped("pinned");
    const auto spec = LatticeSpec::infer(m);
    const auto all = nu_exact(m, spec, 40);
    const auto some = measures_at(m, spec, {40, 7, 19}, MeasureKind::free_nu);
    REQUIRE(some.size() == 3);
    CHECK(some[0].t == 7);
    CHECK(some[1].log_mass == all[19].log_mass);
    CHECK(some[2].log_mass == all[40].log_mass);
  }

  TEST_CASE("concentration at the mean ratio") {
    const auto m = test::shipped("count");
    const auto mu = measures_at(m, LatticeSpec::infer(m), {2000}, MeasureKind::constrained_mu)[0];
    const double lp = prob_box(mu, parse_box("0.61666666666666667,0.71666666666666667"), true);
    CHECK(-lp / 2000.0 <= 0.01);
  }

  TEST_CASE("X = S: the constrained law sits on w = 1") {
    const auto m = test::shipped("xs23");
    const auto rows = empirical_rate(m, LatticeSpec::infer(m), parse_box("1,1"), {5, 10, 100});
    for (const auto& r : rows) CHECK(r.constrained == 0.0);
  }

  TEST_CASE("empirical rates approach the rate infimum") {
    const auto m = test::shipped("count");
    const auto rows =
        empirical_rate(m, LatticeSpec::infer(m), parse_box("0.95,1.0"), {100, 500, 1000, 2000});
    for (std::size_t i = 1; i < rows.size(); ++i) CHECK(rows[i].constrained < rows[i - 1].constrained);
    const double target = rate(m, RateKind::constrained, 0.95).value;
    CHECK(std::abs(rows.back().constrained - target) < 0.01);
  }

  TEST_CASE("super-multiplicativity") {
    const auto m = test::shipped("count");
    const auto spec = LatticeSpec::infer(m);
    CHECK(supermult_check(m, spec, parse_box("0.5,0.8"), 100, 100).ok());
    const auto full = supermult_check(m, spec, full_box(1), 30, 30);
    CHECK(full.ok());
    const auto zc = partition_constrained(m, 60);
    for (long t = 1; t <= 60; ++t) CHECK(std::abs(full.log_mass[t] - zc[t]) < 1e-9);
    const auto empty = supermult_check(m, spec, parse_box("3,4"), 20, 20);
    CHECK(empty.ok());
    CHECK(empty.log_mass[10] == kNegInf);
  }

  TEST_CASE("open convex counterexample") {
    const auto r = open_convex_counterexample(1000);
    CHECK(r.free_rate <= 0.01);
    CHECK(r.log_prob >= r.log_lower_bound - 1e-9);
    CHECK(r.rate_inf.status == RateStatus::infinite);
    CHECK(r.ok);
  }

  TEST_CASE("lattice inference") {
    const auto m = test::finite_model({{1, 0.5}, {2, 0.5}}, 0.0, {}, {{1, 0.25}, {2, -0.75}});
    const auto spec = LatticeSpec::infer(m);
    CHECK(spec.step[0] == doctest::Approx(0.25));
    CHECK(spec.cell({-0.75})[0] == -3);
    CHECK_THROWS_AS(spec.cell({0.1}), ModelError);
    const auto irrational = test::finite_model({{1, 0.5}, {2, 0.5}}, 0.0, {},
                                               {{1, 1.0}, {2, std::numbers::pi}});
    CHECK_THROWS_AS(LatticeSpec::infer(irrational), ModelError);
    const auto zero = test::finite_model({{1, 1.0}}, 0.0, {}, {{1, 0.0}});
    CHECK(LatticeSpec::infer(zero).step[0] == 1.0);
  }

  TEST_CASE("eligibility and budget guards") {
    const auto geo = test::shipped("geometric");
    CHECK_THROWS_AS(mu_exact(geo, LatticeSpec{}, 5), ModelError);
    const auto cauchy = test::shipped("cauchy");
    CHECK_THROWS_AS(nu_exact(cauchy, LatticeSpec{2, {1.0, 1.0}}, 5), ModelError);
    const auto count = test::shipped("count");
    CHECK_THROWS_AS(mu_exact(count, LatticeSpec::infer(count), 1000, 1e3), BudgetError);
    const auto mu = mu_exact(count, LatticeSpec::infer(count), 0)[0];
    CHECK_THROWS_AS(prob_box(mu, parse_box("0,1"), true), std::invalid_argument);
  }
}
