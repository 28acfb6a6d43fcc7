#include <doctest.h>

#include <atomic>
#include <cmath>
#include <vector>

#include "rldp/box.hpp"
#include "rldp/convexity.hpp"
#include "rldp/logmath.hpp"
#include "rldp/parallel.hpp"

using namespace rldp;

TEST_SUITE("logmath") {
  TEST_CASE("log_add treats -inf as zero mass") {
    CHECK(log_add(kNegInf, 1.5) == 1.5);
    CHECK(log_add(2.0, kNegInf) == 2.0);
    CHECK(log_add(kNegInf, kNegInf) == kNegInf);
    CHECK(log_add(std::log(2.0), std::log(3.0)) == doctest::Approx(std::log(5.0)).epsilon(1e-15));
  }

  TEST_CASE("log accumulator matches direct sums without overflow") {
    LogAccumulator acc;
    for (double x : {1000.0, 999.0, 1001.0, kNegInf}) acc.add(x);
    const double expected = 1001.0 + std::log(1.0 + std::exp(-1.0) + std::exp(-2.0));
    CHECK(acc.value() == doctest::Approx(expected).epsilon(1e-15));
    CHECK(LogAccumulator{}.value() == kNegInf);

    const std::vector<double> xs{std::log(0.25), std::log(0.5), std::log(0.25)};
    CHECK(std::abs(log_sum_exp(xs)) < 1e-15);
  }

  TEST_CASE("log1m_exp on both branches") {
    for (double x : {-1e-8, -0.1, -0.69, -0.7, -5.0, -40.0})
      CHECK(log1m_exp(x) == doctest::Approx(std::log(1.0 - std::exp(x))).epsilon(1e-9));
  }

  TEST_CASE("interval containment with open ends and infinities") {
    const Interval below_one{kNegInf, 1.0, false, true};
    CHECK(below_one.contains(-1e300));
    CHECK(below_one.contains(0.999));
    CHECK_FALSE(below_one.contains(1.0));
    const Interval closed = Interval::closed(0.5, 0.8);
    CHECK(closed.contains(0.5));
    CHECK(closed.contains(0.8));
    CHECK(closed.contains(0.8 + 1e-14));
    CHECK_FALSE(closed.contains(0.81));
    CHECK(Interval::everything().contains(kInf));
    CHECK((Interval{1.0, 1.0, true, false}).empty());
    CHECK_FALSE(Interval::closed(1.0, 1.0).empty());
  }

  TEST_CASE("box parsing") {
    const Box b = parse_box("[0.5,0.8]; (-inf, 1)");
    REQUIRE(b.size() == 2);
    CHECK(b[0].lo == 0.5);
    CHECK_FALSE(b[0].lo_open);
    CHECK(b[1].lo == kNegInf);
    CHECK(b[1].hi_open);
    CHECK(box_contains(b, {0.6, 0.0}));
    CHECK_FALSE(box_contains(b, {0.6, 1.0}));
    CHECK(parse_box("0.5,0.8")[0].hi == 0.8);
    CHECK_THROWS_AS(parse_box("0.8,0.5"), std::invalid_argument);
    CHECK_THROWS_AS(parse_box("0.5"), std::invalid_argument);
    CHECK_THROWS_AS(parse_box("[0.5,x]"), std::invalid_argument);
    CHECK_THROWS_AS(parse_box("[0.5,1"), std::invalid_argument);
    CHECK(to_string(parse_box("[0,1)")) == "[0,1)");
  }

  TEST_CASE("convexity certificate") {
    const std::vector<std::vector<double>> pts{{0.0}, {1.0}, {2.0}, {3.0}};
    CHECK(check_convexity(pts, {0.0, 1.0, 4.0, 9.0}, 1e-12).ok());
    const auto bad = check_convexity(pts, {0.0, 2.0, 1.0, 9.0}, 1e-12);
    CHECK_FALSE(bad.ok());
    CHECK(bad.worst_excess > 0.0);
    CHECK(check_convexity(pts, {0.0, kInf, 4.0, 9.0}, 1e-12).ok());
  }

  TEST_CASE("parallel_for visits each index once for any worker count") {
    for (unsigned workers : {1u, 3u, 8u}) {
      std::vector<std::atomic<int>> hits(101);
      parallel_for(hits.size(), workers, [&](std::size_t i) { hits[i]++; });
      for (const auto& h : hits) CHECK(h.load() == 1);
    }
    CHECK_THROWS_AS(parallel_for(10, 4,
                                 [](std::size_t i) {
                                   if (i == 7) throw std::runtime_error("boom");
                                 }),
                    std::runtime_error);
  }
}
