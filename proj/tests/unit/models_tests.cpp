// Copyright (c) 2026 The dtpay developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#include <doctest.h>

#include <cmath>
#include <limits>
#include <sstream>

#include "dtpay/analytics/analytics.hpp"
#include "dtpay/models/models.hpp"

using namespace dtpay;
using namespace dtpay::models;

namespace {

double binomial(std::size_t n, std::size_t k, double p) {
  double c = 1.0;
  for (std::size_t i = 0; i < k; ++i) c = c * static_cast<double>(n - i) / static_cast<double>(i + 1);
  return c * std::pow(p, static_cast<double>(k)) * std::pow(1.0 - p, static_cast<double>(n - k));
}

}  // namespace

TEST_CASE("block bits and system cost worked examples") {
  CHECK(expected_block_bits(0.5, 4000, 12) == 24000.0);
  CHECK(expected_block_bits(0.0, 4000, 12) == 0.0);
  CHECK_THROWS(expected_block_bits(-1, 1, 1));

  CostInputs in;
  in.d_m = 1000;
  in.l_m = 10;
  in.x_m = 5;
  in.x_y = 1;
  CHECK(system_cost(in) == doctest::Approx(2000.0));
  in.R = 5;
  in.x_b = 100;
  in.C_BW = 1e-6;
  in.BW = 128000;
  in.T_C = 300;
  in.x_s = 2;
  CHECK(system_cost(in) == doctest::Approx(2000.0 + 500.0 + 76.8));
  in.x_m = 0;
  CHECK_THROWS(system_cost(in));
}

TEST_CASE("system cost is linear in each term") {
  CostInputs a;
  a.d_m = 300;
  a.l_m = 7;
  a.x_m = 3;
  a.x_y = 2;
  a.R = 4;
  a.x_b = 1000;
  a.C_BW = 2e-6;
  a.BW = 64000;
  a.T_C = 100;
  a.x_s = 10;
  const double base = system_cost(a);
  auto b = a;
  b.x_y *= 2;
  b.x_b *= 2;
  b.x_s *= 2;
  CHECK(system_cost(b) == doctest::Approx(2 * base));
  b = a;
  b.l_m += 1;
  CHECK(system_cost(b) - base == doctest::Approx(a.d_m / a.x_m * a.x_y));
}

TEST_CASE("poisson binomial matches enumeration") {
  Rng rng(13);
  for (int round = 0; round < 60; ++round) {
    const std::size_t n = rng.uniform_int(0, 12);
    std::vector<double> p(n);
    for (auto& x : p) x = rng.uniform01();
    std::vector<double> brute(n + 1, 0.0);
    for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
      double prob = 1.0;
      for (std::size_t i = 0; i < n; ++i) prob *= (mask >> i) & 1u ? p[i] : 1.0 - p[i];
      brute[static_cast<std::size_t>(__builtin_popcount(mask))] += prob;
    }
    const auto dp = poisson_binomial_distribution(p);
    REQUIRE(dp.size() == n + 1);
    double total = 0.0;
    for (std::size_t k = 0; k <= n; ++k) {
      CHECK(dp[k] == doctest::Approx(brute[k]).epsilon(1e-9));
      CHECK(poisson_binomial_pmf(p, k) == doctest::Approx(brute[k]).epsilon(1e-9));
      total += dp[k];
    }
    CHECK(total == doctest::Approx(1.0));
    CHECK_THROWS_AS(poisson_binomial_pmf(p, n + 1), std::out_of_range);
  }
}

TEST_CASE("equal probabilities reduce to the binomial") {
  for (double p : {0.0, 0.1, 0.5, 0.9, 1.0}) {
    const std::vector<double> ps(10, p);
    for (std::size_t k = 0; k <= 10; ++k) {
      CHECK(poisson_binomial_pmf(ps, k) == doctest::Approx(binomial(10, k, p)));
    }
  }
  const std::vector<double> three(3, 0.5);
  CHECK(poisson_binomial_pmf(three, 1) == 0.375);
  const std::vector<double> bad{1.5};
  CHECK_THROWS(poisson_binomial_distribution(bad));
}

TEST_CASE("online miners") {
  CHECK(expected_online(10, 0.3) == doctest::Approx(7.0));
  CHECK(required_miners(7, 0.3) == doctest::Approx(10.0));
  CHECK_THROWS(required_miners(7, 1.0));
  CHECK_THROWS(expected_online(10, -0.1));
}

TEST_CASE("profit falls with more miners and the break-even count is tight") {
  ProfitInputs in{5.0, 1e-9, 29127.0, 12.0, 1.0};
  double last = expected_profit(in);
  for (int n = 2; n < 50; ++n) {
    in.l_m = n;
    const double now = expected_profit(in);
    CHECK(now < last);
    last = now;
  }
  Rng rng(31);
  for (int round = 0; round < 300; ++round) {
    const double R = 0.5 + rng.uniform01() * 20;
    const double eta = 1e-10 + rng.uniform01() * 1e-8;
    const double h = 1000 + rng.uniform01() * 1e5;
    const double t = 1 + rng.uniform01() * 30;
    const auto n = max_profitable_miners(R, eta, h, t);
    if (n > 0) CHECK(R / static_cast<double>(n) - eta * h * t > 0.0);
    CHECK_FALSE(R / static_cast<double>(n + 1) - eta * h * t > 0.0);
  }
  CHECK(max_profitable_miners(1, 1, 1, 1) == 0);
  CHECK(max_profitable_miners(10, 1, 1, 1) == 9);
}

TEST_CASE("connection counts are minimal") {
  CHECK(min_connections(100, 3).l_c == 5);
  CHECK(min_connections(10, 1).l_c == 9);
  CHECK(min_connections(100, 3).gamma == doctest::Approx(0.05));
  CHECK(reachable_within(3, 2) == 1 + 3 + 3 * 2);
  CHECK(reachable_within(1000, 100) == std::numeric_limits<std::uint64_t>::max());

  for (std::uint64_t k = 1; k <= 4; ++k) {
    std::uint64_t last = 0;
    for (std::uint64_t l_m = 4; l_m <= 100; ++l_m) {
      const auto c = min_connections(l_m, k);
      CHECK(reachable_within(c.l_c, k) >= l_m);
      if (c.l_c > 1) CHECK(reachable_within(c.l_c - 1, k) < l_m);
      CHECK(c.l_c >= last);
      if (k > 1) CHECK(c.l_c <= min_connections(l_m, k - 1).l_c);
      last = c.l_c;
    }
  }
  CHECK_THROWS(min_connections(1, 2));
  CHECK_THROWS(min_connections(10, 0));

  std::ostringstream out;
  write_connectivity_sweep(out, 4, 5, 1);
  CHECK(out.str() == "l_m,k,l_c,gamma\n4,1,3,0.75\n5,1,4,0.8\n");
}

TEST_CASE("processing model means") {
  const auto s = simulate_tx_processing(2.0, 12.0, 2e6, 1);
  REQUIRE(s.block_times.size() > 100000);
  CHECK(analytics::mean(s.block_times) == doctest::Approx(12.0).epsilon(0.05));
  // memoryless blocks: the wait for the next block is also E[T]
  CHECK(analytics::mean(s.tx_times) == doctest::Approx(12.0).epsilon(0.05));
  CHECK(s.tx_times.size() == s.tx_block.size());

  const auto none = simulate_tx_processing(0.0, 12.0, 1000.0, 1);
  CHECK(none.tx_times.empty());
  CHECK_FALSE(none.block_times.empty());
  CHECK_THROWS(simulate_tx_processing(1.0, 0.0, 10.0, 1));
}

TEST_CASE("processing percentiles do not depend on the arrival rate") {
  const auto slow = simulate_tx_processing(0.2, 12.0, 1e6, 3);
  const auto fast = simulate_tx_processing(25.0, 12.0, 2e4, 4);
  const auto a = analytics::percentile_report(slow.tx_times);
  const auto b = analytics::percentile_report(fast.tx_times);
  for (std::size_t i = 0; i < a.values.size() - 1; ++i) {
    CHECK(std::abs(a.values[i] - b.values[i]) / a.values[i] < 0.1);
  }
}
