// Copyright (c) 2026 The dtpay developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#include "dtpay/models/models.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "dtpay/common/format.hpp"

namespace dtpay::models {

double expected_block_bits(double lambda_t, double s_t_bits, double mean_t_s) {
  if (lambda_t < 0.0 || s_t_bits < 0.0 || mean_t_s < 0.0) {
    throw std::invalid_argument("expected_block_bits: negative input");
  }
  return lambda_t * s_t_bits * mean_t_s;
}

double system_cost(const CostInputs& in) {
  if (!(in.x_m > 0.0)) throw std::invalid_argument("system_cost: device lifetime must be positive");
  return in.l_m * (in.d_m / in.x_m) * in.x_y + in.R * in.x_b + in.C_BW * in.T_C * in.BW * in.x_s;
}

std::vector<double> poisson_binomial_distribution(std::span<const double> p) {
  std::vector<double> pmf{1.0};
  pmf.reserve(p.size() + 1);
  for (const double pi : p) {
    if (!(pi >= 0.0 && pi <= 1.0)) throw std::invalid_argument("probability outside [0, 1]");
    pmf.push_back(0.0);
    for (std::size_t k = pmf.size() - 1; k > 0; --k) {
      pmf[k] = pmf[k] * (1.0 - pi) + pmf[k - 1] * pi;
    }
    pmf[0] *= 1.0 - pi;
  }
  return pmf;
}

double poisson_binomial_pmf(std::span<const double> p, std::size_t k) {
  if (k > p.size()) throw std::out_of_range("poisson_binomial_pmf: k exceeds the miner count");
  return poisson_binomial_distribution(p)[k];
}

double expected_online(double l_m, double p_d) {
  if (!(p_d >= 0.0 && p_d <= 1.0)) throw std::invalid_argument("p_d outside [0, 1]");
  return l_m * (1.0 - p_d);
}

double required_miners(double target_online, double p_d) {
  if (!(p_d >= 0.0 && p_d < 1.0)) {
    throw std::invalid_argument("required_miners: p_d must be in [0, 1)");
  }
  return target_online / (1.0 - p_d);
}

double expected_profit(const ProfitInputs& in) {
  if (!(in.l_m >= 1.0)) throw std::invalid_argument("expected_profit: l_m must be >= 1");
  return in.R / in.l_m - in.eta * in.h * in.mean_t;
}

std::uint64_t max_profitable_miners(double R, double eta, double h, double mean_t) {
  const double cost = eta * h * mean_t;
  if (!(cost > 0.0)) throw std::invalid_argument("max_profitable_miners: hash cost must be positive");
  const double bound = R / cost;
  if (!(bound > 1.0)) return 0;
  auto n = static_cast<std::uint64_t>(std::ceil(bound)) - 1;
  while (n > 0 && !(R / static_cast<double>(n) - cost > 0.0)) --n;
  while (R / static_cast<double>(n + 1) - cost > 0.0) ++n;
  return n;
}

namespace {

constexpr std::uint64_t kSaturated = std::numeric_limits<std::uint64_t>::max();

std::uint64_t sat_add(std::uint64_t a, std::uint64_t b) { return a > kSaturated - b ? kSaturated : a + b; }

std::uint64_t sat_mul(std::uint64_t a, std::uint64_t b) {
  if (a == 0 || b == 0) return 0;
  return a > kSaturated / b ? kSaturated : a * b;
}

}  // namespace

std::uint64_t reachable_within(std::uint64_t l_c, std::uint64_t k) {
  std::uint64_t sum = 0;
  std::uint64_t term = 1;
  for (std::uint64_t i = 0; i < k && term != 0; ++i) {
    sum = sat_add(sum, term);
    term = sat_mul(term, l_c - (l_c > 0 ? 1 : 0));
  }
  return sat_add(1, sat_mul(l_c, sum));
}

Connectivity min_connections(std::uint64_t l_m, std::uint64_t k) {
  if (l_m < 2) throw std::invalid_argument("min_connections: need at least two miners");
  if (k < 1) throw std::invalid_argument("min_connections: need at least one hop");
  for (std::uint64_t l_c = 1; l_c < l_m; ++l_c) {
    if (reachable_within(l_c, k) >= l_m) {
      return {l_c, static_cast<double>(l_c) / static_cast<double>(l_m)};
    }
  }
  throw std::logic_error("min_connections: no feasible connection count");
}

void write_connectivity_sweep(std::ostream& out, std::uint64_t lo, std::uint64_t hi,
                              std::uint64_t max_k) {
  out << "l_m,k,l_c,gamma\n";
  for (std::uint64_t k = 1; k <= max_k; ++k) {
    for (std::uint64_t l_m = lo; l_m <= hi; ++l_m) {
      const auto c = min_connections(l_m, k);
      out << l_m << ',' << k << ',' << c.l_c << ',' << format_double(c.gamma) << '\n';
    }
  }
}

ProcessingSample simulate_tx_processing(double lambda_t, double mean_t, double horizon_s,
                                        std::uint64_t seed) {
  if (lambda_t < 0.0 || !(mean_t > 0.0) || !(horizon_s > 0.0)) {
    throw std::invalid_argument("simulate_tx_processing: bad parameters");
  }
  Rng blocks = make_stream(seed, "model-blocks");
  Rng arrivals = make_stream(seed, "model-arrivals");
  ProcessingSample out;
  std::vector<double> block_at;
  for (double t = blocks.exponential(1.0 / mean_t); t < horizon_s;
       t += blocks.exponential(1.0 / mean_t)) {
    out.block_times.push_back(t - (block_at.empty() ? 0.0 : block_at.back()));
    block_at.push_back(t);
  }
  if (lambda_t == 0.0 || block_at.empty()) return out;
  std::size_t next = 0;
  for (double t = arrivals.exponential(lambda_t); t < horizon_s; t += arrivals.exponential(lambda_t)) {
    while (next < block_at.size() && block_at[next] <= t) ++next;
    if (next == block_at.size()) break;
    out.tx_times.push_back(block_at[next] - t);
    out.tx_block.push_back(next);
  }
  return out;
}

}  // namespace dtpay::models
