// Copyright (c) 2026 The dtpay developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#pragma once

#include <cstdint>
#include <ostream>
#include <span>
#include <vector>

#include "dtpay/common/rng.hpp"

namespace dtpay::models {

/// Bits a block must hold: lambda_t * s_t * E[T].
double expected_block_bits(double lambda_t, double s_t_bits, double mean_t_s);

struct CostInputs {
  double d_m = 0.0;   // Tokens per mining device
  double l_m = 0.0;   // miners
  double x_m = 1.0;   // device lifetime, years
  double R = 0.0;     // Tokens per block
  double C_BW = 0.0;  // Tokens per bit
  double BW = 0.0;    // bits/s
  double T_C = 0.0;   // connected seconds per service period
  double x_y = 0.0;   // years
  double x_b = 0.0;   // blocks
  double x_s = 0.0;   // service periods
};

/// Equipment l_m d_m / x_m per year, rewards R per block, backhaul
/// C_BW T_C BW per service period.
double system_cost(const CostInputs& in);

/// P(X = k) for X the number of offline miners, miner i offline with
/// probability p[i]. Dynamic-programming convolution.
double poisson_binomial_pmf(std::span<const double> p, std::size_t k);

/// Whole PMF, index k = P(X = k).
std::vector<double> poisson_binomial_distribution(std::span<const double> p);

double expected_online(double l_m, double p_d);

/// Miners to install so that target miners are online on average.
double required_miners(double target_online, double p_d);

struct ProfitInputs {
  double R = 0.0;       // Tokens per block
  double eta = 0.0;     // Tokens per hash
  double h = 0.0;       // hashes/s per miner
  double mean_t = 0.0;  // E[T], seconds
  double l_m = 1.0;
};

/// Expected profit per mined block for one miner: R / l_m - eta h T.
double expected_profit(const ProfitInputs& in);

/// Largest miner count with strictly positive expected profit (0 if none).
std::uint64_t max_profitable_miners(double R, double eta, double h, double mean_t);

struct Connectivity {
  std::uint64_t l_c = 0;
  double gamma = 0.0;  // l_c / l_m
};

/// Nodes reachable within k hops when every node keeps l_c connections:
/// 1 + l_c sum_{i<k} (l_c - 1)^i, saturating at UINT64_MAX.
std::uint64_t reachable_within(std::uint64_t l_c, std::uint64_t k);

/// Smallest l_c in [1, l_m - 1] reaching l_m nodes within k hops.
Connectivity min_connections(std::uint64_t l_m, std::uint64_t k);

/// l_m,k,l_c,gamma for l_m in [lo, hi] and k in [1, max_k].
void write_connectivity_sweep(std::ostream& out, std::uint64_t lo, std::uint64_t hi,
                              std::uint64_t max_k);

struct ProcessingSample {
  std::vector<double> block_times;
  std::vector<double> tx_times;
  std::vector<std::size_t> tx_block;  // index into block_times of the including block
};

/// Monte Carlo of the processing model: exponential block intervals with
/// mean mean_t, Poisson arrivals at lambda_t, every arrival included in the
/// next block. Blocks are generated until `horizon_s`; arrivals after the
/// last block are dropped. Block and arrival draws use separate streams
/// derived from `seed`.
ProcessingSample simulate_tx_processing(double lambda_t, double mean_t, double horizon_s,
                                        std::uint64_t seed);

}  // namespace dtpay::models
