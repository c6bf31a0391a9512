// Copyright (c) 2026 The dtpay developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#include "dtpay/sim/mining.hpp"

namespace dtpay::sim {

std::optional<double> sample_block_interval(std::uint64_t difficulty, double online_hashrate,
                                            Rng& rng) {
  if (!(online_hashrate > 0.0)) return std::nullopt;
  return rng.unit_exponential() * static_cast<double>(difficulty) / online_hashrate;
}

}  // namespace dtpay::sim
