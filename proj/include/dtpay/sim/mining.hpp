// Copyright (c) 2026 The dtpay developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#pragma once

#include <cstdint>
#include <optional>

#include "dtpay/common/rng.hpp"

namespace dtpay::sim {

/// Time to the next block when `online_hashrate` hashes/s work against a
/// fixed difficulty: Exponential with mean difficulty / online_hashrate.
/// Returns nullopt when nobody is mining.
std::optional<double> sample_block_interval(std::uint64_t difficulty, double online_hashrate,
                                            Rng& rng);

}  // namespace dtpay::sim
