// Copyright (c) 2026 The dtpay developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#pragma once

#include <cstdint>

#include "dtpay/chain/block.hpp"

namespace dtpay::chain {

struct GenesisConfig {
  std::uint64_t nonce_seed = 0x42;
  std::uint64_t initial_difficulty = 0x400000;
  std::uint64_t block_capacity_bits = kUnlimitedCapacity;

  friend bool operator==(const GenesisConfig&, const GenesisConfig&) = default;
};

/// Block 0: null parent, timestamp 0, no transactions.
/// Throws std::invalid_argument if initial_difficulty is below the floor.
Block make_genesis(const GenesisConfig& config);

}  // namespace dtpay::chain
