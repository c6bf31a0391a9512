// Copyright (c) 2026 The dtpay developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#include "dtpay/chain/genesis.hpp"

#include <stdexcept>

#include "dtpay/chain/difficulty.hpp"

namespace dtpay::chain {

Block make_genesis(const GenesisConfig& config) {
  if (config.initial_difficulty < kMinimumDifficulty) {
    throw std::invalid_argument("genesis difficulty below minimum");
  }
  if (config.block_capacity_bits == 0) {
    throw std::invalid_argument("genesis block capacity must be positive");
  }
  Block genesis;
  genesis.header.number = 0;
  genesis.header.parent_id = kNullBlock;
  genesis.header.timestamp = 0.0;
  genesis.header.difficulty = config.initial_difficulty;
  genesis.header.miner = kNoNode;
  genesis.header.capacity_bits = config.block_capacity_bits;
  genesis.id = make_block_id(kNoNode, 0, 0.0, config.nonce_seed);
  return genesis;
}

}  // namespace dtpay::chain
