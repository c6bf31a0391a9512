// Copyright (c) 2026 The dtpay developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#pragma once

#include <cstdint>
#include <limits>
#include <memory>
#include <vector>

#include "dtpay/common/ids.hpp"
#include "dtpay/ledger/transaction.hpp"

namespace dtpay::chain {

inline constexpr std::uint64_t kUnlimitedCapacity = std::numeric_limits<std::uint64_t>::max();

struct BlockHeader {
  std::uint64_t number = 0;
  BlockId parent_id = kNullBlock;
  double timestamp = 0.0;  // simulated seconds
  std::uint64_t difficulty = 0;
  NodeId miner = kNoNode;
  /// Transaction payload limit, inherited from genesis like a gas limit.
  std::uint64_t capacity_bits = kUnlimitedCapacity;

  friend bool operator==(const BlockHeader&, const BlockHeader&) = default;
};

struct Block {
  BlockId id{};
  BlockHeader header;
  std::vector<ledger::Transaction> transactions;

  std::uint64_t payload_bits() const {
    std::uint64_t bits = 0;
    for (const auto& tx : transactions) bits += tx.size_bits;
    return bits;
  }

  friend bool operator==(const Block&, const Block&) = default;
};

/// Blocks are immutable once mined and shared between node views.
using BlockPtr = std::shared_ptr<const Block>;

/// Identity digest over (miner, number, timestamp, nonce seed). Never returns
/// kNullBlock.
BlockId make_block_id(NodeId miner, std::uint64_t number, double timestamp,
                      std::uint64_t nonce_seed);

}  // namespace dtpay::chain
