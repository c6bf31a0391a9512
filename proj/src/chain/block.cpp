// Copyright (c) 2026 The dtpay developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#include "dtpay/chain/block.hpp"

#include <bit>

#include "dtpay/common/rng.hpp"

namespace dtpay::chain {

BlockId make_block_id(NodeId miner, std::uint64_t number, double timestamp,
                      std::uint64_t nonce_seed) {
  std::uint64_t h = splitmix64(nonce_seed);
  h = splitmix64(h ^ miner.value());
  h = splitmix64(h ^ number);
  h = splitmix64(h ^ std::bit_cast<std::uint64_t>(timestamp));
  if (h == kNullBlock.value()) h = 1;
  return BlockId{h};
}

}  // namespace dtpay::chain
