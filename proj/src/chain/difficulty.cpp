// Copyright (c) 2026 The dtpay developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#include "dtpay/chain/difficulty.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace dtpay::chain {

int difficulty_multiplier(double timestamp_gap) {
  if (!(timestamp_gap > 0.0)) {
    throw std::invalid_argument("difficulty_multiplier: block timestamp must exceed parent's");
  }
  if (timestamp_gap < 10.0) return 1;
  if (timestamp_gap < 20.0) return 0;
  if (timestamp_gap >= 1000.0) return -99;
  const int steps = static_cast<int>(std::floor(timestamp_gap / 10.0));
  return std::max(-99, 1 - steps);
}

std::uint64_t adjust_difficulty(std::uint64_t parent_difficulty, double parent_timestamp,
                                double block_timestamp) {
  if (parent_difficulty == 0) throw std::invalid_argument("adjust_difficulty: zero difficulty");
  const int a = difficulty_multiplier(block_timestamp - parent_timestamp);
  const std::uint64_t step = parent_difficulty / kDifficultyBoundDivisor;
  std::uint64_t next = parent_difficulty;
  if (a >= 0) {
    next += step * static_cast<std::uint64_t>(a);
  } else {
    const std::uint64_t down = step * static_cast<std::uint64_t>(-a);
    next = down >= next ? 0 : next - down;
  }
  return std::max(next, kMinimumDifficulty);
}

}  // namespace dtpay::chain
