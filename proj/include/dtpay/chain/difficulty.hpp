// Copyright (c) 2026 The dtpay developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#pragma once

#include <cstdint>

namespace dtpay::chain {

inline constexpr std::uint64_t kMinimumDifficulty = 1024;
inline constexpr std::uint64_t kDifficultyBoundDivisor = 2048;

/// Homestead multiplier for a timestamp gap:
///   gap < 10 s        -> +1
///   10 s <= gap < 20  ->  0
///   gap >= 20         -> max(-99, 1 - floor(gap / 10))
/// Throws std::invalid_argument for gap <= 0.
int difficulty_multiplier(double timestamp_gap);

/// parent + (parent / 2048) * multiplier, floored at kMinimumDifficulty.
/// Requires block_timestamp > parent_timestamp.
std::uint64_t adjust_difficulty(std::uint64_t parent_difficulty, double parent_timestamp,
                                double block_timestamp);

}  // namespace dtpay::chain
