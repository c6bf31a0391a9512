// Copyright (c) 2026 The dtpay developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#pragma once

#include <compare>
#include <cstdint>
#include <functional>

namespace dtpay {

/// Thin wrapper that keeps node, block and transaction identifiers from
/// being mixed up with each other or with plain counters.
template <typename Tag, typename Rep>
class StrongId {
 public:
  using rep_type = Rep;

  constexpr StrongId() = default;
  constexpr explicit StrongId(Rep value) : value_(value) {}

  constexpr Rep value() const { return value_; }

  friend constexpr bool operator==(StrongId, StrongId) = default;
  friend constexpr auto operator<=>(StrongId, StrongId) = default;

 private:
  Rep value_{};
};

using NodeId = StrongId<struct NodeIdTag, std::uint32_t>;
using BlockId = StrongId<struct BlockIdTag, std::uint64_t>;
using TxId = StrongId<struct TxIdTag, std::uint64_t>;

/// Parent of the genesis block.
inline constexpr BlockId kNullBlock{0};
/// Miner field of the genesis block.
inline constexpr NodeId kNoNode{0xffffffffu};

}  // namespace dtpay

template <typename Tag, typename Rep>
struct std::hash<dtpay::StrongId<Tag, Rep>> {
  std::size_t operator()(dtpay::StrongId<Tag, Rep> id) const noexcept {
    return std::hash<Rep>{}(id.value());
  }
};
