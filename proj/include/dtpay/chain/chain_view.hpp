// Copyright (c) 2026 The dtpay developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#pragma once

#include <cstdint>
#include <set>
#include <stdexcept>
#include <unordered_map>
#include <vector>

#include "dtpay/chain/block.hpp"

namespace dtpay::chain {

class UnknownBlock : public std::out_of_range {
 public:
  explicit UnknownBlock(BlockId id);
  BlockId id() const { return id_; }

 private:
  BlockId id_;
};

/// One node's block tree. Every block except genesis has its parent in the
/// view; the canonical head is the heaviest block by total difficulty, ties
/// going to the block received first (then the lower id, so the choice does
/// not depend on insertion order when receipt times coincide).
class ChainView {
 public:
  ChainView(BlockPtr genesis, double received_at = 0.0);

  bool contains(BlockId id) const { return entries_.count(id) != 0; }
  const Block& block(BlockId id) const { return *entry(id).block; }
  const BlockPtr& block_ptr(BlockId id) const { return entry(id).block; }
  double received_at(BlockId id) const { return entry(id).received_at; }
  std::uint64_t total_difficulty(BlockId id) const { return entry(id).total_difficulty; }

  /// Adds a block whose parent is present. Returns false if already known.
  /// Throws UnknownBlock if the parent is missing.
  bool insert(BlockPtr block, double received_at);

  BlockId genesis_id() const { return genesis_; }
  BlockId canonical_head() const { return canonical_; }
  const std::set<BlockId>& heads() const { return heads_; }
  std::size_t size() const { return entries_.size(); }

  /// Ids from genesis up to and including `head`.
  std::vector<BlockId> path_from_genesis(BlockId head) const;

  /// Ids of every block in the view, parents before children.
  std::vector<BlockId> ids_in_height_order() const;

  /// True if `a` should be preferred over `b` as canonical head.
  bool prefers(BlockId a, BlockId b) const;

 private:
  struct Entry {
    BlockPtr block;
    std::uint64_t total_difficulty = 0;
    double received_at = 0.0;
  };

  const Entry& entry(BlockId id) const;

  std::unordered_map<BlockId, Entry> entries_;
  std::set<BlockId> heads_;
  BlockId genesis_{};
  BlockId canonical_{};
};

/// Sum of difficulty over the path head -> genesis inclusive.
std::uint64_t total_difficulty(const ChainView& chain, BlockId head);

/// Head with maximum total difficulty, first-seen on ties. Throws
/// std::invalid_argument on a view with no heads.
BlockId select_canonical(const ChainView& chain);

}  // namespace dtpay::chain
