// Copyright (c) 2026 The dtpay developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#include "dtpay/chain/chain_view.hpp"

#include <algorithm>
#include <tuple>

#include "dtpay/common/format.hpp"

namespace dtpay::chain {

UnknownBlock::UnknownBlock(BlockId id)
    : std::out_of_range("unknown block " + format_hex64(id.value())), id_(id) {}

ChainView::ChainView(BlockPtr genesis, double received_at) {
  if (!genesis) throw std::invalid_argument("ChainView: null genesis");
  genesis_ = genesis->id;
  canonical_ = genesis->id;
  const auto difficulty = genesis->header.difficulty;
  entries_.emplace(genesis_, Entry{std::move(genesis), difficulty, received_at});
  heads_.insert(genesis_);
}

const ChainView::Entry& ChainView::entry(BlockId id) const {
  const auto it = entries_.find(id);
  if (it == entries_.end()) throw UnknownBlock(id);
  return it->second;
}

bool ChainView::prefers(BlockId a, BlockId b) const {
  const Entry& ea = entry(a);
  const Entry& eb = entry(b);
  if (ea.total_difficulty != eb.total_difficulty) return ea.total_difficulty > eb.total_difficulty;
  if (ea.received_at != eb.received_at) return ea.received_at < eb.received_at;
  return a < b;
}

bool ChainView::insert(BlockPtr block, double received_at) {
  if (!block) throw std::invalid_argument("ChainView::insert: null block");
  if (contains(block->id)) return false;
  const BlockId parent = block->header.parent_id;
  const Entry& parent_entry = entry(parent);
  const BlockId id = block->id;
  const std::uint64_t total = parent_entry.total_difficulty + block->header.difficulty;
  entries_.emplace(id, Entry{std::move(block), total, received_at});
  heads_.erase(parent);
  heads_.insert(id);
  if (prefers(id, canonical_)) canonical_ = id;
  return true;
}

std::vector<BlockId> ChainView::path_from_genesis(BlockId head) const {
  std::vector<BlockId> path;
  BlockId cur = head;
  while (true) {
    const Block& b = block(cur);
    path.push_back(cur);
    if (cur == genesis_) break;
    cur = b.header.parent_id;
  }
  std::reverse(path.begin(), path.end());
  return path;
}

std::vector<BlockId> ChainView::ids_in_height_order() const {
  std::vector<std::pair<std::uint64_t, BlockId>> keyed;
  keyed.reserve(entries_.size());
  for (const auto& [id, e] : entries_) keyed.emplace_back(e.block->header.number, id);
  std::sort(keyed.begin(), keyed.end());
  std::vector<BlockId> ids;
  ids.reserve(keyed.size());
  for (const auto& [n, id] : keyed) ids.push_back(id);
  return ids;
}

std::uint64_t total_difficulty(const ChainView& chain, BlockId head) {
  return chain.total_difficulty(head);
}

BlockId select_canonical(const ChainView& chain) {
  const auto& heads = chain.heads();
  if (heads.empty()) throw std::invalid_argument("select_canonical: empty chain");
  BlockId best = *heads.begin();
  for (BlockId h : heads) {
    if (chain.prefers(h, best)) best = h;
  }
  return best;
}

}  // namespace dtpay::chain
