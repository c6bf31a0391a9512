// Copyright (c) 2026 The dtpay developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <vector>

#include "dtpay/chain/block.hpp"
#include "dtpay/ledger/ledger.hpp"
#include "dtpay/sim/types.hpp"

namespace dtpay::sim {

struct BlockRecord {
  chain::BlockPtr block;
  double found_at = 0.0;
  bool stale = false;
};

struct TxRecord {
  ledger::Transaction tx;
  std::optional<double> included_at;  // canonical block timestamp
  std::optional<BlockId> block;
  std::optional<std::uint64_t> block_number;
};

struct SyncEpisode {
  double window_start = 0.0;
  double window_end = 0.0;
  double disconnected_s = 0.0;
  std::uint64_t backlog_bits = 0;
  std::size_t backlog_blocks = 0;
  double sync_delay_s = 0.0;
  std::size_t blocks_applied = 0;
  bool complete = true;
};

struct Reorg {
  double at = 0.0;
  NodeId node{};
  std::uint64_t depth = 0;  // blocks disconnected from the old branch
  std::uint64_t old_height = 0;
  std::uint64_t new_height = 0;
};

/// A block reaching the observer node, in arrival order.
struct Arrival {
  double at = 0.0;
  BlockId block{};
};

struct OnlineSample {
  double at = 0.0;
  std::uint32_t miners_online = 0;
};

struct NodeFinal {
  NodeId id{};
  NodeRole role = NodeRole::full;
  bool online = true;
  BlockId head{};
  std::vector<BlockId> canonical;  // genesis first
};

struct SimCounters {
  std::uint64_t events = 0;
  std::uint64_t messages_sent = 0;
  std::uint64_t messages_dropped = 0;
  std::uint64_t rejected_blocks = 0;
  std::uint64_t orphans_buffered = 0;
};

struct SimTrace {
  double horizon_s = 0.0;
  NodeId observer{};
  chain::BlockPtr genesis;
  ledger::LedgerState genesis_state;
  std::vector<BlockRecord> blocks;      // genesis excluded, creation order
  std::vector<BlockId> canonical;       // global canonical chain, genesis first
  std::vector<TxRecord> txs;            // id order
  std::vector<SyncEpisode> sync;
  std::vector<Reorg> reorgs;
  std::vector<Arrival> observer_arrivals;
  std::vector<OnlineSample> online;
  std::vector<NodeFinal> nodes;
  /// Post-state of the global canonical head as computed by the engine.
  ledger::LedgerState final_state;
  SimCounters counters;

  const BlockRecord* find(BlockId id) const;
};

/// number,id,parent,miner,timestamp,difficulty,stale
void write_blocks_csv(std::ostream& out, const SimTrace& trace);
/// id,kind,created_at,included_at,block
void write_txs_csv(std::ostream& out, const SimTrace& trace);
/// window_start,disconnected_s,backlog_bits,sync_delay_s
void write_sync_csv(std::ostream& out, const SimTrace& trace);
/// at,node,depth,old_height,new_height
void write_reorgs_csv(std::ostream& out, const SimTrace& trace);

}  // namespace dtpay::sim
