// Copyright (c) 2026 The dtpay developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#include "dtpay/sim/trace.hpp"

#include "dtpay/common/format.hpp"

namespace dtpay::sim {

const BlockRecord* SimTrace::find(BlockId id) const {
  for (const auto& rec : blocks) {
    if (rec.block->id == id) return &rec;
  }
  return nullptr;
}

namespace {

void write_block_row(std::ostream& out, const chain::Block& b, bool stale) {
  const auto& h = b.header;
  out << h.number << ',' << format_hex64(b.id.value()) << ','
      << (h.number == 0 ? std::string() : format_hex64(h.parent_id.value())) << ',';
  if (h.miner != kNoNode) out << h.miner.value();
  out << ',' << format_double(h.timestamp) << ',' << h.difficulty << ',' << (stale ? 1 : 0)
      << '\n';
}

}  // namespace

void write_blocks_csv(std::ostream& out, const SimTrace& trace) {
  out << "number,id,parent,miner,timestamp,difficulty,stale\n";
  if (trace.genesis) write_block_row(out, *trace.genesis, false);
  for (const auto& rec : trace.blocks) write_block_row(out, *rec.block, rec.stale);
}

void write_txs_csv(std::ostream& out, const SimTrace& trace) {
  out << "id,kind,created_at,included_at,block\n";
  for (const auto& rec : trace.txs) {
    out << rec.tx.id.value() << ',' << ledger::to_string(rec.tx.kind) << ','
        << format_double(rec.tx.created_at) << ',';
    if (rec.included_at) out << format_double(*rec.included_at);
    out << ',';
    if (rec.block) out << format_hex64(rec.block->value());
    out << '\n';
  }
}

void write_sync_csv(std::ostream& out, const SimTrace& trace) {
  out << "window_start,disconnected_s,backlog_bits,sync_delay_s\n";
  for (const auto& ep : trace.sync) {
    out << format_double(ep.window_start) << ',' << format_double(ep.disconnected_s) << ','
        << ep.backlog_bits << ',' << format_double(ep.sync_delay_s) << '\n';
  }
}

void write_reorgs_csv(std::ostream& out, const SimTrace& trace) {
  out << "at,node,depth,old_height,new_height\n";
  for (const auto& r : trace.reorgs) {
    out << format_double(r.at) << ',' << r.node.value() << ',' << r.depth << ','
        << r.old_height << ',' << r.new_height << '\n';
  }
}

}  // namespace dtpay::sim
