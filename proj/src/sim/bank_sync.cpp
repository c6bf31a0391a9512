// Copyright (c) 2026 The dtpay developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#include "dtpay/sim/bank_sync.hpp"

#include <stdexcept>

namespace dtpay::sim {

SyncPlan plan_bank_sync(std::span<const std::uint64_t> payload_bits, const SyncModel& model,
                        double window_s) {
  if (!(model.backhaul_bw_bps > 0.0)) throw std::invalid_argument("backhaul bandwidth must be > 0");
  SyncPlan plan;
  plan.backlog_blocks = payload_bits.size();
  double elapsed = 0.0;
  for (const std::uint64_t payload : payload_bits) {
    const std::uint64_t bits = model.header_bits + payload;
    plan.backlog_bits += bits;
    elapsed += static_cast<double>(bits) / model.backhaul_bw_bps + model.overhead_s_per_block;
    if (plan.complete && elapsed <= window_s) {
      ++plan.blocks_completed;
      plan.completed_offset_s = elapsed;
    } else {
      plan.complete = false;
    }
  }
  plan.sync_delay_s = static_cast<double>(plan.backlog_bits) / model.backhaul_bw_bps +
                      model.overhead_s_per_block * static_cast<double>(plan.backlog_blocks);
  return plan;
}

}  // namespace dtpay::sim
