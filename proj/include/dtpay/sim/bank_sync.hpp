// Copyright (c) 2026 The dtpay developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#pragma once

#include <cstdint>
#include <span>

namespace dtpay::sim {

struct SyncModel {
  double backhaul_bw_bps = 128000.0;
  std::uint64_t header_bits = 2000;
  double overhead_s_per_block = 0.005;
};

struct SyncPlan {
  std::uint64_t backlog_bits = 0;
  std::size_t backlog_blocks = 0;
  /// Full catch-up time: backlog_bits / bandwidth + overhead per block.
  double sync_delay_s = 0.0;
  /// Blocks fully downloaded and processed before the window closes.
  std::size_t blocks_completed = 0;
  /// Offset from window start at which the last completed block is in.
  double completed_offset_s = 0.0;
  bool complete = true;
};

/// Catch-up of the bank over the backhaul for a backlog of blocks given by
/// their transaction payload sizes (headers are added per block). Blocks
/// that do not finish inside `window_s` are left for the next window.
SyncPlan plan_bank_sync(std::span<const std::uint64_t> payload_bits, const SyncModel& model,
                        double window_s);

}  // namespace dtpay::sim
