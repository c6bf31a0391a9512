// Copyright (c) 2026 The dtpay developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#include "dtpay/chain/validation.hpp"

#include "dtpay/chain/difficulty.hpp"

namespace dtpay::chain {

std::string_view to_string(RejectReason reason) {
  switch (reason) {
    case RejectReason::unknown_parent: return "unknown-parent";
    case RejectReason::bad_number: return "bad-number";
    case RejectReason::bad_timestamp: return "bad-timestamp";
    case RejectReason::bad_difficulty: return "bad-difficulty";
    case RejectReason::bad_transaction: return "bad-transaction";
    case RejectReason::unauthorized_miner: return "unauthorized-miner";
  }
  return "unknown";
}

Verdict validate_header(const BlockHeader& header, const ChainView& chain) {
  if (header.parent_id == kNullBlock || !chain.contains(header.parent_id)) {
    return Verdict::rejected(RejectReason::unknown_parent);
  }
  const BlockHeader& parent = chain.block(header.parent_id).header;
  if (header.number != parent.number + 1) return Verdict::rejected(RejectReason::bad_number);
  if (!(header.timestamp > parent.timestamp)) return Verdict::rejected(RejectReason::bad_timestamp);
  if (header.difficulty != adjust_difficulty(parent.difficulty, parent.timestamp, header.timestamp)) {
    return Verdict::rejected(RejectReason::bad_difficulty);
  }
  if (header.capacity_bits != parent.capacity_bits) {
    return Verdict::rejected(RejectReason::bad_transaction);
  }
  return Verdict::accept();
}

Verdict validate_block(const Block& block, const ChainView& chain,
                       const ledger::LedgerState& parent_state) {
  if (Verdict v = validate_header(block.header, chain); !v.accepted()) return v;
  if (parent_state.admitted_miners.count(block.header.miner) == 0) {
    return Verdict::rejected(RejectReason::unauthorized_miner);
  }
  if (block.payload_bits() > block.header.capacity_bits) {
    return Verdict::rejected(RejectReason::bad_transaction);
  }
  ledger::LedgerState scratch = parent_state;
  for (const auto& tx : block.transactions) {
    if (ledger::apply_transaction_in_place(scratch, tx)) {
      return Verdict::rejected(RejectReason::bad_transaction);
    }
  }
  return Verdict::accept();
}

}  // namespace dtpay::chain
