// Copyright (c) 2026 The dtpay developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#pragma once

#include <optional>
#include <string_view>

#include "dtpay/chain/block.hpp"
#include "dtpay/chain/chain_view.hpp"
#include "dtpay/ledger/ledger.hpp"

namespace dtpay::chain {

enum class RejectReason {
  unknown_parent,
  bad_number,
  bad_timestamp,
  bad_difficulty,
  bad_transaction,
  unauthorized_miner,
};

std::string_view to_string(RejectReason reason);

struct Verdict {
  std::optional<RejectReason> reject;

  bool accepted() const { return !reject.has_value(); }
  static Verdict accept() { return {}; }
  static Verdict rejected(RejectReason reason) { return {reason}; }
};

/// Structural checks a header-only (SPV) node can make: parent known,
/// number and timestamp ordering, difficulty retarget.
Verdict validate_header(const BlockHeader& header, const ChainView& chain);

/// Full check against the ledger state after the parent block: header rules,
/// admitted miner, every transaction applies in order, payload within the
/// capacity limit.
Verdict validate_block(const Block& block, const ChainView& chain,
                       const ledger::LedgerState& parent_state);

}  // namespace dtpay::chain
