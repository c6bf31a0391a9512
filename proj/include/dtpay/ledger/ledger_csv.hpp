// Copyright (c) 2026 The dtpay developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#pragma once

#include <ostream>

#include "dtpay/ledger/ledger.hpp"

namespace dtpay::ledger {

/// node_id,fiat_balance,token_balance,role  (role: bank|miner|user|miner+user|none)
void write_ledger_csv(std::ostream& out, const LedgerState& state);

}  // namespace dtpay::ledger
