// Copyright (c) 2026 The dtpay developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#include "dtpay/ledger/ledger_csv.hpp"

namespace dtpay::ledger {

void write_ledger_csv(std::ostream& out, const LedgerState& state) {
  out << "node_id,fiat_balance,token_balance,role\n";
  for (const auto& [id, acct] : state.accounts) {
    const bool miner = state.admitted_miners.count(id) != 0;
    const bool user = state.admitted_users.count(id) != 0;
    const char* role = id == state.bank ? "bank"
                       : miner && user  ? "miner+user"
                       : miner          ? "miner"
                       : user           ? "user"
                                        : "none";
    out << id.value() << ',' << acct.fiat_balance << ',' << acct.token_balance << ',' << role
        << '\n';
  }
}

}  // namespace dtpay::ledger
