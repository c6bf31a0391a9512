// Copyright (c) 2026 The dtpay developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string_view>

#include "dtpay/common/expected.hpp"
#include "dtpay/common/ids.hpp"
#include "dtpay/ledger/transaction.hpp"

namespace dtpay::chain {
struct Block;
}

namespace dtpay::ledger {

enum class Role : std::uint8_t { miner, user };

struct Account {
  NodeId owner{};
  std::uint64_t fiat_balance = 0;   // fiat cents
  std::uint64_t token_balance = 0;  // Tokens

  friend bool operator==(const Account&, const Account&) = default;
};

/// State of the user balance contract. The bank holds an account like any
/// other node. Tokens enter circulation only through exchange_to_token and
/// block rewards, and leave only through exchange_to_fiat.
struct LedgerState {
  NodeId bank{};
  std::map<NodeId, Account> accounts;
  std::set<NodeId> admitted_miners;
  std::set<NodeId> admitted_users;
  std::uint64_t reward_per_block = 0;
  std::uint64_t total_rewards_paid = 0;
  std::uint64_t applied_block_number = 0;
  std::uint64_t tokens_exchanged_in = 0;
  std::uint64_t tokens_exchanged_out = 0;

  std::uint64_t token_supply() const;
  std::uint64_t fiat_total() const;
  bool is_admitted(NodeId node) const;

  friend bool operator==(const LedgerState&, const LedgerState&) = default;
};

/// Thrown when a caller breaks an operation's precondition (duplicate
/// admission, rewarding an unknown miner, out-of-order block).
class LedgerError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

enum class TxReject { insufficient_funds, unknown_account, malformed };

std::string_view to_string(TxReject reason);

/// Fresh ledger holding only the bank's account.
LedgerState make_ledger(NodeId bank, std::uint64_t reward_per_block);

LedgerState admit(LedgerState state, NodeId node, Role role);

/// Sanction for a misbehaving miner: drops it from the admitted set. The
/// account and its balances stay.
LedgerState revoke_miner(LedgerState state, NodeId node);

/// In-place variant used on hot paths; leaves `state` untouched on rejection.
std::optional<TxReject> apply_transaction_in_place(LedgerState& state, const Transaction& tx);

Expected<LedgerState, TxReject> apply_transaction(const LedgerState& state,
                                                  const Transaction& tx);

LedgerState reward_miner(LedgerState state, NodeId miner);

/// Applies every transaction in order, then pays the block reward to the
/// miner. Requires state.applied_block_number == block number - 1 and every
/// transaction to be valid (i.e. a validated block).
LedgerState apply_block(LedgerState state, const chain::Block& block);

}  // namespace dtpay::ledger
