// Copyright (c) 2026 The dtpay developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#include "dtpay/ledger/ledger.hpp"

#include <string>

#include "dtpay/chain/block.hpp"

namespace dtpay::ledger {

std::string_view to_string(TxKind kind) {
  switch (kind) {
    case TxKind::regular: return "regular";
    case TxKind::exchange_to_token: return "exchange_to_token";
    case TxKind::exchange_to_fiat: return "exchange_to_fiat";
  }
  return "unknown";
}

std::optional<TxKind> parse_tx_kind(std::string_view text) {
  if (text == "regular") return TxKind::regular;
  if (text == "exchange_to_token") return TxKind::exchange_to_token;
  if (text == "exchange_to_fiat") return TxKind::exchange_to_fiat;
  return std::nullopt;
}

std::string_view to_string(TxReject reason) {
  switch (reason) {
    case TxReject::insufficient_funds: return "insufficient-funds";
    case TxReject::unknown_account: return "unknown-account";
    case TxReject::malformed: return "malformed";
  }
  return "unknown";
}

std::uint64_t LedgerState::token_supply() const {
  std::uint64_t sum = 0;
  for (const auto& [id, acct] : accounts) sum += acct.token_balance;
  return sum;
}

std::uint64_t LedgerState::fiat_total() const {
  std::uint64_t sum = 0;
  for (const auto& [id, acct] : accounts) sum += acct.fiat_balance;
  return sum;
}

bool LedgerState::is_admitted(NodeId node) const {
  return admitted_users.count(node) != 0 || admitted_miners.count(node) != 0;
}

LedgerState make_ledger(NodeId bank, std::uint64_t reward_per_block) {
  LedgerState state;
  state.bank = bank;
  state.reward_per_block = reward_per_block;
  state.accounts.emplace(bank, Account{bank, 0, 0});
  return state;
}

LedgerState admit(LedgerState state, NodeId node, Role role) {
  if (node == state.bank) throw LedgerError("the bank cannot be admitted as a participant");
  auto& set = role == Role::miner ? state.admitted_miners : state.admitted_users;
  if (!set.insert(node).second) {
    throw LedgerError("node " + std::to_string(node.value()) + " already admitted in that role");
  }
  state.accounts.try_emplace(node, Account{node, 0, 0});
  return state;
}

LedgerState revoke_miner(LedgerState state, NodeId node) {
  if (state.admitted_miners.erase(node) == 0) {
    throw LedgerError("node " + std::to_string(node.value()) + " is not an admitted miner");
  }
  return state;
}

std::optional<TxReject> apply_transaction_in_place(LedgerState& state, const Transaction& tx) {
  if (tx.amount == 0) return TxReject::malformed;
  const NodeId bank = state.bank;

  if (tx.kind == TxKind::regular) {
    if (tx.sender == bank || tx.receiver == bank || tx.sender == tx.receiver) {
      return TxReject::malformed;
    }
    if (!state.is_admitted(tx.sender) || !state.is_admitted(tx.receiver)) {
      return TxReject::unknown_account;
    }
    Account& from = state.accounts.at(tx.sender);
    Account& to = state.accounts.at(tx.receiver);
    if (from.token_balance < tx.amount) return TxReject::insufficient_funds;
    from.token_balance -= tx.amount;
    to.token_balance += tx.amount;
    return std::nullopt;
  }

  // Exchange: the bank issues exchange_to_token to the customer and receives
  // exchange_to_fiat from the customer.
  const bool to_token = tx.kind == TxKind::exchange_to_token;
  const NodeId bank_side = to_token ? tx.sender : tx.receiver;
  const NodeId customer = to_token ? tx.receiver : tx.sender;
  if (bank_side != bank) return TxReject::malformed;
  if (customer != bank && !state.is_admitted(customer)) return TxReject::unknown_account;
  Account& acct = state.accounts.at(customer);
  if (to_token) {
    if (acct.fiat_balance < tx.amount) return TxReject::insufficient_funds;
    acct.fiat_balance -= tx.amount;
    acct.token_balance += tx.amount;
    state.tokens_exchanged_in += tx.amount;
  } else {
    if (acct.token_balance < tx.amount) return TxReject::insufficient_funds;
    acct.token_balance -= tx.amount;
    acct.fiat_balance += tx.amount;
    state.tokens_exchanged_out += tx.amount;
  }
  return std::nullopt;
}

Expected<LedgerState, TxReject> apply_transaction(const LedgerState& state, const Transaction& tx) {
  LedgerState next = state;
  if (auto reject = apply_transaction_in_place(next, tx)) return unexpected(*reject);
  return next;
}

LedgerState reward_miner(LedgerState state, NodeId miner) {
  if (state.admitted_miners.count(miner) == 0) {
    throw LedgerError("reward for non-admitted miner " + std::to_string(miner.value()));
  }
  if (state.reward_per_block == 0) return state;
  state.accounts.at(miner).token_balance += state.reward_per_block;
  state.total_rewards_paid += state.reward_per_block;
  return state;
}

LedgerState apply_block(LedgerState state, const chain::Block& block) {
  const std::uint64_t number = block.header.number;
  if (number == 0 || state.applied_block_number + 1 != number) {
    throw LedgerError("block " + std::to_string(number) + " applied out of order (ledger at " +
                      std::to_string(state.applied_block_number) + ")");
  }
  for (const auto& tx : block.transactions) {
    if (auto reject = apply_transaction_in_place(state, tx)) {
      throw LedgerError("block " + std::to_string(number) + " carries invalid transaction " +
                        std::to_string(tx.id.value()) + ": " + std::string(to_string(*reject)));
    }
  }
  state = reward_miner(std::move(state), block.header.miner);
  state.applied_block_number = number;
  return state;
}

}  // namespace dtpay::ledger
