// Copyright (c) 2026 The dtpay developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#pragma once

#include <cstdint>
#include <optional>
#include <string_view>

#include "dtpay/common/ids.hpp"

namespace dtpay::ledger {

/// regular: peer-to-peer token transfer settled by miners at any time.
/// exchange_to_token / exchange_to_fiat: bank-issued conversion between a
/// customer's fiat account and token account, only mined while the bank is
/// connected.
enum class TxKind : std::uint8_t { regular, exchange_to_token, exchange_to_fiat };

struct Transaction {
  TxId id{};
  TxKind kind = TxKind::regular;
  NodeId sender{};
  NodeId receiver{};
  std::uint64_t amount = 0;  // Tokens, or fiat cents for exchange kinds (1:1)
  std::uint64_t size_bits = 0;
  double created_at = 0.0;

  bool is_exchange() const { return kind != TxKind::regular; }

  friend bool operator==(const Transaction&, const Transaction&) = default;
};

std::string_view to_string(TxKind kind);
std::optional<TxKind> parse_tx_kind(std::string_view text);

}  // namespace dtpay::ledger
