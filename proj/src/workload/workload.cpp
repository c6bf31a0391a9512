// Copyright (c) 2026 The dtpay developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#include "dtpay/workload/workload.hpp"

#include <algorithm>
#include <charconv>
#include <string>

#include "dtpay/common/format.hpp"

namespace dtpay::workload {

namespace {

using ledger::Transaction;
using ledger::TxKind;

std::uint64_t draw_amount(const WorkloadConfig& config, Rng& rng) {
  return rng.uniform_int(config.amount_min, config.amount_max);
}

NodeId draw_user(const Participants& who, Rng& rng) {
  return who.users[rng.uniform_int(0, who.users.size() - 1)];
}

}  // namespace

std::vector<Transaction> generate(const WorkloadConfig& config, const Participants& who,
                                  double horizon_s, std::span<const TimeWindow> connected_windows,
                                  Rng& rng) {
  if (!(horizon_s > 0.0)) throw std::invalid_argument("generate: horizon must be positive");
  if (config.lambda_t < 0.0 || config.lambda_e < 0.0) {
    throw std::invalid_argument("generate: negative arrival rate");
  }
  if (config.amount_min == 0 || config.amount_max < config.amount_min) {
    throw std::invalid_argument("generate: bad amount range");
  }

  std::vector<Transaction> txs;
  if (config.lambda_t > 0.0) {
    if (who.users.size() < 2) throw std::invalid_argument("generate: need at least two users");
    for (double t = rng.exponential(config.lambda_t); t < horizon_s;
         t += rng.exponential(config.lambda_t)) {
      Transaction tx;
      tx.kind = TxKind::regular;
      tx.created_at = t;
      tx.size_bits = config.s_t_bits;
      tx.sender = draw_user(who, rng);
      do {
        tx.receiver = draw_user(who, rng);
      } while (tx.receiver == tx.sender);
      tx.amount = draw_amount(config, rng);
      txs.push_back(tx);
    }
  }

  if (config.lambda_e > 0.0 && !connected_windows.empty()) {
    if (who.users.empty()) throw std::invalid_argument("generate: no exchange customers");
    for (const auto& window : connected_windows) {
      const double end = std::min(window.end_s, horizon_s);
      for (double t = window.start_s + rng.exponential(config.lambda_e); t < end;
           t += rng.exponential(config.lambda_e)) {
        Transaction tx;
        tx.created_at = t;
        tx.size_bits = config.s_e_bits;
        const NodeId customer = draw_user(who, rng);
        if (rng.bernoulli(config.exchange_to_token_share)) {
          tx.kind = TxKind::exchange_to_token;
          tx.sender = who.bank;
          tx.receiver = customer;
        } else {
          tx.kind = TxKind::exchange_to_fiat;
          tx.sender = customer;
          tx.receiver = who.bank;
        }
        tx.amount = draw_amount(config, rng);
        txs.push_back(tx);
      }
    }
  }

  std::stable_sort(txs.begin(), txs.end(), [](const Transaction& a, const Transaction& b) {
    return a.created_at < b.created_at;
  });
  for (std::size_t i = 0; i < txs.size(); ++i) txs[i].id = TxId{i + 1};
  return txs;
}

WorkloadFormatError::WorkloadFormatError(std::size_t line, const std::string& what)
    : std::runtime_error("workload line " + std::to_string(line) + ": " + what), line_(line) {}

void write_workload_csv(std::ostream& out, std::span<const ledger::Transaction> txs) {
  out << "id,kind,sender,receiver,amount,size_bits,created_at\n";
  for (const auto& tx : txs) {
    out << tx.id.value() << ',' << ledger::to_string(tx.kind) << ',' << tx.sender.value() << ','
        << tx.receiver.value() << ',' << tx.amount << ',' << tx.size_bits << ','
        << format_double(tx.created_at) << '\n';
  }
}

namespace {

template <typename T>
T parse_field(std::string_view text, std::size_t line, const char* name) {
  T value{};
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size()) {
    throw WorkloadFormatError(line, std::string("bad ") + name + " '" + std::string(text) + "'");
  }
  return value;
}

}  // namespace

std::vector<ledger::Transaction> read_workload_csv(std::istream& in) {
  std::vector<ledger::Transaction> txs;
  std::string line;
  std::size_t line_no = 0;
  double last_created = -1.0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string_view row = trim(line);
    if (row.empty()) continue;
    if (line_no == 1 && row.starts_with("id,")) continue;
    std::vector<std::string_view> cols;
    std::size_t pos = 0;
    while (true) {
      const auto comma = row.find(',', pos);
      cols.push_back(row.substr(pos, comma == std::string_view::npos ? row.npos : comma - pos));
      if (comma == std::string_view::npos) break;
      pos = comma + 1;
    }
    if (cols.size() != 7) throw WorkloadFormatError(line_no, "expected 7 columns");
    ledger::Transaction tx;
    tx.id = TxId{parse_field<std::uint64_t>(cols[0], line_no, "id")};
    const auto kind = ledger::parse_tx_kind(cols[1]);
    if (!kind) throw WorkloadFormatError(line_no, "unknown kind '" + std::string(cols[1]) + "'");
    tx.kind = *kind;
    tx.sender = NodeId{parse_field<std::uint32_t>(cols[2], line_no, "sender")};
    tx.receiver = NodeId{parse_field<std::uint32_t>(cols[3], line_no, "receiver")};
    tx.amount = parse_field<std::uint64_t>(cols[4], line_no, "amount");
    tx.size_bits = parse_field<std::uint64_t>(cols[5], line_no, "size_bits");
    tx.created_at = parse_field<double>(cols[6], line_no, "created_at");
    if (tx.id.value() != txs.size() + 1) throw WorkloadFormatError(line_no, "ids must run 1..n");
    if (tx.created_at < last_created) throw WorkloadFormatError(line_no, "created_at decreases");
    last_created = tx.created_at;
    txs.push_back(tx);
  }
  return txs;
}

}  // namespace dtpay::workload
