// Copyright (c) 2026 The dtpay developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#pragma once

#include <cstdint>
#include <istream>
#include <ostream>
#include <span>
#include <stdexcept>
#include <vector>

#include "dtpay/common/ids.hpp"
#include "dtpay/common/rng.hpp"
#include "dtpay/common/time_window.hpp"
#include "dtpay/ledger/transaction.hpp"

namespace dtpay::workload {

struct WorkloadConfig {
  double lambda_t = 1.0;             // regular tx/s
  double lambda_e = 0.0;             // exchange tx/s inside connected windows
  std::uint64_t s_t_bits = 4000;     // regular tx size
  std::uint64_t s_e_bits = 4000;     // exchange tx size
  std::uint64_t amount_min = 1;
  std::uint64_t amount_max = 100;
  double exchange_to_token_share = 0.5;

  friend bool operator==(const WorkloadConfig&, const WorkloadConfig&) = default;
};

/// Who may appear in generated transactions.
struct Participants {
  std::vector<NodeId> users;  // regular senders/receivers and exchange customers
  NodeId bank{};
};

/// Poisson regular arrivals over [0, horizon) and Poisson exchange arrivals
/// restricted to `connected_windows`, merged in creation order with ids
/// 1..n. Regular draws come before exchange draws on `rng`, so changing
/// lambda_e leaves the regular stream untouched.
std::vector<ledger::Transaction> generate(const WorkloadConfig& config, const Participants& who,
                                          double horizon_s,
                                          std::span<const TimeWindow> connected_windows, Rng& rng);

class WorkloadFormatError : public std::runtime_error {
 public:
  WorkloadFormatError(std::size_t line, const std::string& what);
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

/// id,kind,sender,receiver,amount,size_bits,created_at
void write_workload_csv(std::ostream& out, std::span<const ledger::Transaction> txs);
std::vector<ledger::Transaction> read_workload_csv(std::istream& in);

}  // namespace dtpay::workload
