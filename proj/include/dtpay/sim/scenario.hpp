// Copyright (c) 2026 The dtpay developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "dtpay/chain/genesis.hpp"
#include "dtpay/ledger/ledger.hpp"
#include "dtpay/sim/types.hpp"
#include "dtpay/workload/workload.hpp"

namespace dtpay::sim {

/// Node population. Ids are assigned miners first, then full nodes, then the
/// bank, then light nodes.
struct NodeLayout {
  std::uint32_t miners = 10;
  std::uint32_t full = 0;
  std::uint32_t light = 10;
  bool bank = true;
  /// 0x400000 / (10 * 14.4 s): ten miners start at the retarget equilibrium.
  double miner_hashrate_hps = 29127.0;
  /// Relaying nodes each light node attaches to (generated topologies only).
  std::uint32_t light_uplinks = 2;

  friend bool operator==(const NodeLayout&, const NodeLayout&) = default;
};

struct LedgerSetup {
  std::uint64_t reward_per_block = 5;
  std::uint64_t initial_fiat = 1'000'000;
  std::uint64_t initial_tokens = 100'000;

  friend bool operator==(const LedgerSetup&, const LedgerSetup&) = default;
};

struct Scenario {
  chain::GenesisConfig genesis;
  NodeLayout nodes;
  Topology topology;
  DisturbanceProfile disturbance;
  BankSchedule bank;
  workload::WorkloadConfig workload;
  LedgerSetup ledger;
  std::string workload_replay;  // CSV path; empty means generate
  double horizon_s = 7200.0;
  /// No blocks are found at or after this time; lets gossip settle.
  std::optional<double> mining_stop_s;
  std::uint64_t seed = 0;
  std::optional<NodeId> observer;
  double measurement_interval_s = 60.0;
  /// Moving-average length applied to the observer block-time series.
  std::uint32_t smoothing_window = 5;

  friend bool operator==(const Scenario&, const Scenario&) = default;
};

struct ScenarioIssue {
  std::string field;  // "section.key"
  std::string message;
};

std::vector<ScenarioIssue> validate(const Scenario& scenario);

/// Node specs with peer sets filled in from the topology.
std::vector<NodeSpec> materialize_nodes(const Scenario& scenario);

std::optional<NodeId> bank_node(const Scenario& scenario);
std::vector<NodeId> miner_nodes(const Scenario& scenario);
/// Workload participants: full and light nodes.
std::vector<NodeId> user_nodes(const Scenario& scenario);
NodeId observer_node(const Scenario& scenario);

/// Ledger at genesis: miners and users admitted, users funded with fiat and
/// an opening fiat-to-token exchange.
ledger::LedgerState genesis_ledger(const Scenario& scenario);

}  // namespace dtpay::sim
