// Copyright (c) 2026 The dtpay developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#include "dtpay/sim/scenario.hpp"

#include <algorithm>
#include <set>
#include <string>

#include "dtpay/chain/difficulty.hpp"

namespace dtpay::sim {

namespace {

std::uint32_t node_count(const NodeLayout& n) {
  return n.miners + n.full + (n.bank ? 1u : 0u) + n.light;
}

std::vector<NodeId> id_range(std::uint32_t first, std::uint32_t count) {
  std::vector<NodeId> ids;
  for (std::uint32_t i = 0; i < count; ++i) ids.push_back(NodeId{first + i});
  return ids;
}

}  // namespace

std::vector<NodeId> miner_nodes(const Scenario& s) { return id_range(0, s.nodes.miners); }

std::optional<NodeId> bank_node(const Scenario& s) {
  if (!s.nodes.bank) return std::nullopt;
  return NodeId{s.nodes.miners + s.nodes.full};
}

std::vector<NodeId> user_nodes(const Scenario& s) {
  auto users = id_range(s.nodes.miners, s.nodes.full);
  const std::uint32_t first_light = s.nodes.miners + s.nodes.full + (s.nodes.bank ? 1u : 0u);
  for (NodeId id : id_range(first_light, s.nodes.light)) users.push_back(id);
  return users;
}

NodeId observer_node(const Scenario& s) {
  if (s.observer) return *s.observer;
  if (s.nodes.full > 0) return NodeId{s.nodes.miners};
  return NodeId{s.nodes.miners - 1};
}

std::vector<ScenarioIssue> validate(const Scenario& s) {
  std::vector<ScenarioIssue> issues;
  auto fail = [&](std::string field, std::string message) {
    issues.push_back({std::move(field), std::move(message)});
  };
  const std::uint32_t total = node_count(s.nodes);
  auto declared = [&](NodeId id) { return id.value() < total; };

  if (!(s.horizon_s > 0.0)) fail("run.horizon_s", "must be positive");
  if (!(s.measurement_interval_s > 0.0)) fail("run.measurement_interval_s", "must be positive");
  if (s.smoothing_window == 0) fail("run.smoothing_window", "must be positive");
  if (s.mining_stop_s && *s.mining_stop_s < 0.0) fail("run.mining_stop_s", "must be >= 0");
  if (s.observer && !declared(*s.observer)) fail("run.observer", "not a declared node");

  if (s.genesis.initial_difficulty < chain::kMinimumDifficulty) {
    fail("genesis.initial_difficulty", "below the minimum difficulty 1024");
  }
  if (s.genesis.block_capacity_bits == 0) fail("genesis.block_capacity_bits", "must be positive");

  if (s.nodes.miners == 0) fail("nodes.miners", "at least one miner is required");
  if (!(s.nodes.miner_hashrate_hps > 0.0)) fail("nodes.miner_hashrate_hps", "must be positive");
  if (s.nodes.light > 0 && s.nodes.light_uplinks == 0 &&
      s.topology.kind != TopologyKind::explicit_edges) {
    fail("nodes.light_uplinks", "light nodes need at least one uplink");
  }

  if (s.topology.kind == TopologyKind::explicit_edges) {
    for (const auto& [a, b] : s.topology.edges) {
      if (!declared(a) || !declared(b)) {
        fail("topology.edges", "edge " + std::to_string(a.value()) + "-" +
                                   std::to_string(b.value()) + " references an undeclared node");
      } else if (a == b) {
        fail("topology.edges", "self loop on node " + std::to_string(a.value()));
      }
    }
  } else if (!s.topology.edges.empty()) {
    fail("topology.edges", "edges are only allowed with kind = explicit");
  }

  const auto& d = s.disturbance;
  if (!(d.link_delay_ms >= 0.0)) fail("disturbance.link_delay_ms", "must be >= 0");
  if (!(d.churn_rate >= 0.0 && d.churn_rate <= 1.0)) fail("disturbance.churn_rate", "must be in [0, 1]");
  if (!(d.churn_epoch_s > 0.0)) fail("disturbance.churn_epoch_s", "must be positive");
  if (d.outage.count > s.nodes.miners) fail("disturbance.outage_count", "exceeds the miner count");
  if (d.outage.at_s < 0.0) fail("disturbance.outage_at_s", "must be >= 0");
  if (d.outage.end_s && !(*d.outage.end_s > d.outage.at_s)) {
    fail("disturbance.outage_end_s", "must be after outage_at_s");
  }
  if (d.partition) {
    if (d.partition->side.empty()) fail("disturbance.partition_nodes", "empty node set");
    for (NodeId id : d.partition->side) {
      if (!declared(id)) {
        fail("disturbance.partition_nodes", "node " + std::to_string(id.value()) + " not declared");
      }
    }
    if (!(d.partition->end_s > d.partition->start_s) || d.partition->start_s < 0.0) {
      fail("disturbance.partition_end_s", "partition must satisfy 0 <= start < end");
    }
  }

  const auto& b = s.bank;
  double prev_end = 0.0;
  for (std::size_t i = 0; i < b.connected_windows.size(); ++i) {
    const auto& w = b.connected_windows[i];
    if (!(w.end_s > w.start_s) || w.start_s < prev_end) {
      fail("bank.windows", "windows must be non-empty, ordered and disjoint (window " +
                               std::to_string(i + 1) + ")");
      break;
    }
    prev_end = w.end_s;
  }
  if (!b.connected_windows.empty() && !s.nodes.bank) {
    fail("bank.windows", "connected windows given but nodes.bank = false");
  }
  if (!(b.backhaul_bw_bps > 0.0)) fail("bank.backhaul_bw_bps", "must be positive");
  if (!(b.bw_cost_per_bit >= 0.0)) fail("bank.bw_cost_per_bit", "must be >= 0");
  if (!(b.sync_overhead_s_per_block >= 0.0)) fail("bank.sync_overhead_s_per_block", "must be >= 0");

  const auto& w = s.workload;
  const std::size_t users = s.nodes.full + s.nodes.light;
  if (!(w.lambda_t >= 0.0)) fail("workload.lambda_t_tps", "must be >= 0");
  if (!(w.lambda_e >= 0.0)) fail("workload.lambda_e_tps", "must be >= 0");
  if (w.lambda_t > 0.0 && users < 2 && s.workload_replay.empty()) {
    fail("workload.lambda_t_tps", "regular traffic needs at least two full or light nodes");
  }
  if (w.lambda_e > 0.0 && !s.nodes.bank) fail("workload.lambda_e_tps", "exchange traffic needs a bank node");
  if (w.s_t_bits == 0) fail("workload.s_t_bits", "must be positive");
  if (w.s_e_bits == 0) fail("workload.s_e_bits", "must be positive");
  if (w.amount_min == 0 || w.amount_max < w.amount_min) {
    fail("workload.amount_max", "need 1 <= amount_min <= amount_max");
  }
  if (!(w.exchange_to_token_share >= 0.0 && w.exchange_to_token_share <= 1.0)) {
    fail("workload.exchange_to_token_share", "must be in [0, 1]");
  }
  if (s.ledger.initial_tokens > s.ledger.initial_fiat) {
    fail("ledger.initial_tokens", "opening exchange exceeds ledger.initial_fiat");
  }
  return issues;
}

std::vector<NodeSpec> materialize_nodes(const Scenario& s) {
  const std::uint32_t total = node_count(s.nodes);
  std::vector<NodeSpec> nodes(total);
  for (std::uint32_t i = 0; i < total; ++i) nodes[i].id = NodeId{i};
  for (NodeId id : miner_nodes(s)) {
    nodes[id.value()].role = NodeRole::miner;
    nodes[id.value()].hashrate_hps = s.nodes.miner_hashrate_hps;
  }
  const auto bank = bank_node(s);
  if (bank) nodes[bank->value()].role = NodeRole::bank;
  const std::uint32_t first_light = s.nodes.miners + s.nodes.full + (s.nodes.bank ? 1u : 0u);
  for (std::uint32_t i = first_light; i < total; ++i) nodes[i].role = NodeRole::light;

  std::vector<std::set<NodeId>> peers(total);
  auto link = [&](NodeId a, NodeId b) {
    if (a == b) return;
    peers[a.value()].insert(b);
    peers[b.value()].insert(a);
  };

  const auto core = id_range(0, s.nodes.miners + s.nodes.full);
  const std::size_t nc = core.size();
  const std::size_t uplinks = std::min<std::size_t>(s.nodes.light_uplinks, nc);
  switch (s.topology.kind) {
    case TopologyKind::explicit_edges:
      for (const auto& [a, b] : s.topology.edges) link(a, b);
      break;
    case TopologyKind::full_mesh:
      for (std::size_t i = 0; i < nc; ++i) {
        for (std::size_t j = i + 1; j < nc; ++j) link(core[i], core[j]);
      }
      if (bank) {
        for (NodeId c : core) link(*bank, c);
      }
      break;
    case TopologyKind::ring:
      for (std::size_t i = 0; i < nc; ++i) link(core[i], core[(i + 1) % nc]);
      if (bank) {
        for (std::size_t u = 0; u < uplinks; ++u) link(*bank, core[u]);
      }
      break;
    case TopologyKind::star:
      for (std::size_t i = 1; i < nc; ++i) link(core[0], core[i]);
      if (bank) link(*bank, core[0]);
      break;
  }
  if (s.topology.kind != TopologyKind::explicit_edges && nc > 0) {
    for (std::uint32_t j = 0; j < s.nodes.light; ++j) {
      for (std::size_t u = 0; u < uplinks; ++u) {
        link(NodeId{first_light + j}, core[(j + u) % nc]);
      }
    }
  }
  for (std::uint32_t i = 0; i < total; ++i) {
    nodes[i].peers.assign(peers[i].begin(), peers[i].end());
  }
  return nodes;
}

ledger::LedgerState genesis_ledger(const Scenario& s) {
  const NodeId bank = bank_node(s).value_or(kNoNode);
  auto state = ledger::make_ledger(bank, s.ledger.reward_per_block);
  for (NodeId id : miner_nodes(s)) state = ledger::admit(std::move(state), id, ledger::Role::miner);
  for (NodeId id : user_nodes(s)) {
    state = ledger::admit(std::move(state), id, ledger::Role::user);
    state.accounts.at(id).fiat_balance = s.ledger.initial_fiat;
    if (s.ledger.initial_tokens == 0) continue;
    ledger::Transaction opening;
    opening.kind = ledger::TxKind::exchange_to_token;
    opening.sender = bank;
    opening.receiver = id;
    opening.amount = s.ledger.initial_tokens;
    if (ledger::apply_transaction_in_place(state, opening)) {
      throw std::invalid_argument("ledger.initial_tokens exceeds ledger.initial_fiat");
    }
  }
  return state;
}

}  // namespace dtpay::sim
