// Copyright (c) 2026 The dtpay developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#pragma once

#include <cstdint>
#include <optional>
#include <string_view>
#include <utility>
#include <vector>

#include "dtpay/common/ids.hpp"
#include "dtpay/common/time_window.hpp"

namespace dtpay::sim {

enum class NodeRole : std::uint8_t { miner, full, light, bank };

std::string_view to_string(NodeRole role);

struct NodeSpec {
  NodeId id{};
  NodeRole role = NodeRole::full;
  double hashrate_hps = 0.0;  // 0 for non-miners
  std::vector<NodeId> peers;

  bool relays() const { return role != NodeRole::light; }
};

enum class TopologyKind : std::uint8_t { full_mesh, ring, star, explicit_edges };

std::string_view to_string(TopologyKind kind);
std::optional<TopologyKind> parse_topology_kind(std::string_view text);

struct Topology {
  TopologyKind kind = TopologyKind::full_mesh;
  std::vector<std::pair<NodeId, NodeId>> edges;  // explicit_edges only

  friend bool operator==(const Topology&, const Topology&) = default;
};

/// `count` miners (lowest ids first) drop out at `at_s` and, if set, come
/// back at `end_s`.
struct Outage {
  std::uint32_t count = 0;
  double at_s = 0.0;
  std::optional<double> end_s;

  friend bool operator==(const Outage&, const Outage&) = default;
};

/// Messages between `side` and the rest of the network are dropped during
/// [start_s, end_s).
struct PartitionSpec {
  std::vector<NodeId> side;
  double start_s = 0.0;
  double end_s = 0.0;

  friend bool operator==(const PartitionSpec&, const PartitionSpec&) = default;
};

struct DisturbanceProfile {
  double link_delay_ms = 0.0;
  /// Probability that a churnable node is offline for a churn epoch.
  double churn_rate = 0.0;
  double churn_epoch_s = 1200.0;
  bool churn_full_nodes = false;
  Outage outage;
  std::optional<PartitionSpec> partition;

  double link_delay_s() const { return link_delay_ms / 1000.0; }
  friend bool operator==(const DisturbanceProfile&, const DisturbanceProfile&) = default;
};

/// Backhaul schedule of the bank node. T_C is the connected time, T_U the
/// disconnected time, T_B = T_C + T_U the service period (here: the horizon).
struct BankSchedule {
  std::vector<TimeWindow> connected_windows;
  double backhaul_bw_bps = 128000.0;
  double bw_cost_per_bit = 0.0;
  std::uint64_t header_bits = 2000;
  double sync_overhead_s_per_block = 0.005;

  double connected_seconds(double horizon_s) const;
  double disconnected_seconds(double horizon_s) const {
    return horizon_s - connected_seconds(horizon_s);
  }
  friend bool operator==(const BankSchedule&, const BankSchedule&) = default;
};

}  // namespace dtpay::sim
