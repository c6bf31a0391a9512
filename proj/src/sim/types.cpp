// Copyright (c) 2026 The dtpay developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#include "dtpay/sim/types.hpp"

#include <algorithm>

namespace dtpay::sim {

std::string_view to_string(NodeRole role) {
  switch (role) {
    case NodeRole::miner: return "miner";
    case NodeRole::full: return "full";
    case NodeRole::light: return "light";
    case NodeRole::bank: return "bank";
  }
  return "?";
}

std::string_view to_string(TopologyKind kind) {
  switch (kind) {
    case TopologyKind::full_mesh: return "full-mesh";
    case TopologyKind::ring: return "ring";
    case TopologyKind::star: return "star";
    case TopologyKind::explicit_edges: return "explicit";
  }
  return "?";
}

std::optional<TopologyKind> parse_topology_kind(std::string_view text) {
  if (text == "full-mesh") return TopologyKind::full_mesh;
  if (text == "ring") return TopologyKind::ring;
  if (text == "star") return TopologyKind::star;
  if (text == "explicit") return TopologyKind::explicit_edges;
  return std::nullopt;
}

double BankSchedule::connected_seconds(double horizon_s) const {
  double total = 0.0;
  for (const auto& w : connected_windows) {
    const double end = std::min(w.end_s, horizon_s);
    if (end > w.start_s) total += end - w.start_s;
  }
  return total;
}

}  // namespace dtpay::sim
