// Copyright (c) 2026 The dtpay developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#include "dtpay/ledger/partition.hpp"

#include <stdexcept>

namespace dtpay::ledger {

namespace {

std::set<NodeId> closure_from(const std::map<NodeId, std::set<NodeId>>& adjacency, NodeId start) {
  std::set<NodeId> reached{start};
  std::set<NodeId> frontier{start};
  // P_1, P_2, ...: peers of the previous hop; stop once a hop is already
  // contained in the union of earlier hops.
  while (!frontier.empty()) {
    std::set<NodeId> next;
    for (NodeId n : frontier) {
      for (NodeId peer : adjacency.at(n)) {
        if (!reached.count(peer)) next.insert(peer);
      }
    }
    reached.insert(next.begin(), next.end());
    frontier = std::move(next);
  }
  return reached;
}

}  // namespace

std::vector<std::set<NodeId>> detect_partition(const ConnectionMap& connections, NodeId start) {
  if (!connections.count(start)) {
    throw std::invalid_argument("detect_partition: start node not in connection map");
  }
  std::map<NodeId, std::set<NodeId>> adjacency;
  for (const auto& [node, peers] : connections) {
    adjacency[node];
    for (NodeId peer : peers) {
      if (peer == node) continue;
      adjacency[node].insert(peer);
      adjacency[peer].insert(node);
    }
  }

  std::vector<std::set<NodeId>> groups;
  std::set<NodeId> remaining;
  for (const auto& [node, peers] : adjacency) remaining.insert(node);

  NodeId next = start;
  while (!remaining.empty()) {
    auto group = closure_from(adjacency, next);
    for (NodeId n : group) remaining.erase(n);
    groups.push_back(std::move(group));
    if (!remaining.empty()) next = *remaining.begin();
  }
  return groups;
}

}  // namespace dtpay::ledger
