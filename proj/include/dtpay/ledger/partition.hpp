// Copyright (c) 2026 The dtpay developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#pragma once

#include <map>
#include <set>
#include <vector>

#include "dtpay/common/ids.hpp"

namespace dtpay::ledger {

using ConnectionMap = std::map<NodeId, std::set<NodeId>>;

/// Partition check over a topology snapshot. Starting from `start`, collect
/// the peers of the current frontier hop by hop until a hop adds nothing new;
/// that closure is the first group. Any nodes left over form further groups,
/// found by repeating the walk from the lowest remaining id. Links are
/// treated as bidirectional. A result with more than one group means the
/// overlay is split.
///
/// Throws std::invalid_argument if `start` is not a key of `connections`.
std::vector<std::set<NodeId>> detect_partition(const ConnectionMap& connections, NodeId start);

}  // namespace dtpay::ledger
