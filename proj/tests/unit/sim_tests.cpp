// Copyright (c) 2026 The dtpay developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <deque>
#include <map>

#include "dtpay/analytics/analytics.hpp"
#include "dtpay/sim/bank_sync.hpp"
#include "dtpay/sim/engine.hpp"
#include "dtpay/sim/mining.hpp"

using namespace dtpay;
using namespace dtpay::sim;

namespace {

Scenario small(std::uint32_t miners, std::uint32_t light, double horizon) {
  Scenario sc;
  sc.seed = 4;
  sc.nodes.miners = miners;
  sc.nodes.light = light;
  sc.nodes.bank = false;
  sc.nodes.miner_hashrate_hps = 29127.0 * 10.0 / miners;
  sc.horizon_s = horizon;
  sc.workload.lambda_t = light >= 2 ? 0.5 : 0.0;
  return sc;
}

std::map<BlockId, const BlockRecord*> by_id(const SimTrace& t) {
  std::map<BlockId, const BlockRecord*> m;
  for (const auto& r : t.blocks) m[r.block->id] = &r;
  return m;
}

ledger::LedgerState replay_canonical(const SimTrace& t) {
  auto state = t.genesis_state;
  for (std::size_t i = 1; i < t.canonical.size(); ++i) {
    state = ledger::apply_block(std::move(state), *t.find(t.canonical[i])->block);
  }
  return state;
}

// Hop counts from `from` in the peer graph.
std::vector<int> bfs(const std::vector<NodeSpec>& nodes, NodeId from) {
  std::vector<int> dist(nodes.size(), -1);
  std::deque<NodeId> q{from};
  dist[from.value()] = 0;
  while (!q.empty()) {
    const NodeId n = q.front();
    q.pop_front();
    for (NodeId p : nodes[n.value()].peers) {
      if (dist[p.value()] < 0) {
        dist[p.value()] = dist[n.value()] + 1;
        q.push_back(p);
      }
    }
  }
  return dist;
}

}  // namespace

TEST_CASE("block interval sampling") {
  Rng rng(1);
  const double d = 0x400000;
  const double h = d / 12.0;
  double sum = 0.0, sum_half = 0.0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) sum += *sample_block_interval(0x400000, h, rng);
  for (int i = 0; i < n; ++i) sum_half += *sample_block_interval(0x400000, 2 * h, rng);
  CHECK(sum / n >= 11.7);
  CHECK(sum / n <= 12.3);
  CHECK(sum_half / sum >= 0.48);
  CHECK(sum_half / sum <= 0.52);
  CHECK_FALSE(sample_block_interval(0x400000, 0.0, rng).has_value());
  Rng a(5), b(5);
  CHECK(*sample_block_interval(1 << 20, 100.0, a) == *sample_block_interval(1 << 20, 100.0, b));
}

TEST_CASE("bank sync plan") {
  const SyncModel model{128000.0, 2000, 0.005};
  std::vector<std::uint64_t> payloads(50, 96000);  // 50 blocks of 98000 bits with headers
  const auto plan = plan_bank_sync(payloads, model, 1e9);
  CHECK(plan.backlog_bits == 4900000);
  CHECK(plan.backlog_blocks == 50);
  CHECK(plan.sync_delay_s == doctest::Approx(38.28125 + 0.25));
  CHECK(plan.complete);
  CHECK(plan.blocks_completed == 50);

  const auto cut = plan_bank_sync(payloads, model, 10.0);
  CHECK_FALSE(cut.complete);
  // each block takes 98000/128000 + 0.005 = 0.77063 s
  CHECK(cut.blocks_completed == 12);
  CHECK(cut.completed_offset_s <= 10.0);

  const auto none = plan_bank_sync({}, model, 100.0);
  CHECK(none.sync_delay_s == 0.0);
  CHECK(none.complete);
}

TEST_CASE("a run is deterministic and its ledger matches the canonical chain") {
  auto sc = small(5, 4, 1800.0);
  const auto a = run(sc);
  const auto b = run(sc);
  REQUIRE(a.blocks.size() > 50);
  REQUIRE(a.blocks.size() == b.blocks.size());
  for (std::size_t i = 0; i < a.blocks.size(); ++i) {
    CHECK(a.blocks[i].block->id == b.blocks[i].block->id);
    CHECK(a.blocks[i].found_at == b.blocks[i].found_at);
  }
  CHECK(a.final_state == b.final_state);
  CHECK(replay_canonical(a) == a.final_state);
  CHECK(a.final_state.token_supply() ==
        a.genesis_state.token_supply() + a.final_state.tokens_exchanged_in -
            a.genesis_state.tokens_exchanged_in - a.final_state.tokens_exchanged_out +
            a.genesis_state.tokens_exchanged_out + a.final_state.total_rewards_paid);

  sc.seed = 5;
  CHECK(run(sc).blocks.front().found_at != a.blocks.front().found_at);
}

TEST_CASE("a single miner never forks") {
  auto sc = small(1, 2, 3600.0);
  sc.disturbance.link_delay_ms = 500;
  const auto t = run(sc);
  CHECK(t.blocks.size() > 100);
  CHECK(analytics::stale_rate(t) == 0.0);
  CHECK(t.canonical.size() == t.blocks.size() + 1);
}

TEST_CASE("blocks reach the observer over shortest paths") {
  for (auto kind : {TopologyKind::full_mesh, TopologyKind::ring}) {
    auto sc = small(kind == TopologyKind::ring ? 6 : 5, 0, 1200.0);
    sc.topology.kind = kind;
    sc.disturbance.link_delay_ms = 10;
    const auto t = run(sc);
    const auto nodes = materialize_nodes(sc);
    const auto blocks = by_id(t);
    std::size_t checked = 0;
    for (const auto& arr : t.observer_arrivals) {
      const auto* rec = blocks.at(arr.block);
      const auto hops = bfs(nodes, rec->block->header.miner)[t.observer.value()];
      const double expected = rec->found_at + 0.01 * hops;
      // a fork can hold a block back as an orphan; those arrive later
      CHECK(arr.at >= expected - 1e-9);
      if (std::abs(arr.at - expected) < 1e-9) ++checked;
    }
    CHECK(checked >= t.observer_arrivals.size() * 95 / 100);
    if (kind == TopologyKind::ring) {
      int longest = 0;
      for (int d : bfs(nodes, t.observer)) longest = std::max(longest, d);
      CHECK(longest == 3);
    }
  }
}

TEST_CASE("an outage silences miners and the network reconverges") {
  auto sc = small(6, 4, 2400.0);
  sc.disturbance.outage = {3, 600.0, 1200.0};
  sc.mining_stop_s = 2300.0;
  const auto t = run(sc);
  for (const auto& rec : t.blocks) {
    if (rec.found_at >= 600.0 && rec.found_at < 1200.0) CHECK(rec.block->header.miner.value() >= 3);
  }
  const BlockId head = t.canonical.back();
  for (const auto& n : t.nodes) {
    CHECK(n.online);
    CHECK(n.head == head);
  }
  bool saw_three = false;
  for (const auto& s : t.online) saw_three |= s.miners_online == 3;
  CHECK(saw_three);
}

TEST_CASE("a healed partition converges on one chain") {
  auto sc = small(6, 0, 3000.0);
  sc.disturbance.partition = PartitionSpec{{NodeId{0}, NodeId{1}, NodeId{2}}, 300.0, 1500.0};
  sc.mining_stop_s = 2900.0;
  const auto t = run(sc);
  CHECK(analytics::stale_rate(t) > 0.05);  // both sides kept mining
  CHECK_FALSE(t.reorgs.empty());
  for (const auto& n : t.nodes) CHECK(n.head == t.canonical.back());
  CHECK(replay_canonical(t) == t.final_state);
}

TEST_CASE("replaying a workload reproduces the run") {
  auto sc = small(4, 4, 1200.0);
  const auto first = run(sc);
  std::vector<ledger::Transaction> txs;
  for (const auto& r : first.txs) txs.push_back(r.tx);
  const auto again = run(sc, txs);
  CHECK(again.final_state == first.final_state);
  CHECK(again.canonical == first.canonical);

  auto broken = txs;
  broken[0].id = TxId{7};
  CHECK_THROWS(run(sc, broken));
}

TEST_CASE("exchanges only happen while the bank is connected") {
  auto sc = small(5, 4, 3000.0);
  sc.nodes.bank = true;
  sc.workload.lambda_e = 0.2;
  sc.bank.connected_windows = {{0.0, 600.0}, {1200.0, 1500.0}, {2400.0, 2700.0}};
  const auto t = run(sc);
  std::size_t exchanges = 0, included = 0;
  for (const auto& rec : t.txs) {
    if (!rec.tx.is_exchange()) continue;
    ++exchanges;
    CHECK(in_any_window(sc.bank.connected_windows, rec.tx.created_at));
    if (rec.included_at) {
      ++included;
      CHECK(in_any_window(sc.bank.connected_windows, *rec.included_at));
    }
  }
  CHECK(exchanges > 100);
  CHECK(included > exchanges / 2);
  REQUIRE(t.sync.size() == 3);
  CHECK(t.sync[1].disconnected_s == doctest::Approx(600.0));
  CHECK(t.sync[1].backlog_blocks > 10);
  CHECK(replay_canonical(t) == t.final_state);
}

TEST_CASE("invalid scenarios are rejected with field names") {
  auto sc = small(0, 2, 100.0);
  sc.smoothing_window = 0;
  try {
    run(sc);
    FAIL("expected InvalidScenario");
  } catch (const InvalidScenario& e) {
    std::vector<std::string> fields;
    for (const auto& i : e.issues()) fields.push_back(i.field);
    CHECK(std::count(fields.begin(), fields.end(), "nodes.miners") == 1);
    CHECK(std::count(fields.begin(), fields.end(), "run.smoothing_window") == 1);
  }
  auto bad_bank = small(2, 2, 100.0);
  bad_bank.bank.connected_windows = {{50.0, 40.0}};
  CHECK_FALSE(validate(bad_bank).empty());
}
