// Copyright (c) 2026 The dtpay developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#include "dtpay/sim/engine.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <queue>
#include <set>
#include <stdexcept>
#include <unordered_map>

#include "dtpay/chain/chain_view.hpp"
#include "dtpay/chain/difficulty.hpp"
#include "dtpay/chain/validation.hpp"
#include "dtpay/sim/bank_sync.hpp"
#include "dtpay/workload/workload.hpp"

namespace dtpay::sim {

InvalidScenario::InvalidScenario(std::vector<ScenarioIssue> issues)
    : std::invalid_argument(issues.empty() ? std::string("invalid scenario")
                                           : issues.front().field + ": " + issues.front().message),
      issues_(std::move(issues)) {}

namespace {

using chain::Block;
using chain::BlockHeader;
using chain::BlockPtr;
using chain::ChainView;
using ledger::LedgerState;
using ledger::Transaction;

constexpr double kNever = std::numeric_limits<double>::infinity();

enum class EventKind : std::uint8_t {
  tx_created,
  block_found,
  mining_boundary,
  message,
  churn_epoch,
  node_toggle,
  bank_connect,
  bank_sync_done,
  bank_disconnect,
  partition_start,
  partition_end,
  measurement,
};

struct SyncBatch {
  std::vector<BlockId> blocks;  // parents first
  std::vector<TxId> txs;
};

struct Event {
  double at = 0.0;
  std::uint64_t seq = 0;
  EventKind kind{};
  NodeId node{};
  NodeId from{};
  std::uint64_t arg = 0;
  bool flag = false;  // message: block (else tx); toggle: online; sync: complete
  std::shared_ptr<const SyncBatch> batch;
};

struct Later {
  bool operator()(const Event& a, const Event& b) const {
    return a.at != b.at ? a.at > b.at : a.seq > b.seq;
  }
};

/// Miners fill blocks with exchange requests first, then regular
/// transactions, each in creation order.
struct MempoolKey {
  int lane = 0;
  double created_at = 0.0;
  std::uint64_t id = 0;
  friend auto operator<=>(const MempoolKey&, const MempoolKey&) = default;
};

struct NodeState {
  NodeSpec spec;
  bool online = true;
  bool syncing = false;
  ChainView view;
  std::vector<BlockId> canonical;
  std::vector<char> known_tx;
  std::set<MempoolKey> mempool;
  std::unordered_map<BlockId, std::vector<std::pair<BlockId, NodeId>>> orphans;
  std::unordered_map<BlockId, double> requested;  // block -> expected answer time
  std::vector<TxId> outbox;

  NodeState(NodeSpec s, const BlockPtr& genesis, std::size_t tx_count)
      : spec(std::move(s)), view(genesis, 0.0), canonical{genesis->id} {
    if (spec.role != NodeRole::light) known_tx.assign(tx_count + 1, 0);
  }

  bool is_miner() const { return spec.role == NodeRole::miner; }
  bool is_light() const { return spec.role == NodeRole::light; }
  bool relays() const { return spec.relays(); }
};

/// Difficulty a miner would stamp on a block found in the current 10-second
/// band after `parent`, and the time that band ends.
struct MiningSegment {
  std::uint64_t difficulty = 0;
  double ends_at = kNever;
};

MiningSegment mining_segment(const BlockHeader& parent, double now) {
  const double gap = now - parent.timestamp;
  std::int64_t band = gap <= 0.0 ? 0 : static_cast<std::int64_t>(std::floor(gap / 10.0));
  double end = parent.timestamp + 10.0 * static_cast<double>(band + 1);
  while (end <= now) {
    ++band;
    end = parent.timestamp + 10.0 * static_cast<double>(band + 1);
  }
  std::int64_t multiplier = 0;
  if (band == 0) {
    multiplier = 1;
  } else if (band == 1) {
    multiplier = 0;
  } else {
    multiplier = std::max<std::int64_t>(-99, 1 - band);
  }
  if (band >= 100) end = kNever;
  const std::int64_t step = static_cast<std::int64_t>(parent.difficulty / chain::kDifficultyBoundDivisor);
  const std::int64_t next = static_cast<std::int64_t>(parent.difficulty) + step * multiplier;
  MiningSegment seg;
  seg.difficulty = static_cast<std::uint64_t>(
      std::max<std::int64_t>(next, static_cast<std::int64_t>(chain::kMinimumDifficulty)));
  seg.ends_at = end;
  return seg;
}

class Engine {
 public:
  Engine(const Scenario& scenario, std::vector<Transaction> txs)
      : sc_(scenario),
        txs_(std::move(txs)),
        mining_rng_(make_stream(scenario.seed, "mining")),
        churn_rng_(make_stream(scenario.seed, "churn")),
        bank_rng_(make_stream(scenario.seed, "bank")),
        bank_(bank_node(scenario)),
        observer_(observer_node(scenario)),
        delay_(scenario.disturbance.link_delay_s()) {
    genesis_ = std::make_shared<const Block>(chain::make_genesis(scenario.genesis));
    genesis_state_ = genesis_ledger(scenario);
    store_.emplace(genesis_->id, Stored{genesis_, genesis_state_, 0.0});
    for (auto& spec : materialize_nodes(scenario)) {
      nodes_.emplace_back(std::move(spec), genesis_, txs_.size());
    }
    tx_blocks_.resize(txs_.size() + 1);
    partition_side_.assign(nodes_.size(), 0);
    if (scenario.disturbance.partition) {
      for (NodeId id : scenario.disturbance.partition->side) partition_side_[id.value()] = 1;
    }
  }

  SimTrace run();

 private:
  struct Stored {
    BlockPtr block;
    LedgerState post;
    double found_at = 0.0;
  };

  const BlockHeader& header(BlockId id) const { return store_.at(id).block->header; }

  void schedule(Event ev) {
    ev.seq = seq_++;
    queue_.push(std::move(ev));
  }
  void schedule(double at, EventKind kind, NodeId node = {}, std::uint64_t arg = 0,
                bool flag = false) {
    Event ev;
    ev.at = at;
    ev.kind = kind;
    ev.node = node;
    ev.arg = arg;
    ev.flag = flag;
    schedule(std::move(ev));
  }

  void schedule_static_events();
  void dispatch(const Event& ev);

  // Mining race.
  void rearm();
  void on_block_found();
  void mine_block(NodeState& miner);

  // Messaging.
  bool cut(NodeId a, NodeId b) const {
    return partitioned_ && partition_side_[a.value()] != partition_side_[b.value()];
  }
  bool knows(const NodeState& n, bool is_block, std::uint64_t id) const {
    if (is_block) return n.view.contains(BlockId{id});
    return n.is_light() || n.known_tx[id] != 0;
  }
  void send(const NodeState& from, NodeId to, bool is_block, std::uint64_t id);
  void send_batch(const NodeState& from, NodeId to, std::shared_ptr<const SyncBatch> batch,
                  double extra_delay);
  void on_message(const Event& ev);
  void deliver_block(NodeState& n, BlockId id, NodeId from);
  void accept_chain(NodeState& n, BlockId id, NodeId from, bool relay);
  bool accept_one(NodeState& n, BlockId id, NodeId from, bool relay);
  void switch_head(NodeState& n, BlockId old_head);
  void apply_batch(NodeState& n, const SyncBatch& batch, NodeId from);
  void request_ancestors(NodeState& n, NodeId from, BlockId parent);
  void receive_tx(NodeState& n, TxId id, NodeId from, bool relay);
  bool on_canonical(const NodeState& n, TxId id) const;
  MempoolKey key_of(TxId id) const {
    const Transaction& tx = txs_[id.value() - 1];
    return {tx.is_exchange() ? 0 : 1, tx.created_at, id.value()};
  }

  // Workload and churn.
  void on_tx_created(std::size_t index);
  bool submit_from_light(NodeState& n, TxId id);
  void flush_outbox(NodeState& n);
  void set_online(NodeId id, bool online);
  void announce_head(const NodeState& n);

  // Bank.
  void on_bank_connect(std::size_t window);
  void on_bank_sync_done(const Event& ev);
  void on_bank_disconnect();

  void finalize();

  const Scenario& sc_;
  std::vector<Transaction> txs_;
  Rng mining_rng_;
  Rng churn_rng_;
  Rng bank_rng_;
  std::optional<NodeId> bank_;
  NodeId observer_;
  double delay_;

  BlockPtr genesis_;
  LedgerState genesis_state_;
  std::unordered_map<BlockId, Stored> store_;
  std::vector<BlockId> created_;
  std::vector<std::vector<BlockId>> tx_blocks_;
  std::vector<NodeState> nodes_;

  std::priority_queue<Event, std::vector<Event>, Later> queue_;
  std::uint64_t seq_ = 0;
  double now_ = 0.0;

  double budget_ = 0.0;
  double rate_ = 0.0;
  double rate_since_ = 0.0;
  std::uint64_t generation_ = 0;
  bool mining_dirty_ = true;
  std::vector<std::pair<NodeId, double>> weights_;

  bool bank_connected_ = false;
  double last_disconnect_ = 0.0;
  std::vector<TxId> bank_queue_;

  std::vector<char> partition_side_;
  bool partitioned_ = false;

  SimTrace trace_;
};

SimTrace Engine::run() {
  trace_.horizon_s = sc_.horizon_s;
  trace_.observer = observer_;
  trace_.genesis = genesis_;
  trace_.genesis_state = genesis_state_;

  budget_ = mining_rng_.unit_exponential();
  schedule_static_events();

  while (true) {
    if (mining_dirty_) rearm();
    if (queue_.empty()) break;
    if (queue_.top().at >= sc_.horizon_s) break;
    Event ev = queue_.top();
    queue_.pop();
    now_ = ev.at;
    ++trace_.counters.events;
    dispatch(ev);
  }
  now_ = sc_.horizon_s;
  finalize();
  return std::move(trace_);
}

void Engine::schedule_static_events() {
  const double horizon = sc_.horizon_s;
  if (!txs_.empty()) schedule(txs_.front().created_at, EventKind::tx_created, {}, 0);

  const auto& d = sc_.disturbance;
  if (d.churn_rate > 0.0) schedule(0.0, EventKind::churn_epoch);
  if (d.outage.count > 0) {
    for (std::uint32_t i = 0; i < d.outage.count; ++i) {
      schedule(d.outage.at_s, EventKind::node_toggle, NodeId{i}, 0, false);
      if (d.outage.end_s) schedule(*d.outage.end_s, EventKind::node_toggle, NodeId{i}, 0, true);
    }
  }
  if (d.partition) {
    schedule(d.partition->start_s, EventKind::partition_start);
    schedule(d.partition->end_s, EventKind::partition_end);
  }
  if (bank_) {
    nodes_[bank_->value()].online = false;
    const auto& windows = sc_.bank.connected_windows;
    for (std::size_t i = 0; i < windows.size(); ++i) {
      if (windows[i].start_s >= horizon) break;
      schedule(windows[i].start_s, EventKind::bank_connect, *bank_, i);
      schedule(windows[i].end_s, EventKind::bank_disconnect, *bank_, i);
    }
  }
  schedule(0.0, EventKind::measurement);
}

void Engine::dispatch(const Event& ev) {
  switch (ev.kind) {
    case EventKind::tx_created:
      on_tx_created(ev.arg);
      break;
    case EventKind::block_found:
      if (ev.arg == generation_) on_block_found();
      break;
    case EventKind::mining_boundary:
      if (ev.arg == generation_) mining_dirty_ = true;
      break;
    case EventKind::message:
      on_message(ev);
      break;
    case EventKind::churn_epoch: {
      const auto& d = sc_.disturbance;
      for (auto& n : nodes_) {
        const bool churnable = n.is_miner() || (d.churn_full_nodes && n.spec.role == NodeRole::full);
        if (!churnable) continue;
        const bool offline = churn_rng_.bernoulli(d.churn_rate);
        set_online(n.spec.id, !offline);
      }
      const double next = now_ + d.churn_epoch_s;
      if (next < sc_.horizon_s) schedule(next, EventKind::churn_epoch);
      break;
    }
    case EventKind::node_toggle:
      set_online(ev.node, ev.flag);
      break;
    case EventKind::bank_connect:
      on_bank_connect(ev.arg);
      break;
    case EventKind::bank_sync_done:
      on_bank_sync_done(ev);
      break;
    case EventKind::bank_disconnect:
      on_bank_disconnect();
      break;
    case EventKind::partition_start:
      partitioned_ = true;
      break;
    case EventKind::partition_end:
      partitioned_ = false;
      for (auto& n : nodes_) {
        if (n.online && n.relays()) announce_head(n);
      }
      for (auto& n : nodes_) {
        if (n.is_light()) flush_outbox(n);
      }
      break;
    case EventKind::measurement: {
      std::uint32_t online = 0;
      for (const auto& n : nodes_) online += n.is_miner() && n.online ? 1 : 0;
      trace_.online.push_back({now_, online});
      const double next = now_ + sc_.measurement_interval_s;
      if (next < sc_.horizon_s) schedule(next, EventKind::measurement);
      break;
    }
  }
}

// Total work needed for the next block is a unit exponential "budget" spent
// at rate sum(h_m / D_m) over online miners, D_m being the difficulty each
// would stamp on a block now. The rate is piecewise constant; it changes when
// a head moves, a miner toggles, or a 10-second retarget band ends.
void Engine::rearm() {
  mining_dirty_ = false;
  budget_ = std::max(0.0, budget_ - rate_ * (now_ - rate_since_));
  rate_since_ = now_;
  ++generation_;
  weights_.clear();
  rate_ = 0.0;
  if (sc_.mining_stop_s && now_ >= *sc_.mining_stop_s) return;

  double band_end = kNever;
  for (const auto& n : nodes_) {
    if (!n.is_miner() || !n.online) continue;
    const MiningSegment seg = mining_segment(header(n.view.canonical_head()), now_);
    const double w = n.spec.hashrate_hps / static_cast<double>(seg.difficulty);
    weights_.emplace_back(n.spec.id, w);
    rate_ += w;
    band_end = std::min(band_end, seg.ends_at);
  }
  if (!(rate_ > 0.0)) return;
  const double found_at = now_ + budget_ / rate_;
  if (found_at < band_end) {
    if (sc_.mining_stop_s && found_at >= *sc_.mining_stop_s) return;
    schedule(found_at, EventKind::block_found, {}, generation_);
  } else if (band_end < kNever) {
    schedule(band_end, EventKind::mining_boundary, {}, generation_);
  }
}

void Engine::on_block_found() {
  rate_since_ = now_;
  double pick = mining_rng_.uniform01() * rate_;
  NodeId winner = weights_.back().first;
  for (const auto& [id, w] : weights_) {
    if (pick < w) {
      winner = id;
      break;
    }
    pick -= w;
  }
  budget_ = mining_rng_.unit_exponential();
  mining_dirty_ = true;
  mine_block(nodes_[winner.value()]);
}

void Engine::mine_block(NodeState& miner) {
  const BlockId parent_id = miner.view.canonical_head();
  const Stored& parent = store_.at(parent_id);
  const BlockHeader& ph = parent.block->header;

  auto block = std::make_shared<Block>();
  BlockHeader& h = block->header;
  h.number = ph.number + 1;
  h.parent_id = parent_id;
  h.timestamp = now_ > ph.timestamp ? now_ : std::nextafter(ph.timestamp, kNever);
  h.difficulty = chain::adjust_difficulty(ph.difficulty, ph.timestamp, h.timestamp);
  h.miner = miner.spec.id;
  h.capacity_bits = ph.capacity_bits;

  LedgerState scratch = parent.post;
  std::uint64_t used = 0;
  for (const MempoolKey& key : miner.mempool) {
    const Transaction& tx = txs_[key.id - 1];
    if (tx.is_exchange() && !bank_connected_) continue;
    if (h.capacity_bits != chain::kUnlimitedCapacity && used + tx.size_bits > h.capacity_bits) {
      continue;
    }
    if (ledger::apply_transaction_in_place(scratch, tx)) continue;
    block->transactions.push_back(tx);
    used += tx.size_bits;
  }
  block->id = chain::make_block_id(miner.spec.id, h.number, h.timestamp, sc_.genesis.nonce_seed);
  if (store_.count(block->id)) throw std::runtime_error("block id collision");

  LedgerState post = ledger::apply_block(parent.post, *block);
  for (const auto& tx : block->transactions) tx_blocks_[tx.id.value()].push_back(block->id);
  const BlockId id = block->id;
  store_.emplace(id, Stored{std::move(block), std::move(post), now_});
  created_.push_back(id);
  accept_chain(miner, id, miner.spec.id, true);
}

void Engine::send(const NodeState& from, NodeId to, bool is_block, std::uint64_t id) {
  const NodeState& dst = nodes_[to.value()];
  ++trace_.counters.messages_sent;
  if (!dst.online || cut(from.spec.id, to)) {
    ++trace_.counters.messages_dropped;
    return;
  }
  // A copy the receiver already holds would be a no-op on arrival.
  if (knows(dst, is_block, id)) return;
  Event ev;
  ev.at = now_ + delay_;
  ev.kind = EventKind::message;
  ev.node = to;
  ev.from = from.spec.id;
  ev.arg = id;
  ev.flag = is_block;
  schedule(std::move(ev));
}

void Engine::send_batch(const NodeState& from, NodeId to, std::shared_ptr<const SyncBatch> batch,
                        double extra_delay) {
  ++trace_.counters.messages_sent;
  if (!nodes_[to.value()].online || cut(from.spec.id, to)) {
    ++trace_.counters.messages_dropped;
    return;
  }
  Event ev;
  ev.at = now_ + delay_ + extra_delay;
  ev.kind = EventKind::message;
  ev.node = to;
  ev.from = from.spec.id;
  ev.batch = std::move(batch);
  schedule(std::move(ev));
}

void Engine::on_message(const Event& ev) {
  NodeState& n = nodes_[ev.node.value()];
  if (!n.online || cut(ev.from, ev.node)) {
    ++trace_.counters.messages_dropped;
    return;
  }
  if (ev.batch) {
    const BlockId old_head = n.view.canonical_head();
    apply_batch(n, *ev.batch, ev.from);
    if (n.relays() && n.view.canonical_head() != old_head) announce_head(n);
  } else if (ev.flag) {
    deliver_block(n, BlockId{ev.arg}, ev.from);
  } else {
    receive_tx(n, TxId{ev.arg}, ev.from, true);
  }
}

void Engine::deliver_block(NodeState& n, BlockId id, NodeId from) {
  if (n.view.contains(id)) return;
  const BlockId parent = header(id).parent_id;
  if (!n.view.contains(parent)) {
    auto& waiting = n.orphans[parent];
    for (const auto& [child, sender] : waiting) {
      if (child == id) return;
    }
    waiting.emplace_back(id, from);
    ++trace_.counters.orphans_buffered;
    if (!n.syncing) request_ancestors(n, from, parent);
    return;
  }
  accept_chain(n, id, from, true);
}

void Engine::accept_chain(NodeState& n, BlockId id, NodeId from, bool relay) {
  struct Item {
    BlockId id;
    NodeId from;
    bool relay;
  };
  std::vector<Item> work{{id, from, relay}};
  while (!work.empty()) {
    const Item item = work.back();
    work.pop_back();
    if (n.view.contains(item.id)) continue;
    if (!accept_one(n, item.id, item.from, item.relay)) continue;
    auto it = n.orphans.find(item.id);
    if (it == n.orphans.end()) continue;
    for (const auto& [child, sender] : it->second) work.push_back({child, sender, true});
    n.orphans.erase(it);
  }
}

bool Engine::accept_one(NodeState& n, BlockId id, NodeId from, bool relay) {
  const Stored& st = store_.at(id);
  const Block& b = *st.block;
  const chain::Verdict verdict =
      n.is_light() ? chain::validate_header(b.header, n.view)
                   : chain::validate_block(b, n.view, store_.at(b.header.parent_id).post);
  if (!verdict.accepted()) {
    ++trace_.counters.rejected_blocks;
    return false;
  }
  const BlockId old_head = n.view.canonical_head();
  n.view.insert(st.block, now_);
  if (!n.is_light()) {
    for (const auto& tx : b.transactions) n.known_tx[tx.id.value()] = 1;
  }
  if (n.spec.id == observer_) trace_.observer_arrivals.push_back({now_, id});
  if (n.view.canonical_head() != old_head) switch_head(n, old_head);
  if (relay && n.relays()) {
    for (NodeId peer : n.spec.peers) {
      if (peer != from) send(n, peer, true, id.value());
    }
  }
  return true;
}

void Engine::switch_head(NodeState& n, BlockId old_head) {
  const BlockId head = n.view.canonical_head();
  std::vector<BlockId> connect;
  BlockId cur = head;
  while (true) {
    const std::uint64_t h = header(cur).number;
    if (h < n.canonical.size() && n.canonical[h] == cur) break;
    connect.push_back(cur);
    cur = header(cur).parent_id;
  }
  const std::uint64_t fork = header(cur).number;
  const std::uint64_t old_height = header(old_head).number;

  if (n.is_miner()) {
    for (std::uint64_t h = fork + 1; h <= old_height; ++h) {
      for (const auto& tx : store_.at(n.canonical[h]).block->transactions) {
        n.mempool.insert(key_of(tx.id));
      }
    }
  }
  n.canonical.resize(fork + 1);
  for (auto it = connect.rbegin(); it != connect.rend(); ++it) n.canonical.push_back(*it);
  if (n.is_miner()) {
    for (BlockId b : connect) {
      for (const auto& tx : store_.at(b).block->transactions) n.mempool.erase(key_of(tx.id));
    }
    if (n.online) mining_dirty_ = true;
  }
  if (old_height > fork) {
    trace_.reorgs.push_back({now_, n.spec.id, old_height - fork, old_height, header(head).number});
  }
}

void Engine::apply_batch(NodeState& n, const SyncBatch& batch, NodeId from) {
  for (BlockId id : batch.blocks) {
    n.requested.erase(id);
    if (n.view.contains(id) || !n.view.contains(header(id).parent_id)) continue;
    accept_chain(n, id, from, false);
  }
  for (TxId id : batch.txs) receive_tx(n, id, from, false);
}

void Engine::request_ancestors(NodeState& n, NodeId from, BlockId parent) {
  auto pending = n.requested.find(parent);
  if (pending != n.requested.end() && pending->second >= now_) return;
  auto batch = std::make_shared<SyncBatch>();
  for (BlockId cur = parent; !n.view.contains(cur); cur = header(cur).parent_id) {
    batch->blocks.push_back(cur);
  }
  std::reverse(batch->blocks.begin(), batch->blocks.end());
  const double answer_by = now_ + 2.0 * delay_;
  for (BlockId id : batch->blocks) n.requested[id] = answer_by;
  // The request takes one hop, the answer another.
  send_batch(nodes_[from.value()], n.spec.id, std::move(batch), delay_);
}

bool Engine::on_canonical(const NodeState& n, TxId id) const {
  for (BlockId b : tx_blocks_[id.value()]) {
    const std::uint64_t h = header(b).number;
    if (h < n.canonical.size() && n.canonical[h] == b) return true;
  }
  return false;
}

void Engine::receive_tx(NodeState& n, TxId id, NodeId from, bool relay) {
  if (n.is_light() || n.known_tx[id.value()]) return;
  n.known_tx[id.value()] = 1;
  if (n.is_miner() && !on_canonical(n, id)) n.mempool.insert(key_of(id));
  if (!relay) return;
  for (NodeId peer : n.spec.peers) {
    if (peer != from && !nodes_[peer.value()].is_light()) send(n, peer, false, id.value());
  }
}

void Engine::on_tx_created(std::size_t index) {
  const Transaction& tx = txs_[index];
  if (tx.is_exchange()) {
    NodeState& bank = nodes_[bank_->value()];
    if (bank.online && !bank.syncing) {
      receive_tx(bank, tx.id, bank.spec.id, true);
    } else {
      bank_queue_.push_back(tx.id);
    }
  } else {
    NodeState& origin = nodes_[tx.sender.value()];
    if (origin.is_light()) {
      if (!submit_from_light(origin, tx.id)) origin.outbox.push_back(tx.id);
    } else if (origin.online) {
      receive_tx(origin, tx.id, origin.spec.id, true);
    } else {
      origin.outbox.push_back(tx.id);
    }
  }
  if (index + 1 < txs_.size()) {
    schedule(txs_[index + 1].created_at, EventKind::tx_created, {}, index + 1);
  }
}

bool Engine::submit_from_light(NodeState& n, TxId id) {
  bool sent = false;
  for (NodeId peer : n.spec.peers) {
    const NodeState& up = nodes_[peer.value()];
    if (!up.online || up.is_light() || cut(n.spec.id, peer)) continue;
    send(n, peer, false, id.value());
    sent = true;
  }
  return sent;
}

void Engine::flush_outbox(NodeState& n) {
  if (n.outbox.empty()) return;
  std::vector<TxId> held;
  held.swap(n.outbox);
  for (TxId id : held) {
    if (n.is_light()) {
      if (!submit_from_light(n, id)) n.outbox.push_back(id);
    } else {
      receive_tx(n, id, n.spec.id, true);
    }
  }
}

void Engine::announce_head(const NodeState& n) {
  const BlockId head = n.view.canonical_head();
  if (head == genesis_->id) return;
  for (NodeId peer : n.spec.peers) send(n, peer, true, head.value());
}

void Engine::set_online(NodeId id, bool online) {
  NodeState& n = nodes_[id.value()];
  if (n.online == online) return;
  n.online = online;
  if (n.is_miner()) mining_dirty_ = true;
  if (!online) {
    n.orphans.clear();
    n.requested.clear();
    return;
  }

  flush_outbox(n);
  for (NodeId peer : n.spec.peers) {
    NodeState& p = nodes_[peer.value()];
    if (p.is_light()) flush_outbox(p);
  }

  std::vector<NodeId> sources;
  for (NodeId peer : n.spec.peers) {
    const NodeState& p = nodes_[peer.value()];
    if (p.online && p.relays() && !p.syncing && !cut(id, peer)) sources.push_back(peer);
  }
  if (sources.empty()) return;
  const NodeState& src = nodes_[sources[churn_rng_.uniform_int(0, sources.size() - 1)].value()];
  auto batch = std::make_shared<SyncBatch>();
  for (BlockId b : src.view.ids_in_height_order()) {
    if (!n.view.contains(b)) batch->blocks.push_back(b);
  }
  if (!n.is_light()) {
    for (std::size_t t = 1; t < src.known_tx.size(); ++t) {
      if (src.known_tx[t] && !n.known_tx[t]) batch->txs.push_back(TxId{t});
    }
  }
  send_batch(src, id, std::move(batch), 0.0);
}

void Engine::on_bank_connect(std::size_t window) {
  NodeState& bank = nodes_[bank_->value()];
  const TimeWindow& w = sc_.bank.connected_windows[window];
  bank.online = true;
  bank_connected_ = true;

  std::vector<NodeId> sources;
  for (NodeId peer : bank.spec.peers) {
    const NodeState& p = nodes_[peer.value()];
    if (p.online && p.relays() && !cut(bank.spec.id, peer)) sources.push_back(peer);
  }
  std::vector<BlockId> backlog;
  if (!sources.empty()) {
    const NodeState& src = nodes_[sources[bank_rng_.uniform_int(0, sources.size() - 1)].value()];
    for (auto it = src.canonical.rbegin(); it != src.canonical.rend(); ++it) {
      if (bank.view.contains(*it)) break;
      backlog.push_back(*it);
    }
    std::reverse(backlog.begin(), backlog.end());
  }
  std::vector<std::uint64_t> payloads;
  payloads.reserve(backlog.size());
  for (BlockId b : backlog) payloads.push_back(store_.at(b).block->payload_bits());

  const SyncModel model{sc_.bank.backhaul_bw_bps, sc_.bank.header_bits,
                        sc_.bank.sync_overhead_s_per_block};
  const double window_left = std::min(w.end_s, sc_.horizon_s) - now_;
  const SyncPlan plan = plan_bank_sync(payloads, model, window_left);

  SyncEpisode ep;
  ep.window_start = w.start_s;
  ep.window_end = w.end_s;
  ep.disconnected_s = now_ - last_disconnect_;
  ep.backlog_bits = plan.backlog_bits;
  ep.backlog_blocks = plan.backlog_blocks;
  ep.sync_delay_s = plan.sync_delay_s;
  ep.blocks_applied = plan.blocks_completed;
  ep.complete = plan.complete;
  trace_.sync.push_back(ep);

  bank.syncing = true;
  auto batch = std::make_shared<SyncBatch>();
  batch->blocks.assign(backlog.begin(), backlog.begin() + static_cast<std::ptrdiff_t>(plan.blocks_completed));
  Event ev;
  ev.at = now_ + (plan.complete ? plan.sync_delay_s : plan.completed_offset_s);
  ev.kind = EventKind::bank_sync_done;
  ev.node = bank.spec.id;
  ev.flag = plan.complete;
  ev.batch = std::move(batch);
  schedule(std::move(ev));
}

void Engine::on_bank_sync_done(const Event& ev) {
  NodeState& bank = nodes_[bank_->value()];
  if (!bank.online) return;
  apply_batch(bank, *ev.batch, bank.spec.id);
  if (!ev.flag) return;  // still behind; the next window resumes
  bank.syncing = false;
  std::vector<std::pair<BlockId, NodeId>> stuck;
  for (const auto& [parent, waiting] : bank.orphans) {
    if (!bank.view.contains(parent) && !waiting.empty()) stuck.emplace_back(parent, waiting.front().second);
  }
  std::sort(stuck.begin(), stuck.end());
  for (const auto& [parent, from] : stuck) request_ancestors(bank, from, parent);
  announce_head(bank);
  std::vector<TxId> queued;
  queued.swap(bank_queue_);
  for (TxId id : queued) receive_tx(bank, id, bank.spec.id, true);
}

void Engine::on_bank_disconnect() {
  NodeState& bank = nodes_[bank_->value()];
  bank.online = false;
  bank.syncing = false;
  bank.orphans.clear();
  bank.requested.clear();
  bank_connected_ = false;
  last_disconnect_ = now_;
}

void Engine::finalize() {
  ChainView global(genesis_, 0.0);
  for (BlockId id : created_) {
    const Stored& st = store_.at(id);
    global.insert(st.block, st.found_at);
  }
  const BlockId head = global.canonical_head();
  trace_.canonical = global.path_from_genesis(head);
  std::unordered_map<BlockId, std::size_t> on_chain;
  for (std::size_t i = 0; i < trace_.canonical.size(); ++i) on_chain.emplace(trace_.canonical[i], i);

  trace_.blocks.reserve(created_.size());
  for (BlockId id : created_) {
    const Stored& st = store_.at(id);
    trace_.blocks.push_back({st.block, st.found_at, on_chain.count(id) == 0});
  }

  trace_.txs.reserve(txs_.size());
  for (const auto& tx : txs_) trace_.txs.push_back({tx, std::nullopt, std::nullopt, std::nullopt});
  for (std::size_t i = 1; i < trace_.canonical.size(); ++i) {
    const Block& b = *store_.at(trace_.canonical[i]).block;
    for (const auto& tx : b.transactions) {
      TxRecord& rec = trace_.txs[tx.id.value() - 1];
      rec.included_at = b.header.timestamp;
      rec.block = b.id;
      rec.block_number = b.header.number;
    }
  }
  trace_.final_state = store_.at(head).post;

  for (const auto& n : nodes_) {
    NodeFinal f;
    f.id = n.spec.id;
    f.role = n.spec.role;
    f.online = n.online;
    f.head = n.view.canonical_head();
    f.canonical = n.canonical;
    trace_.nodes.push_back(std::move(f));
  }
}

std::vector<Transaction> make_workload(const Scenario& s) {
  workload::Participants who;
  who.users = user_nodes(s);
  who.bank = bank_node(s).value_or(kNoNode);
  Rng rng = make_stream(s.seed, "workload");
  const auto windows = s.nodes.bank ? s.bank.connected_windows : std::vector<TimeWindow>{};
  return workload::generate(s.workload, who, s.horizon_s, windows, rng);
}

void check_replay(const Scenario& s, const std::vector<Transaction>& txs) {
  const std::uint32_t total = s.nodes.miners + s.nodes.full + (s.nodes.bank ? 1u : 0u) + s.nodes.light;
  const auto bank = bank_node(s);
  for (std::size_t i = 0; i < txs.size(); ++i) {
    const Transaction& tx = txs[i];
    std::string problem;
    if (tx.id.value() != i + 1) problem = "ids must run 1..n";
    else if (i > 0 && tx.created_at < txs[i - 1].created_at) problem = "created_at decreases";
    else if (tx.is_exchange() && !bank) problem = "exchange transaction without a bank node";
    else if (tx.sender.value() >= total && tx.sender != bank.value_or(kNoNode)) problem = "unknown sender";
    if (!problem.empty()) {
      throw InvalidScenario({{"workload.replay_file",
                              "transaction " + std::to_string(tx.id.value()) + ": " + problem}});
    }
  }
}

}  // namespace

SimTrace run(const Scenario& scenario, std::optional<std::vector<Transaction>> replay) {
  auto issues = validate(scenario);
  if (!issues.empty()) throw InvalidScenario(std::move(issues));
  std::vector<Transaction> txs;
  if (replay) {
    check_replay(scenario, *replay);
    txs = std::move(*replay);
  } else {
    txs = make_workload(scenario);
  }
  Engine engine(scenario, std::move(txs));
  return engine.run();
}

}  // namespace dtpay::sim
