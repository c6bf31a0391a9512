// Copyright (c) 2026 The dtpay developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#include <doctest.h>

#include <algorithm>
#include <functional>
#include <map>
#include <memory>

#include "dtpay/chain/chain_view.hpp"
#include "dtpay/chain/difficulty.hpp"
#include "dtpay/chain/genesis.hpp"
#include "dtpay/chain/validation.hpp"
#include "dtpay/common/rng.hpp"
#include "dtpay/ledger/ledger.hpp"

using namespace dtpay;
using namespace dtpay::chain;

namespace {

BlockPtr genesis_ptr(std::uint64_t difficulty = 0x400000) {
  GenesisConfig config;
  config.initial_difficulty = difficulty;
  return std::make_shared<const Block>(make_genesis(config));
}

// Child of `parent` mined `gap` seconds later with a valid difficulty.
BlockPtr child_of(const Block& parent, double gap, NodeId miner = NodeId{0}) {
  auto b = std::make_shared<Block>();
  b->header.number = parent.header.number + 1;
  b->header.parent_id = parent.id;
  b->header.timestamp = parent.header.timestamp + gap;
  b->header.difficulty = adjust_difficulty(parent.header.difficulty, parent.header.timestamp,
                                           b->header.timestamp);
  b->header.miner = miner;
  b->header.capacity_bits = parent.header.capacity_bits;
  b->id = make_block_id(miner, b->header.number, b->header.timestamp, 0x42);
  return b;
}

}  // namespace

TEST_CASE("difficulty multiplier follows the retarget bands") {
  CHECK(difficulty_multiplier(0.5) == 1);
  CHECK(difficulty_multiplier(9.999) == 1);
  CHECK(difficulty_multiplier(10.0) == 0);
  CHECK(difficulty_multiplier(19.99) == 0);
  CHECK(difficulty_multiplier(20.0) == -1);
  CHECK(difficulty_multiplier(35.0) == -2);
  CHECK(difficulty_multiplier(999.0) == -98);
  CHECK(difficulty_multiplier(1000.0) == -99);
  CHECK(difficulty_multiplier(1e6) == -99);
  CHECK_THROWS_AS(difficulty_multiplier(0.0), std::invalid_argument);
  CHECK_THROWS_AS(difficulty_multiplier(-3.0), std::invalid_argument);
}

TEST_CASE("difficulty adjusts by parent/2048 steps") {
  CHECK(adjust_difficulty(0x400000, 0.0, 5.0) == 4196352);
  CHECK(adjust_difficulty(0x400000, 0.0, 15.0) == 4194304);
  CHECK(adjust_difficulty(0x400000, 0.0, 25.0) == 4194304 - 2048);
  CHECK(adjust_difficulty(0x400000, 0.0, 1500.0) == 3991552);
  CHECK(adjust_difficulty(1024, 0.0, 5000.0) == kMinimumDifficulty);
  CHECK(adjust_difficulty(2047, 0.0, 5.0) == 2047);  // step rounds down to zero
}

TEST_CASE("difficulty over a random gap matches a direct evaluation") {
  Rng rng(11);
  for (int i = 0; i < 2000; ++i) {
    const std::uint64_t parent = 1024 + rng.uniform_int(0, 1u << 30);
    const double gap = 1e-3 + rng.uniform01() * 1200.0;
    long a = gap < 10 ? 1 : gap < 20 ? 0 : std::max(-99L, 1 - static_cast<long>(gap / 10));
    const long expected = std::max<long>(1024, static_cast<long>(parent) + static_cast<long>(parent / 2048) * a);
    CHECK(adjust_difficulty(parent, 100.0, 100.0 + gap) == static_cast<std::uint64_t>(expected));
  }
}

TEST_CASE("genesis is deterministic and checked") {
  GenesisConfig config;
  CHECK(make_genesis(config).id == make_genesis(config).id);
  GenesisConfig other;
  other.nonce_seed = 0x43;
  CHECK(make_genesis(config).id != make_genesis(other).id);
  CHECK(make_genesis(config).header.number == 0);
  config.initial_difficulty = 1000;
  CHECK_THROWS(make_genesis(config));
}

TEST_CASE("chain view tracks the heaviest head") {
  auto g = genesis_ptr();
  ChainView view(g);
  CHECK(view.canonical_head() == g->id);

  auto a1 = child_of(*g, 5.0, NodeId{1});   // heavier: quick block raises difficulty
  auto b1 = child_of(*g, 15.0, NodeId{2});
  REQUIRE(view.insert(b1, 15.0));
  CHECK(view.canonical_head() == b1->id);
  REQUIRE(view.insert(a1, 16.0));
  CHECK(view.canonical_head() == a1->id);
  CHECK_FALSE(view.insert(a1, 17.0));
  CHECK(view.heads().size() == 2);
  CHECK(view.path_from_genesis(a1->id) == std::vector<BlockId>{g->id, a1->id});

  auto orphan = child_of(*child_of(*g, 3.0, NodeId{3}), 3.0, NodeId{3});
  CHECK_THROWS_AS(view.insert(orphan, 20.0), UnknownBlock);
}

TEST_CASE("equal total difficulty keeps the first-seen head") {
  auto g = genesis_ptr();
  auto x = child_of(*g, 12.0, NodeId{1});
  auto y = child_of(*g, 14.0, NodeId{2});
  REQUIRE(x->header.difficulty == y->header.difficulty);

  ChainView first_x(g);
  first_x.insert(x, 20.0);
  first_x.insert(y, 21.0);
  CHECK(first_x.canonical_head() == x->id);

  ChainView first_y(g);
  first_y.insert(y, 20.0);
  first_y.insert(x, 21.0);
  CHECK(first_y.canonical_head() == y->id);
  CHECK(select_canonical(first_y) == y->id);
}

TEST_CASE("canonical head matches a recursive path-sum oracle on random trees") {
  Rng rng(5);
  for (int round = 0; round < 200; ++round) {
    auto g = genesis_ptr(1u << 20);
    ChainView view(g);
    std::vector<BlockPtr> blocks{g};
    std::map<BlockId, double> received{{g->id, 0.0}};
    const int n = 2 + static_cast<int>(rng.uniform_int(0, 40));
    for (int i = 0; i < n; ++i) {
      const auto& parent = blocks[rng.uniform_int(0, blocks.size() - 1)];
      // Gaps of 5 or 15 s give ties in total difficulty fairly often.
      const double gap = rng.bernoulli(0.5) ? 5.0 : 15.0;
      auto b = child_of(*parent, gap, NodeId{static_cast<std::uint32_t>(i)});
      const double at = static_cast<double>(rng.uniform_int(0, 5));
      view.insert(b, at);
      received[b->id] = at;
      blocks.push_back(b);
    }

    std::map<BlockId, BlockPtr> by_id;
    for (const auto& b : blocks) by_id[b->id] = b;
    std::function<std::uint64_t(BlockId)> weight = [&](BlockId id) -> std::uint64_t {
      const auto& b = by_id.at(id);
      return b->header.difficulty + (b->header.number == 0 ? 0 : weight(b->header.parent_id));
    };
    BlockId best = g->id;
    for (const auto& b : blocks) {
      const auto wb = weight(b->id);
      const auto wbest = weight(best);
      if (wb > wbest || (wb == wbest && (received[b->id] < received[best] ||
                                         (received[b->id] == received[best] && b->id < best)))) {
        best = b->id;
      }
    }
    CHECK(view.canonical_head() == best);
    CHECK(select_canonical(view) == best);
    CHECK(total_difficulty(view, best) == weight(best));
  }
}

TEST_CASE("header validation names the broken rule") {
  auto g = genesis_ptr();
  ChainView view(g);
  auto good = child_of(*g, 12.0);
  CHECK(validate_header(good->header, view).accepted());

  auto h = good->header;
  h.parent_id = BlockId{12345};
  CHECK(validate_header(h, view).reject == RejectReason::unknown_parent);
  h = good->header;
  h.number = 7;
  CHECK(validate_header(h, view).reject == RejectReason::bad_number);
  h = good->header;
  h.timestamp = 0.0;
  CHECK(validate_header(h, view).reject == RejectReason::bad_timestamp);
  h = good->header;
  h.difficulty += 1;
  CHECK(validate_header(h, view).reject == RejectReason::bad_difficulty);
  CHECK(to_string(RejectReason::bad_difficulty) == "bad-difficulty");
}

TEST_CASE("block validation checks miner admission and transactions") {
  auto g = genesis_ptr();
  ChainView view(g);
  auto state = ledger::make_ledger(NodeId{99}, 5);
  state = ledger::admit(state, NodeId{0}, ledger::Role::miner);
  state = ledger::admit(state, NodeId{1}, ledger::Role::user);
  state = ledger::admit(state, NodeId{2}, ledger::Role::user);
  state.accounts.at(NodeId{1}).token_balance = 50;

  auto block = std::make_shared<Block>(*child_of(*g, 12.0, NodeId{0}));
  CHECK(validate_block(*block, view, state).accepted());

  ledger::Transaction tx;
  tx.id = TxId{1};
  tx.sender = NodeId{1};
  tx.receiver = NodeId{2};
  tx.amount = 30;
  tx.size_bits = 4000;
  block->transactions = {tx};
  CHECK(validate_block(*block, view, state).accepted());
  tx.id = TxId{2};
  block->transactions.push_back(tx);  // 60 > 50
  CHECK(validate_block(*block, view, state).reject == RejectReason::bad_transaction);

  auto stranger = child_of(*g, 12.0, NodeId{7});
  CHECK(validate_block(*stranger, view, state).reject == RejectReason::unauthorized_miner);
}
