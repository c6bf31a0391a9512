// Copyright (c) 2026 The dtpay developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

// One line per acceptance criterion; exits non-zero if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <numeric>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "dtpay/analytics/analytics.hpp"
#include "dtpay/chain/block.hpp"
#include "dtpay/common/format.hpp"
#include "dtpay/common/rng.hpp"
#include "dtpay/ledger/ledger.hpp"
#include "dtpay/ledger/partition.hpp"
#include "dtpay/models/models.hpp"
#include "dtpay/runner/config.hpp"
#include "dtpay/runner/runner.hpp"
#include "dtpay/sim/engine.hpp"

using namespace dtpay;
namespace fs = std::filesystem;

namespace {

const fs::path kScenarios = fs::path(DTPAY_SOURCE_DIR) / "scenarios";

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* format, double value) {
  char buf[64];
  std::snprintf(buf, sizeof buf, format, value);
  return buf;
}

std::string list(const std::vector<double>& xs, const char* format = "%.2f") {
  std::string out;
  for (std::size_t i = 0; i < xs.size(); ++i) out += (i ? "/" : "") + fmt(format, xs[i]);
  return out;
}

double spread(const std::vector<double>& xs) {
  const auto [lo, hi] = std::minmax_element(xs.begin(), xs.end());
  return (*hi - *lo) / *lo;
}

sim::Scenario scenario(const std::string& name) { return runner::load_scenario(kScenarios / name); }

double metric(const analytics::Metrics& m, const std::string& name) {
  for (const auto& [k, v] : m) {
    if (k == name) return v;
  }
  throw std::out_of_range("metric " + name + " missing");
}

// Seed-averaged metric per sweep value, in spec order.
std::vector<double> seed_average(const runner::SweepSpec& spec,
                                 const std::vector<runner::SweepPoint>& points,
                                 const std::string& name) {
  std::vector<double> out;
  for (const auto& value : spec.values) {
    double sum = 0.0;
    std::size_t n = 0;
    for (const auto& p : points) {
      if (p.value == value) {
        sum += metric(p.metrics, name);
        ++n;
      }
    }
    out.push_back(sum / static_cast<double>(n));
  }
  return out;
}

std::vector<runner::SweepPoint> sweep(const runner::SweepSpec& spec) {
  return runner::execute_sweep(spec, runner::default_workers());
}

// Zero-disturbance runs at 9000 s (over 500 canonical blocks each), ten
// seeds per arrival rate; each rate gets its own seeds.
struct RateRuns {
  std::vector<double> rates{0.2, 1.0, 5.0, 25.0};
  std::vector<std::vector<sim::SimTrace>> traces;
};

const RateRuns& rate_runs() {
  static const RateRuns runs = [] {
    RateRuns r;
    for (std::size_t i = 0; i < r.rates.size(); ++i) {
      std::vector<sim::SimTrace> per_rate;
      for (std::uint64_t s = 1; s <= 10; ++s) {
        auto sc = scenario("baseline.scenario");
        sc.horizon_s = 9000.0;
        sc.workload.lambda_t = r.rates[i];
        sc.seed = 100 * (i + 1) + s;
        per_rate.push_back(sim::run(sc));
      }
      r.traces.push_back(std::move(per_rate));
    }
    return r;
  }();
  return runs;
}

Outcome criterion1() {
  auto sc = scenario("baseline.scenario");
  sc.horizon_s = 9000.0;
  const auto t0 = std::chrono::steady_clock::now();
  const auto trace = sim::run(sc);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  const auto blocks = analytics::block_times(trace, true);
  const double mean_t = analytics::mean(blocks);
  const auto oracle = models::simulate_tx_processing(1.0, mean_t, 2e6, sc.seed);

  // Processing times are correlated within a block; keep one tx per block.
  Rng thin = make_stream(sc.seed, "thin");
  std::map<std::uint64_t, std::vector<double>> by_block;
  for (const auto& rec : trace.txs) {
    if (rec.included_at) by_block[*rec.block_number].push_back(*rec.included_at - rec.tx.created_at);
  }
  std::vector<double> sim_tx;
  for (const auto& [n, times] : by_block) sim_tx.push_back(times[thin.uniform_int(0, times.size() - 1)]);
  std::map<std::size_t, std::vector<double>> oracle_by_block;
  for (std::size_t i = 0; i < oracle.tx_times.size(); ++i) {
    oracle_by_block[oracle.tx_block[i]].push_back(oracle.tx_times[i]);
  }
  std::vector<double> oracle_tx;
  for (const auto& [n, times] : oracle_by_block) {
    oracle_tx.push_back(times[thin.uniform_int(0, times.size() - 1)]);
  }

  const auto ks_block = analytics::ks_two_sample(blocks, oracle.block_times);
  const auto ks_tx = analytics::ks_two_sample(sim_tx, oracle_tx);
  const bool pass = blocks.size() >= 500 && ks_block.p_value > 0.01 && ks_tx.p_value > 0.01 &&
                    secs < 30.0;
  return {pass, std::to_string(blocks.size()) + " canonical blocks, mean " + fmt("%.2f", mean_t) +
                    " s; KS block p=" + fmt("%.3f", ks_block.p_value) +
                    ", tx p=" + fmt("%.3f", ks_tx.p_value) + " (" +
                    std::to_string(sim_tx.size()) + " thinned txs); run " + fmt("%.1f", secs) + " s"};
}

Outcome criterion2() {
  // model: independent seeds per rate, 1e5 blocks each
  std::vector<analytics::PercentileReport> model;
  const std::vector<double> rates{0.2, 1.0, 5.0, 25.0};
  for (std::size_t i = 0; i < rates.size(); ++i) {
    const auto s = models::simulate_tx_processing(rates[i], 14.4, 14.4 * 1e5, 1000 + i);
    model.push_back(analytics::percentile_report(s.block_times));
  }
  // end-to-end: pooled canonical block times per rate
  const auto& runs = rate_runs();
  std::vector<analytics::PercentileReport> sim;
  std::size_t min_n = SIZE_MAX;
  for (const auto& per_rate : runs.traces) {
    std::vector<double> pooled;
    for (const auto& t : per_rate) {
      const auto b = analytics::block_times(t, true);
      pooled.insert(pooled.end(), b.begin(), b.end());
    }
    min_n = std::min(min_n, pooled.size());
    sim.push_back(analytics::percentile_report(pooled));
  }
  double worst_model = 0.0, worst_sim = 0.0;
  for (std::size_t k = 0; k < analytics::PercentileReport::kRanks.size(); ++k) {
    std::vector<double> m, e;
    for (std::size_t i = 0; i < rates.size(); ++i) {
      m.push_back(model[i].values[k]);
      e.push_back(sim[i].values[k]);
    }
    worst_model = std::max(worst_model, spread(m));
    worst_sim = std::max(worst_sim, spread(e));
  }
  return {worst_model < 0.05 && worst_sim < 0.15 && min_n >= 500,
          "largest percentile spread across rates: model " + fmt("%.1f", 100 * worst_model) +
              " % (1e5 blocks/rate), simulator " + fmt("%.1f", 100 * worst_sim) + " % (" +
              std::to_string(min_n) + "+ blocks/rate)"};
}

Outcome criterion3() {
  const auto& runs = rate_runs();
  double lo = 1e9, hi = 0.0;
  std::size_t fewest = SIZE_MAX, n = 0;
  for (const auto& per_rate : runs.traces) {
    for (const auto& t : per_rate) {
      const auto b = analytics::block_times(t, true);
      const double m = analytics::mean(b);
      lo = std::min(lo, m);
      hi = std::max(hi, m);
      fewest = std::min(fewest, b.size());
      ++n;
    }
  }
  return {lo >= 10.0 && hi <= 20.0 && fewest >= 500,
          std::to_string(n) + " seeds, mean interval " + fmt("%.2f", lo) + ".." + fmt("%.2f", hi) +
              " s, fewest blocks " + std::to_string(fewest)};
}

Outcome criterion4() {
  const auto spec = runner::load_sweep_spec(kScenarios / "delay-sweep.sweep");
  const auto points = sweep(spec);
  const auto p50 = seed_average(spec, points, "block_time_p50");
  const auto diff = seed_average(spec, points, "mean_difficulty");
  const auto stale = seed_average(spec, points, "stale_rate");
  bool decreasing = true, monotone = true;
  for (std::size_t i = 1; i < diff.size(); ++i) {
    decreasing &= diff[i] < diff[i - 1];
    monotone &= stale[i] >= stale[i - 1];
  }
  const double var = spread(p50);
  return {var < 0.20 && decreasing && monotone,
          "p50 " + list(p50) + " s (spread " + fmt("%.1f", 100 * var) + " %); difficulty " +
              list(diff, "%.0f") + (decreasing ? " decreasing" : " NOT decreasing") + "; stale " +
              list(stale, "%.3f") + (monotone ? " non-decreasing" : " NOT monotone")};
}

Outcome criterion5() {
  const auto spec = runner::load_sweep_spec(kScenarios / "churn-transient.sweep");
  const auto points = sweep(spec);
  std::size_t unresolved = 0;
  for (const auto& p : points) unresolved += metric(p.metrics, "resolving_period_s") < 0 ? 1 : 0;
  const auto dur = seed_average(spec, points, "resolving_period_s");
  bool in_band = unresolved == 0;
  for (double d : dur) in_band &= d >= 100.0 && d <= 2000.0;
  const bool ordered = dur.back() > dur.front();
  return {in_band && ordered,
          "mean resolving period for 1..5 offline: " + list(dur, "%.0f") + " s; unresolved runs " +
              std::to_string(unresolved) + "/" + std::to_string(points.size()) + "; window " +
              fmt("%.0f", metric(points.front().metrics, "smoothing_window"))};
}

Outcome criterion6() {
  const auto spec = runner::load_sweep_spec(kScenarios / "churn-steady.sweep");
  const auto points = sweep(spec);
  double worst = 0.0;
  std::string detail;
  for (int rank : analytics::PercentileReport::kRanks) {
    const auto v = seed_average(spec, points, "block_time_p" + std::to_string(rank));
    worst = std::max(worst, spread(v));
    detail += " p" + std::to_string(rank) + " " + list(v, "%.1f") + ";";
  }
  return {worst < 0.25, "churn 0.1..0.5:" + detail + " largest spread " + fmt("%.0f", 100 * worst) + " %"};
}

Outcome criterion7() {
  std::map<long, std::vector<double>> slow, fast;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    for (double bw : {128000.0, 256000.0}) {
      auto sc = scenario("bank-sync.scenario");
      sc.seed = seed;
      sc.bank.backhaul_bw_bps = bw;
      const auto t = sim::run(sc);
      for (const auto& ep : t.sync) {
        if (ep.disconnected_s <= 0.0) continue;
        auto& bucket = bw == 128000.0 ? slow : fast;
        bucket[std::lround(ep.disconnected_s)].push_back(ep.sync_delay_s);
      }
    }
  }
  std::vector<double> x, y;
  double worst_ratio = 0.0;
  for (const auto& [dur, delays] : slow) {
    x.push_back(static_cast<double>(dur));
    y.push_back(analytics::mean(delays));
    const double ratio = analytics::mean(fast.at(dur)) / y.back();
    worst_ratio = std::max(worst_ratio, std::abs(ratio - 0.5) / 0.5);
  }
  const auto fit = analytics::linear_fit(x, y);
  return {fit.r_squared >= 0.95 && worst_ratio < 0.10 && x.size() == 10,
          std::to_string(x.size()) + " disconnection durations, R^2 " + fmt("%.3f", fit.r_squared) +
              ", slope " + fmt("%.4f", fit.slope) + " s/s; 2x bandwidth ratio off 0.5 by at most " +
              fmt("%.1f", 100 * worst_ratio) + " %"};
}

Outcome criterion8() {
  std::vector<std::string> bad;
  auto expect = [&](bool ok, const std::string& what) {
    if (!ok) bad.push_back(what);
  };
  models::CostInputs cost{500, 10, 5, 5, 1e-6, 1e6, 3600, 1, 1000, 10};
  expect(models::system_cost(cost) == 42000.0, "cost");
  const std::vector<double> p3(3, 0.5);
  expect(models::poisson_binomial_pmf(p3, 1) == 0.375, "pmf");
  expect(models::expected_online(20, 0.1) == 18.0, "online");
  expect(std::abs(models::expected_profit({5, 1e-9, 1e6, 12, 10}) - 0.488) < 1e-12, "profit");
  expect(models::max_profitable_miners(5, 1e-9, 1e6, 12) == 416, "max miners");
  expect(models::min_connections(100, 2).l_c == 10, "l_c k=2");
  for (std::uint64_t l_m = 2; l_m <= 100; ++l_m) {
    if (models::min_connections(l_m, 1).l_c != l_m - 1) bad.push_back("l_c k=1");
  }
  expect(models::expected_block_bits(1, 2000, 12) == 24000.0, "block bits");

  Rng rng(8);
  std::size_t dp_cases = 0;
  for (std::size_t n = 0; n <= 12; ++n) {
    for (int rep = 0; rep < 20; ++rep, ++dp_cases) {
      std::vector<double> p(n);
      for (auto& x : p) x = rng.uniform01();
      std::vector<double> brute(n + 1, 0.0);
      for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
        double prob = 1.0;
        for (std::size_t i = 0; i < n; ++i) prob *= (mask >> i) & 1u ? p[i] : 1.0 - p[i];
        brute[static_cast<std::size_t>(__builtin_popcount(mask))] += prob;
      }
      const auto dp = models::poisson_binomial_distribution(p);
      for (std::size_t k = 0; k <= n; ++k) expect(std::abs(dp[k] - brute[k]) < 1e-12, "dp n=" + std::to_string(n));
    }
  }

  const fs::path csv = fs::current_path() / "connectivity_sweep.csv";
  {
    std::ofstream out(csv);
    models::write_connectivity_sweep(out, 4, 100, 4);
  }
  std::ifstream in(csv);
  std::string line;
  std::getline(in, line);
  std::size_t rows = 0;
  while (std::getline(in, line)) {
    unsigned long long l_m, k, l_c;
    if (std::sscanf(line.c_str(), "%llu,%llu,%llu", &l_m, &k, &l_c) != 3) {
      bad.push_back("csv row");
      continue;
    }
    ++rows;
    expect(models::reachable_within(l_c, k) >= l_m, "reach");
    expect(l_c == 1 || models::reachable_within(l_c - 1, k) < l_m, "minimal");
  }
  expect(rows == 97 * 4, "csv rows");
  std::sort(bad.begin(), bad.end());
  bad.erase(std::unique(bad.begin(), bad.end()), bad.end());
  std::string failures;
  for (const auto& b : bad) failures += " " + b;
  return {bad.empty(), bad.empty() ? "worked examples exact; DP = enumeration on " +
                                         std::to_string(dp_cases) + " cases; " +
                                         std::to_string(rows) + " sweep rows minimal (" +
                                         csv.filename().string() + ")"
                                   : "failed:" + failures};
}

ledger::LedgerState replay(const sim::SimTrace& t, const std::vector<BlockId>& chain) {
  auto state = t.genesis_state;
  for (std::size_t i = 1; i < chain.size(); ++i) {
    state = ledger::apply_block(std::move(state), *t.find(chain[i])->block);
  }
  return state;
}

Outcome criterion9() {
  // 1e5-transaction fuzz
  Rng rng(99);
  const NodeId bank{1000};
  auto s = ledger::make_ledger(bank, 0);
  const std::uint32_t users = 20;
  for (std::uint32_t u = 0; u < users; ++u) {
    s = ledger::admit(s, NodeId{u}, ledger::Role::user);
    s.accounts.at(NodeId{u}).fiat_balance = 1000;
  }
  const auto total0 = s.fiat_total() + s.token_supply();
  bool conserved = true;
  std::size_t applied = 0;
  for (std::uint64_t i = 1; i <= 100000; ++i) {
    ledger::Transaction tx;
    tx.id = TxId{i};
    tx.amount = rng.uniform_int(0, 300);
    const NodeId a{static_cast<std::uint32_t>(rng.uniform_int(0, users - 1))};
    const NodeId b{static_cast<std::uint32_t>(rng.uniform_int(0, users - 1))};
    switch (rng.uniform_int(0, 2)) {
      case 0: tx.kind = ledger::TxKind::regular; tx.sender = a; tx.receiver = b; break;
      case 1: tx.kind = ledger::TxKind::exchange_to_token; tx.sender = bank; tx.receiver = a; break;
      default: tx.kind = ledger::TxKind::exchange_to_fiat; tx.sender = a; tx.receiver = bank; break;
    }
    applied += ledger::apply_transaction_in_place(s, tx) ? 0 : 1;
    conserved &= s.fiat_total() + s.token_supply() == total0 &&
                 s.token_supply() == s.tokens_exchanged_in - s.tokens_exchanged_out;
    for (const auto& [id, acct] : s.accounts) {
      conserved &= acct.fiat_balance <= total0 && acct.token_balance <= total0;  // no wrap-around
    }
  }

  // replay every non-light node's chain after each disturbance scenario
  std::vector<std::pair<std::string, sim::Scenario>> runs;
  runs.emplace_back("churn-transient", scenario("churn-transient.scenario"));
  runs.emplace_back("churn-steady", scenario("churn-steady.scenario"));
  runs.emplace_back("bank-sync", scenario("bank-sync.scenario"));
  auto delayed = scenario("baseline.scenario");
  delayed.disturbance.link_delay_ms = 1000;
  runs.emplace_back("delay-1000ms", delayed);
  auto split = scenario("baseline.scenario");
  split.disturbance.partition = sim::PartitionSpec{{NodeId{0}, NodeId{1}, NodeId{2}, NodeId{3}}, 1800, 3600};
  runs.emplace_back("partition", split);
  std::size_t perspectives = 0;
  bool replay_ok = true;
  std::string broken;
  for (auto& [name, sc] : runs) {
    const auto t = sim::run(sc);
    if (!(replay(t, t.canonical) == t.final_state)) {
      replay_ok = false;
      broken += " " + name;
    }
    std::map<BlockId, ledger::LedgerState> by_head;
    for (const auto& n : t.nodes) {
      if (n.role == sim::NodeRole::light) continue;
      ++perspectives;
      auto state = replay(t, n.canonical);
      auto again = replay(t, n.canonical);
      const auto [it, fresh] = by_head.emplace(n.head, state);
      if (!(state == again) || !(it->second == state)) {
        replay_ok = false;
        broken += " " + name;
      }
    }
  }

  // partition detection against union-find on 1000 random graphs
  std::size_t graph_mismatch = 0;
  Rng g(2024);
  for (int round = 0; round < 1000; ++round) {
    const std::uint32_t n = 1 + static_cast<std::uint32_t>(g.uniform_int(0, 29));
    std::vector<std::uint32_t> parent(n);
    std::iota(parent.begin(), parent.end(), 0u);
    std::function<std::uint32_t(std::uint32_t)> find = [&](std::uint32_t x) {
      return parent[x] == x ? x : parent[x] = find(parent[x]);
    };
    ledger::ConnectionMap map;
    for (std::uint32_t i = 0; i < n; ++i) map[NodeId{i}];
    const double p = g.uniform01() * 3.0 / n;
    for (std::uint32_t i = 0; i < n; ++i) {
      for (std::uint32_t j = 0; j < n; ++j) {
        if (i != j && g.bernoulli(p)) {
          map[NodeId{i}].insert(NodeId{j});
          parent[find(i)] = find(j);
        }
      }
    }
    std::map<std::uint32_t, std::set<NodeId>> expected;
    for (std::uint32_t i = 0; i < n; ++i) expected[find(i)].insert(NodeId{i});
    const auto groups = ledger::detect_partition(map, NodeId{0});
    std::set<std::set<NodeId>> got(groups.begin(), groups.end()), want;
    for (const auto& [root, members] : expected) want.insert(members);
    if (got != want || groups.size() != want.size() || !groups.front().count(NodeId{0})) ++graph_mismatch;
  }

  return {conserved && replay_ok && graph_mismatch == 0,
          "fuzz 100000 txs (" + std::to_string(applied) + " applied) " +
              (conserved ? "conserved" : "NOT conserved") + "; " + std::to_string(perspectives) +
              " node chains replayed over " + std::to_string(runs.size()) + " disturbance runs" +
              (replay_ok ? "" : " with mismatches:" + broken) + "; partition oracle mismatches " +
              std::to_string(graph_mismatch) + "/1000"};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

Outcome criterion10() {
  const fs::path root = fs::temp_directory_path() / "dtpay-acceptance-rerun";
  fs::remove_all(root);
  std::size_t scenarios = 0, files = 0, differing = 0;
  std::ostringstream log, err;
  for (const auto& entry : fs::directory_iterator(kScenarios)) {
    if (entry.path().extension() != ".scenario") continue;
    ++scenarios;
    const auto first = root / entry.path().stem() / "first";
    const auto second = root / entry.path().stem() / "second";
    if (runner::run_scenario(entry.path(), first, std::nullopt, log, err) != runner::kOk ||
        runner::run_scenario(first / "manifest.ini", second, std::nullopt, log, err) != runner::kOk) {
      ++differing;
      continue;
    }
    for (const auto& f : fs::directory_iterator(first)) {
      ++files;
      if (slurp(f.path()) != slurp(second / f.path().filename())) ++differing;
    }
  }
  fs::remove_all(root);
  return {differing == 0 && scenarios > 0,
          std::to_string(scenarios) + " scenarios rerun from manifest, " + std::to_string(files) +
              " artifacts compared, " + std::to_string(differing) + " differ" +
              (err.str().empty() ? "" : "; " + err.str())};
}

}  // namespace

int main() {
  const std::vector<std::function<Outcome()>> criteria{criterion1, criterion2, criterion3,
                                                       criterion4, criterion5, criterion6,
                                                       criterion7, criterion8, criterion9,
                                                       criterion10};
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i]();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failed += o.pass ? 0 : 1;
    std::cout << "criterion " << i + 1 << ": " << (o.pass ? "PASS" : "FAIL") << ": " << o.detail
              << std::endl;
  }
  std::cout << (criteria.size() - failed) << "/" << criteria.size() << " criteria pass" << std::endl;
  return failed == 0 ? 0 : 1;
}
