// Copyright (c) 2026 The dtpay developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#include "dtpay/runner/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "dtpay/chain/block.hpp"
#include "dtpay/common/format.hpp"

namespace dtpay::runner {

const IniEntry* IniSection::find(const std::string& key) const {
  for (const auto& e : entries) {
    if (e.key == key) return &e;
  }
  return nullptr;
}

const IniSection* IniDocument::find(const std::string& name) const {
  for (const auto& s : sections) {
    if (s.name == name) return &s;
  }
  return nullptr;
}

void IniDocument::set(const std::string& section, const std::string& key, const std::string& value) {
  IniSection* target = nullptr;
  for (auto& s : sections) {
    if (s.name == section) target = &s;
  }
  if (!target) {
    sections.push_back({section, 0, {}});
    target = &sections.back();
  }
  for (auto& e : target->entries) {
    if (e.key == key) {
      e.value = value;
      return;
    }
  }
  target->entries.push_back({key, value, 0});
}

ConfigError::ConfigError(std::vector<ConfigIssue> issues)
    : std::runtime_error(issues.empty() ? std::string("invalid configuration")
                                        : issues.front().field + ": " + issues.front().message),
      issues_(std::move(issues)) {}

std::string describe(const ConfigError& error, const std::string& source) {
  std::string text;
  for (const auto& issue : error.issues()) {
    text += source;
    if (issue.line > 0) text += ":" + std::to_string(issue.line);
    text += ": " + issue.field + ": " + issue.message + "\n";
  }
  return text;
}

IniDocument parse_ini(std::istream& in) {
  IniDocument doc;
  std::vector<ConfigIssue> issues;
  std::string raw;
  std::size_t line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const std::string_view text = trim(raw);
    if (text.empty() || text.front() == '#' || text.front() == ';') continue;
    if (text.front() == '[') {
      if (text.back() != ']' || text.size() < 3) {
        issues.push_back({line, "syntax", "malformed section header"});
        continue;
      }
      std::string name(trim(text.substr(1, text.size() - 2)));
      if (doc.find(name)) {
        issues.push_back({line, name, "section appears twice"});
        continue;
      }
      doc.sections.push_back({std::move(name), line, {}});
      continue;
    }
    const auto eq = text.find('=');
    if (eq == std::string_view::npos) {
      issues.push_back({line, "syntax", "expected key = value"});
      continue;
    }
    if (doc.sections.empty()) {
      issues.push_back({line, "syntax", "key outside of any section"});
      continue;
    }
    IniSection& section = doc.sections.back();
    std::string key(trim(text.substr(0, eq)));
    std::string value(trim(text.substr(eq + 1)));
    if (key.empty()) {
      issues.push_back({line, "syntax", "empty key"});
      continue;
    }
    if (section.find(key)) {
      issues.push_back({line, section.name + "." + key, "key appears twice"});
      continue;
    }
    section.entries.push_back({std::move(key), std::move(value), line});
  }
  if (!issues.empty()) throw ConfigError(std::move(issues));
  return doc;
}

namespace {

std::vector<std::string_view> split(std::string_view text, char sep) {
  std::vector<std::string_view> parts;
  if (trim(text).empty()) return parts;
  std::size_t start = 0;
  while (true) {
    const auto pos = text.find(sep, start);
    parts.push_back(trim(text.substr(start, pos == std::string_view::npos ? pos : pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return parts;
}

bool parse_value(std::string_view text, std::uint64_t& out) {
  int base = 10;
  if (text.size() > 2 && text[0] == '0' && (text[1] == 'x' || text[1] == 'X')) {
    text.remove_prefix(2);
    base = 16;
  }
  const auto res = std::from_chars(text.data(), text.data() + text.size(), out, base);
  return res.ec == std::errc() && res.ptr == text.data() + text.size() && !text.empty();
}

bool parse_value(std::string_view text, std::uint32_t& out) {
  std::uint64_t wide = 0;
  if (!parse_value(text, wide) || wide > 0xffffffffULL) return false;
  out = static_cast<std::uint32_t>(wide);
  return true;
}

bool parse_value(std::string_view text, double& out) {
  const auto res = std::from_chars(text.data(), text.data() + text.size(), out);
  return res.ec == std::errc() && res.ptr == text.data() + text.size() && std::isfinite(out);
}

bool parse_value(std::string_view text, bool& out) {
  if (text == "true" || text == "yes" || text == "1") {
    out = true;
  } else if (text == "false" || text == "no" || text == "0") {
    out = false;
  } else {
    return false;
  }
  return true;
}

bool parse_value(std::string_view text, std::string& out) {
  out = std::string(text);
  return true;
}

bool parse_value(std::string_view text, std::optional<double>& out) {
  if (text.empty() || text == "none") {
    out.reset();
    return true;
  }
  double v = 0.0;
  if (!parse_value(text, v)) return false;
  out = v;
  return true;
}

bool parse_value(std::string_view text, NodeId& out) {
  std::uint32_t v = 0;
  if (!parse_value(text, v)) return false;
  out = NodeId{v};
  return true;
}

bool parse_value(std::string_view text, std::optional<NodeId>& out) {
  if (text.empty() || text == "none") {
    out.reset();
    return true;
  }
  NodeId id{};
  if (!parse_value(text, id)) return false;
  out = id;
  return true;
}

bool parse_value(std::string_view text, std::vector<NodeId>& out) {
  out.clear();
  for (auto part : split(text, ',')) {
    NodeId id{};
    if (!parse_value(part, id)) return false;
    out.push_back(id);
  }
  return true;
}

bool parse_value(std::string_view text, std::vector<std::pair<NodeId, NodeId>>& out) {
  out.clear();
  for (auto part : split(text, ',')) {
    const auto ends = split(part, '-');
    NodeId a{};
    NodeId b{};
    if (ends.size() != 2 || !parse_value(ends[0], a) || !parse_value(ends[1], b)) return false;
    out.emplace_back(a, b);
  }
  return true;
}

bool parse_value(std::string_view text, std::vector<TimeWindow>& out) {
  out.clear();
  for (auto part : split(text, ',')) {
    const auto ends = split(part, ':');
    TimeWindow w;
    if (ends.size() != 2 || !parse_value(ends[0], w.start_s) || !parse_value(ends[1], w.end_s)) {
      return false;
    }
    out.push_back(w);
  }
  return true;
}

bool parse_value(std::string_view text, sim::TopologyKind& out) {
  const auto kind = sim::parse_topology_kind(text);
  if (!kind) return false;
  out = *kind;
  return true;
}

struct Capacity {
  std::uint64_t& bits;
};

bool parse_value(std::string_view text, Capacity out) {
  if (text == "unlimited") {
    out.bits = chain::kUnlimitedCapacity;
    return true;
  }
  return parse_value(text, out.bits);
}

class Reader {
 public:
  Reader(const IniDocument& doc, std::vector<ConfigIssue>& issues,
         std::map<std::string, std::size_t>& lines)
      : doc_(doc), issues_(issues), lines_(lines) {}

  bool enter(const std::string& name, bool required) {
    section_ = doc_.find(name);
    name_ = name;
    if (!section_) {
      if (required) issues_.push_back({0, name, "required section [" + name + "] is missing"});
      return false;
    }
    lines_[name] = section_->line;
    used_.clear();
    return true;
  }

  template <typename T>
  void read(const char* key, T&& target, const char* what, bool required = false) {
    used_.insert(key);
    const std::string field = name_ + "." + key;
    const IniEntry* e = section_ ? section_->find(key) : nullptr;
    if (!e) {
      if (required) {
        issues_.push_back({section_ ? section_->line : 0, field, "required key is missing"});
      }
      return;
    }
    lines_[field] = e->line;
    if (!parse_value(e->value, std::forward<T>(target))) {
      issues_.push_back({e->line, field, "cannot parse '" + e->value + "' as " + what});
    }
  }

  void finish() {
    if (!section_) return;
    for (const auto& e : section_->entries) {
      if (!used_.count(e.key)) issues_.push_back({e.line, name_ + "." + e.key, "unknown key"});
    }
  }

 private:
  const IniDocument& doc_;
  std::vector<ConfigIssue>& issues_;
  std::map<std::string, std::size_t>& lines_;
  const IniSection* section_ = nullptr;
  std::string name_;
  std::set<std::string> used_;
};

const std::set<std::string> kSections{"run",  "genesis",  "nodes",    "topology", "disturbance",
                                      "bank", "workload", "ledger",   "manifest"};

}  // namespace

sim::Scenario scenario_from_ini(const IniDocument& doc) {
  std::vector<ConfigIssue> issues;
  std::map<std::string, std::size_t> lines;
  for (const auto& s : doc.sections) {
    if (!kSections.count(s.name)) issues.push_back({s.line, s.name, "unknown section"});
  }

  sim::Scenario sc;
  Reader r(doc, issues, lines);
  if (r.enter("run", true)) {
    r.read("seed", sc.seed, "an unsigned integer", true);
    r.read("horizon_s", sc.horizon_s, "seconds");
    r.read("observer", sc.observer, "a node id");
    r.read("measurement_interval_s", sc.measurement_interval_s, "seconds");
    r.read("mining_stop_s", sc.mining_stop_s, "seconds");
    r.read("smoothing_window", sc.smoothing_window, "a block count");
    r.finish();
  }
  if (r.enter("genesis", true)) {
    r.read("nonce_seed", sc.genesis.nonce_seed, "an unsigned integer");
    r.read("initial_difficulty", sc.genesis.initial_difficulty, "an unsigned integer");
    r.read("block_capacity_bits", Capacity{sc.genesis.block_capacity_bits},
           "a bit count or 'unlimited'");
    r.finish();
  }
  if (r.enter("nodes", true)) {
    r.read("miners", sc.nodes.miners, "a count");
    r.read("full", sc.nodes.full, "a count");
    r.read("light", sc.nodes.light, "a count");
    r.read("bank", sc.nodes.bank, "true or false");
    r.read("miner_hashrate_hps", sc.nodes.miner_hashrate_hps, "hashes per second");
    r.read("light_uplinks", sc.nodes.light_uplinks, "a count");
    r.finish();
  }
  if (r.enter("topology", false)) {
    r.read("kind", sc.topology.kind, "full-mesh, ring, star or explicit");
    r.read("edges", sc.topology.edges, "a list of a-b node pairs");
    r.finish();
  }
  if (r.enter("disturbance", false)) {
    auto& d = sc.disturbance;
    r.read("link_delay_ms", d.link_delay_ms, "milliseconds");
    r.read("churn_rate", d.churn_rate, "a probability");
    r.read("churn_epoch_s", d.churn_epoch_s, "seconds");
    r.read("churn_full_nodes", d.churn_full_nodes, "true or false");
    r.read("outage_count", d.outage.count, "a count");
    r.read("outage_at_s", d.outage.at_s, "seconds");
    r.read("outage_end_s", d.outage.end_s, "seconds");
    sim::PartitionSpec p;
    r.read("partition_nodes", p.side, "a list of node ids");
    r.read("partition_start_s", p.start_s, "seconds");
    r.read("partition_end_s", p.end_s, "seconds");
    if (!p.side.empty()) d.partition = p;
    r.finish();
  }
  if (r.enter("bank", false)) {
    auto& b = sc.bank;
    r.read("windows", b.connected_windows, "a list of start:end windows");
    r.read("backhaul_bw_bps", b.backhaul_bw_bps, "bits per second");
    r.read("bw_cost_per_bit", b.bw_cost_per_bit, "Tokens per bit");
    r.read("header_bits", b.header_bits, "a bit count");
    r.read("sync_overhead_s_per_block", b.sync_overhead_s_per_block, "seconds");
    r.finish();
  }
  if (r.enter("workload", false)) {
    auto& w = sc.workload;
    r.read("lambda_t_tps", w.lambda_t, "transactions per second");
    r.read("lambda_e_tps", w.lambda_e, "transactions per second");
    r.read("s_t_bits", w.s_t_bits, "a bit count");
    r.read("s_e_bits", w.s_e_bits, "a bit count");
    r.read("amount_min", w.amount_min, "an amount");
    r.read("amount_max", w.amount_max, "an amount");
    r.read("exchange_to_token_share", w.exchange_to_token_share, "a fraction");
    r.read("replay_file", sc.workload_replay, "a path");
    r.finish();
  }
  if (r.enter("ledger", false)) {
    r.read("reward_per_block", sc.ledger.reward_per_block, "Tokens");
    r.read("initial_fiat", sc.ledger.initial_fiat, "an amount");
    r.read("initial_tokens", sc.ledger.initial_tokens, "Tokens");
    r.finish();
  }
  if (!issues.empty()) throw ConfigError(std::move(issues));

  for (const auto& v : sim::validate(sc)) {
    std::size_t line = 0;
    if (auto it = lines.find(v.field); it != lines.end()) {
      line = it->second;
    } else if (auto sec = lines.find(v.field.substr(0, v.field.find('.'))); sec != lines.end()) {
      line = sec->second;
    }
    issues.push_back({line, v.field, v.message});
  }
  if (!issues.empty()) throw ConfigError(std::move(issues));
  return sc;
}

sim::Scenario parse_scenario(std::istream& in) { return scenario_from_ini(parse_ini(in)); }

IniDocument load_ini(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError({{0, "file", "cannot read " + path.string()}});
  return parse_ini(in);
}

sim::Scenario load_scenario(const std::filesystem::path& path) {
  return scenario_from_ini(load_ini(path));
}

namespace {

std::string join_ids(const std::vector<NodeId>& ids) {
  std::string out;
  for (std::size_t i = 0; i < ids.size(); ++i) {
    if (i) out += ", ";
    out += std::to_string(ids[i].value());
  }
  return out;
}

std::string opt(const std::optional<double>& v) { return v ? format_double(*v) : std::string(); }

}  // namespace

void write_scenario(std::ostream& out, const sim::Scenario& sc) {
  out << "[run]\n"
      << "seed = " << sc.seed << '\n'
      << "horizon_s = " << format_double(sc.horizon_s) << '\n'
      << "observer = " << (sc.observer ? std::to_string(sc.observer->value()) : std::string()) << '\n'
      << "measurement_interval_s = " << format_double(sc.measurement_interval_s) << '\n'
      << "mining_stop_s = " << opt(sc.mining_stop_s) << '\n'
      << "smoothing_window = " << sc.smoothing_window << '\n';

  out << "\n[genesis]\n"
      << "nonce_seed = 0x" << format_hex64(sc.genesis.nonce_seed) << '\n'
      << "initial_difficulty = " << sc.genesis.initial_difficulty << '\n'
      << "block_capacity_bits = "
      << (sc.genesis.block_capacity_bits == chain::kUnlimitedCapacity
              ? std::string("unlimited")
              : std::to_string(sc.genesis.block_capacity_bits))
      << '\n';

  const auto& n = sc.nodes;
  out << "\n[nodes]\n"
      << "miners = " << n.miners << '\n'
      << "full = " << n.full << '\n'
      << "light = " << n.light << '\n'
      << "bank = " << (n.bank ? "true" : "false") << '\n'
      << "miner_hashrate_hps = " << format_double(n.miner_hashrate_hps) << '\n'
      << "light_uplinks = " << n.light_uplinks << '\n';

  out << "\n[topology]\n"
      << "kind = " << sim::to_string(sc.topology.kind) << '\n'
      << "edges = ";
  for (std::size_t i = 0; i < sc.topology.edges.size(); ++i) {
    if (i) out << ", ";
    out << sc.topology.edges[i].first.value() << '-' << sc.topology.edges[i].second.value();
  }
  out << '\n';

  const auto& d = sc.disturbance;
  out << "\n[disturbance]\n"
      << "link_delay_ms = " << format_double(d.link_delay_ms) << '\n'
      << "churn_rate = " << format_double(d.churn_rate) << '\n'
      << "churn_epoch_s = " << format_double(d.churn_epoch_s) << '\n'
      << "churn_full_nodes = " << (d.churn_full_nodes ? "true" : "false") << '\n'
      << "outage_count = " << d.outage.count << '\n'
      << "outage_at_s = " << format_double(d.outage.at_s) << '\n'
      << "outage_end_s = " << opt(d.outage.end_s) << '\n';
  if (d.partition) {
    out << "partition_nodes = " << join_ids(d.partition->side) << '\n'
        << "partition_start_s = " << format_double(d.partition->start_s) << '\n'
        << "partition_end_s = " << format_double(d.partition->end_s) << '\n';
  }

  const auto& b = sc.bank;
  out << "\n[bank]\n"
      << "windows = ";
  for (std::size_t i = 0; i < b.connected_windows.size(); ++i) {
    if (i) out << ", ";
    out << format_double(b.connected_windows[i].start_s) << ':'
        << format_double(b.connected_windows[i].end_s);
  }
  out << '\n'
      << "backhaul_bw_bps = " << format_double(b.backhaul_bw_bps) << '\n'
      << "bw_cost_per_bit = " << format_double(b.bw_cost_per_bit) << '\n'
      << "header_bits = " << b.header_bits << '\n'
      << "sync_overhead_s_per_block = " << format_double(b.sync_overhead_s_per_block) << '\n';

  const auto& w = sc.workload;
  out << "\n[workload]\n"
      << "lambda_t_tps = " << format_double(w.lambda_t) << '\n'
      << "lambda_e_tps = " << format_double(w.lambda_e) << '\n'
      << "s_t_bits = " << w.s_t_bits << '\n'
      << "s_e_bits = " << w.s_e_bits << '\n'
      << "amount_min = " << w.amount_min << '\n'
      << "amount_max = " << w.amount_max << '\n'
      << "exchange_to_token_share = " << format_double(w.exchange_to_token_share) << '\n'
      << "replay_file = " << sc.workload_replay << '\n';

  out << "\n[ledger]\n"
      << "reward_per_block = " << sc.ledger.reward_per_block << '\n'
      << "initial_fiat = " << sc.ledger.initial_fiat << '\n'
      << "initial_tokens = " << sc.ledger.initial_tokens << '\n';
}

std::string serialize_scenario(const sim::Scenario& scenario) {
  std::ostringstream out;
  write_scenario(out, scenario);
  return out.str();
}

}  // namespace dtpay::runner
