// Copyright (c) 2026 The dtpay developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#include "dtpay/runner/runner.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>

#include "dtpay/common/format.hpp"
#include "dtpay/common/rng.hpp"
#include "dtpay/ledger/ledger_csv.hpp"
#include "dtpay/runner/config.hpp"
#include "dtpay/sim/engine.hpp"
#include "dtpay/workload/workload.hpp"

namespace dtpay::runner {

namespace fs = std::filesystem;

sim::SimTrace simulate(const sim::Scenario& scenario, const fs::path& base_dir) {
  if (scenario.workload_replay.empty()) return sim::run(scenario);
  fs::path path(scenario.workload_replay);
  if (path.is_relative()) path = base_dir / path;
  std::ifstream in(path);
  if (!in) throw ConfigError({{0, "workload.replay_file", "cannot read " + path.string()}});
  try {
    return sim::run(scenario, workload::read_workload_csv(in));
  } catch (const workload::WorkloadFormatError& e) {
    throw ConfigError({{0, "workload.replay_file",
                        path.string() + " line " + std::to_string(e.line()) + ": " + e.what()}});
  }
}

analytics::RunOptions analysis_options(const sim::Scenario& scenario) {
  analytics::RunOptions options;
  if (scenario.disturbance.outage.count > 0) options.disturbance_t0 = scenario.disturbance.outage.at_s;
  options.smoothing_window = scenario.smoothing_window;
  return options;
}

namespace {

void report_invalid(const sim::InvalidScenario& e, const std::string& source, std::ostream& err) {
  for (const auto& issue : e.issues()) err << source << ": " << issue.field << ": " << issue.message << '\n';
}

std::string digest_of(const std::string& text) { return format_hex64(fnv1a64(text)); }

class FileSet {
 public:
  explicit FileSet(fs::path dir) : dir_(std::move(dir)) {}

  void open() {
    created_dir_ = !fs::exists(dir_);
    fs::create_directories(dir_);
  }

  void write(const std::string& name, const std::string& content) {
    const fs::path path = dir_ / name;
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    written_.push_back(path);
    out << content;
    out.close();
    if (!out) throw std::runtime_error("cannot write " + path.string());
  }

  void roll_back() noexcept {
    std::error_code ec;
    for (const auto& path : written_) fs::remove(path, ec);
    if (created_dir_) fs::remove(dir_, ec);
  }

 private:
  fs::path dir_;
  bool created_dir_ = false;
  std::vector<fs::path> written_;
};

template <typename Fn>
std::string render(Fn&& fn) {
  std::ostringstream out;
  fn(out);
  return out.str();
}

}  // namespace

int run_scenario(const fs::path& config, const fs::path& out_dir,
                 std::optional<std::uint64_t> seed_override, std::ostream& log, std::ostream& err) {
  const std::string source = config.string();
  sim::Scenario sc;
  try {
    sc = load_scenario(config);
  } catch (const ConfigError& e) {
    err << describe(e, source);
    return kValidationFailure;
  }
  if (seed_override) sc.seed = *seed_override;
  const fs::path base_dir = config.parent_path();
  if (!sc.workload_replay.empty() && fs::path(sc.workload_replay).is_relative()) {
    sc.workload_replay = fs::absolute(base_dir / sc.workload_replay).lexically_normal().string();
  }

  sim::SimTrace trace;
  try {
    trace = simulate(sc, base_dir);
  } catch (const ConfigError& e) {
    err << describe(e, source);
    return kValidationFailure;
  } catch (const sim::InvalidScenario& e) {
    report_invalid(e, source, err);
    return kValidationFailure;
  } catch (const std::exception& e) {
    err << source << ": runtime failure: " << e.what() << '\n';
    return kRuntimeFailure;
  }

  FileSet files(out_dir);
  try {
    const std::string scenario_text = serialize_scenario(sc);
    std::vector<std::pair<std::string, std::string>> artifacts;
    artifacts.emplace_back("blocks.csv", render([&](auto& o) { sim::write_blocks_csv(o, trace); }));
    artifacts.emplace_back("txs.csv", render([&](auto& o) { sim::write_txs_csv(o, trace); }));
    artifacts.emplace_back("sync.csv", render([&](auto& o) { sim::write_sync_csv(o, trace); }));
    artifacts.emplace_back("reorgs.csv", render([&](auto& o) { sim::write_reorgs_csv(o, trace); }));
    artifacts.emplace_back("ledger.csv",
                           render([&](auto& o) { ledger::write_ledger_csv(o, trace.final_state); }));
    artifacts.emplace_back("workload.csv", render([&](auto& o) {
                             std::vector<ledger::Transaction> txs;
                             txs.reserve(trace.txs.size());
                             for (const auto& rec : trace.txs) txs.push_back(rec.tx);
                             workload::write_workload_csv(o, txs);
                           }));
    artifacts.emplace_back("percentiles.csv",
                           render([&](auto& o) { analytics::write_percentiles_csv(o, trace); }));
    const auto metrics = analytics::run_metrics(trace, analysis_options(sc));
    artifacts.emplace_back("summary.txt", render([&](auto& o) { analytics::write_summary(o, metrics); }));

    std::ostringstream manifest;
    manifest << "# Rerun with: dtpay run manifest.ini --out <dir>\n" << scenario_text;
    manifest << "\n[manifest]\n"
             << "version = " << kVersion << '\n'
             << "seed = " << sc.seed << '\n'
             << "config_digest = " << digest_of(scenario_text) << '\n';
    for (const auto& [name, content] : artifacts) manifest << name << " = " << digest_of(content) << '\n';
    artifacts.emplace_back("manifest.ini", manifest.str());

    files.open();
    for (const auto& [name, content] : artifacts) files.write(name, content);
  } catch (const std::exception& e) {
    files.roll_back();
    err << source << ": runtime failure: " << e.what() << '\n';
    return kRuntimeFailure;
  }
  log << "wrote " << out_dir.string() << ": " << trace.blocks.size() << " blocks ("
      << trace.canonical.size() - 1 << " canonical), " << trace.txs.size() << " transactions\n";
  return kOk;
}

namespace {

bool parse_u64(std::string_view text, std::uint64_t& out) {
  text = trim(text);
  if (text.empty()) return false;
  out = 0;
  for (char c : text) {
    if (c < '0' || c > '9') return false;
    out = out * 10 + static_cast<std::uint64_t>(c - '0');
  }
  return true;
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto pos = text.find(',', start);
    const std::string item(trim(std::string_view(text).substr(start, pos - start)));
    if (!item.empty()) out.push_back(item);
    if (pos == std::string::npos) break;
    start = pos + 1;
  }
  return out;
}

}  // namespace

SweepSpec load_sweep_spec(const fs::path& path) {
  const IniDocument doc = load_ini(path);
  std::vector<ConfigIssue> issues;
  for (const auto& s : doc.sections) {
    if (s.name != "sweep") issues.push_back({s.line, s.name, "unknown section"});
  }
  const IniSection* sec = doc.find("sweep");
  if (!sec) throw ConfigError({{0, "sweep", "required section [sweep] is missing"}});
  for (const auto& e : sec->entries) {
    if (e.key != "scenario" && e.key != "param" && e.key != "values" && e.key != "seeds") {
      issues.push_back({e.line, "sweep." + e.key, "unknown key"});
    }
  }
  auto need = [&](const char* key) -> const IniEntry* {
    const IniEntry* e = sec->find(key);
    if (!e) issues.push_back({sec->line, std::string("sweep.") + key, "required key is missing"});
    return e;
  };
  SweepSpec spec;
  if (const auto* e = need("scenario")) {
    spec.scenario = fs::path(e->value);
    if (spec.scenario.is_relative()) spec.scenario = path.parent_path() / spec.scenario;
  }
  if (const auto* e = need("param")) {
    spec.param = e->value;
    const auto dot = spec.param.find('.');
    if (dot == std::string::npos || dot == 0 || dot + 1 == spec.param.size()) {
      issues.push_back({e->line, "sweep.param", "expected section.key"});
    } else if (spec.param == "run.seed") {
      issues.push_back({e->line, "sweep.param", "sweep seeds through the seeds key"});
    }
  }
  if (const auto* e = need("values")) {
    spec.values = split_list(e->value);
    if (spec.values.empty()) issues.push_back({e->line, "sweep.values", "empty value list"});
  }
  if (const auto* e = need("seeds")) {
    for (const auto& item : split_list(e->value)) {
      const auto range = item.find("..");
      std::uint64_t lo = 0;
      std::uint64_t hi = 0;
      const bool ok = range == std::string::npos
                          ? parse_u64(item, lo) && parse_u64(item, hi)
                          : parse_u64(item.substr(0, range), lo) && parse_u64(item.substr(range + 2), hi);
      if (!ok || hi < lo || hi - lo > 100000) {
        issues.push_back({e->line, "sweep.seeds", "cannot parse '" + item + "'"});
        continue;
      }
      for (std::uint64_t s = lo; s <= hi; ++s) spec.seeds.push_back(s);
    }
    if (spec.seeds.empty()) issues.push_back({e->line, "sweep.seeds", "empty seed list"});
  }
  if (!issues.empty()) throw ConfigError(std::move(issues));
  return spec;
}

unsigned default_workers() {
  if (const char* env = std::getenv("DTPAY_WORKERS")) {
    std::uint64_t n = 0;
    if (parse_u64(env, n) && n > 0) return static_cast<unsigned>(std::min<std::uint64_t>(n, 256));
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

namespace {

struct PreparedPoint {
  std::string value;
  std::uint64_t seed = 0;
  sim::Scenario scenario;
};

std::string point_label(const SweepSpec& spec, const PreparedPoint& p) {
  return spec.param + "=" + p.value + " seed=" + std::to_string(p.seed);
}

}  // namespace

std::vector<SweepPoint> execute_sweep(const SweepSpec& spec, unsigned workers) {
  const IniDocument base = load_ini(spec.scenario);
  const auto dot = spec.param.find('.');
  const std::string section = spec.param.substr(0, dot);
  const std::string key = spec.param.substr(dot + 1);

  std::vector<PreparedPoint> points;
  for (const auto& value : spec.values) {
    for (std::uint64_t seed : spec.seeds) {
      IniDocument doc = base;
      doc.set(section, key, value);
      doc.set("run", "seed", std::to_string(seed));
      PreparedPoint p{value, seed, {}};
      try {
        p.scenario = scenario_from_ini(doc);
      } catch (const ConfigError& e) {
        throw ConfigError({{0, point_label(spec, p), describe(e, spec.scenario.string())}});
      }
      points.push_back(std::move(p));
    }
  }

  const fs::path base_dir = spec.scenario.parent_path();
  std::vector<SweepPoint> results(points.size());
  std::vector<std::string> failures(points.size());
  std::atomic<std::size_t> next{0};
  std::atomic<bool> abort{false};
  auto worker = [&] {
    while (!abort.load()) {
      const std::size_t i = next.fetch_add(1);
      if (i >= points.size()) return;
      const auto& p = points[i];
      try {
        const auto trace = simulate(p.scenario, base_dir);
        results[i] = {p.value, p.seed, analytics::run_metrics(trace, analysis_options(p.scenario))};
      } catch (const std::exception& e) {
        failures[i] = e.what();
        abort.store(true);
      }
    }
  };
  const unsigned n = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(points.size())));
  std::vector<std::thread> pool;
  for (unsigned t = 0; t < n; ++t) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (!failures[i].empty()) {
      throw std::runtime_error("sweep point " + point_label(spec, points[i]) + " failed: " + failures[i]);
    }
  }
  return results;
}

int run_sweep(const fs::path& spec_path, const fs::path& out_dir, std::ostream& log,
              std::ostream& err) {
  SweepSpec spec;
  std::vector<SweepPoint> results;
  try {
    spec = load_sweep_spec(spec_path);
    results = execute_sweep(spec, default_workers());
  } catch (const ConfigError& e) {
    err << describe(e, spec_path.string());
    return kValidationFailure;
  } catch (const std::exception& e) {
    err << spec_path.string() << ": " << e.what() << '\n';
    return kRuntimeFailure;
  }

  std::vector<analytics::LongRow> rows;
  std::vector<std::string> columns;
  for (const auto& r : results) {
    for (const auto& [metric, value] : r.metrics) {
      rows.push_back({metric, r.value, r.seed, value});
      if (std::find(columns.begin(), columns.end(), metric) == columns.end()) columns.push_back(metric);
    }
  }
  std::ostringstream points;
  points << spec.param << ",seed";
  for (const auto& c : columns) points << ',' << c;
  points << '\n';
  for (const auto& r : results) {
    points << r.value << ',' << r.seed;
    for (const auto& c : columns) {
      points << ',';
      for (const auto& [metric, value] : r.metrics) {
        if (metric == c) points << format_double(value);
      }
    }
    points << '\n';
  }

  FileSet files(out_dir);
  try {
    files.open();
    files.write("aggregate.csv", render([&](auto& o) { analytics::write_long_csv(o, rows); }));
    files.write("points.csv", points.str());
  } catch (const std::exception& e) {
    files.roll_back();
    err << out_dir.string() << ": " << e.what() << '\n';
    return kRuntimeFailure;
  }
  log << "wrote " << out_dir.string() << ": " << results.size() << " runs over " << spec.param << '\n';
  return kOk;
}

}  // namespace dtpay::runner
