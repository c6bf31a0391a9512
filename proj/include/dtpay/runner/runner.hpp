// Copyright (c) 2026 The dtpay developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "dtpay/analytics/analytics.hpp"
#include "dtpay/sim/scenario.hpp"
#include "dtpay/sim/trace.hpp"

namespace dtpay::runner {

inline constexpr const char* kVersion = "0.1.0";

enum ExitCode : int { kOk = 0, kValidationFailure = 2, kRuntimeFailure = 3 };

/// Runs one scenario: the workload comes from the replay file when one is
/// named (relative paths resolve against `base_dir`), otherwise from the seed.
sim::SimTrace simulate(const sim::Scenario& scenario, const std::filesystem::path& base_dir);

analytics::RunOptions analysis_options(const sim::Scenario& scenario);

/// blocks.csv, txs.csv, sync.csv, reorgs.csv, ledger.csv, workload.csv,
/// percentiles.csv, summary.txt and manifest.ini. On failure every file
/// written so far (and `out_dir` if it was created) is removed.
int run_scenario(const std::filesystem::path& config, const std::filesystem::path& out_dir,
                 std::optional<std::uint64_t> seed_override, std::ostream& log, std::ostream& err);

struct SweepSpec {
  std::filesystem::path scenario;  // resolved
  std::string param;               // section.key
  std::vector<std::string> values;
  std::vector<std::uint64_t> seeds;
};

/// [sweep] scenario, param, values, seeds (list; "a..b" ranges allowed).
SweepSpec load_sweep_spec(const std::filesystem::path& path);

struct SweepPoint {
  std::string value;
  std::uint64_t seed = 0;
  analytics::Metrics metrics;
};

/// Runs every (value, seed) point on a worker pool sized by DTPAY_WORKERS
/// (default: hardware threads). Results come back in spec order.
std::vector<SweepPoint> execute_sweep(const SweepSpec& spec, unsigned workers);

unsigned default_workers();

/// Writes aggregate.csv (metric,sweep_param,seed,value) and points.csv
/// (one row per point) into out_dir.
int run_sweep(const std::filesystem::path& spec_path, const std::filesystem::path& out_dir,
              std::ostream& log, std::ostream& err);

}  // namespace dtpay::runner
