// Copyright (c) 2026 The dtpay developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#include <CLI11.hpp>

#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "dtpay/models/models.hpp"
#include "dtpay/runner/calc.hpp"
#include "dtpay/runner/runner.hpp"

using namespace dtpay;

int main(int argc, char** argv) {
  CLI::App app{"Village payment blockchain simulator"};
  app.set_version_flag("--version", runner::kVersion);
  app.require_subcommand(1);

  std::string scenario_path;
  std::string out_dir;
  std::optional<std::uint64_t> seed;
  auto* run = app.add_subcommand("run", "Simulate one scenario and write its artifacts");
  run->add_option("scenario", scenario_path, "Scenario file")->required();
  run->add_option("--out", out_dir, "Output directory")->required();
  run->add_option("--seed", seed, "Override the scenario seed");

  std::string sweep_path;
  std::string sweep_out;
  auto* sweep = app.add_subcommand("sweep", "Run a parameter sweep (workers: DTPAY_WORKERS)");
  sweep->add_option("spec", sweep_path, "Sweep spec file")->required();
  sweep->add_option("--out", sweep_out, "Output directory")->required();

  auto* calc = app.add_subcommand("calc", "Closed-form design calculators");
  calc->require_subcommand(1);
  bool csv = false;
  calc->add_flag("--csv", csv, "Machine-readable output");

  models::CostInputs cost;
  auto* cost_cmd = calc->add_subcommand("cost", "Total system cost");
  cost_cmd->add_option("--miners", cost.l_m, "Number of miners l_m")->required();
  cost_cmd->add_option("--device-cost", cost.d_m, "Tokens per mining device d_m")->required();
  cost_cmd->add_option("--device-years", cost.x_m, "Device lifetime in years x_m")->required();
  cost_cmd->add_option("--reward", cost.R, "Tokens per block R")->required();
  cost_cmd->add_option("--cost-per-bit", cost.C_BW, "Backhaul Tokens per bit C_BW")->required();
  cost_cmd->add_option("--bandwidth", cost.BW, "Backhaul bits/s BW")->required();
  cost_cmd->add_option("--connected-s", cost.T_C, "Connected seconds per service period T_C")->required();
  cost_cmd->add_option("--years", cost.x_y, "Years x_y")->required();
  cost_cmd->add_option("--blocks", cost.x_b, "Blocks x_b")->required();
  cost_cmd->add_option("--periods", cost.x_s, "Service periods x_s")->required();

  std::vector<double> probs;
  std::optional<double> p_d;
  std::optional<std::size_t> miners_uniform;
  std::optional<std::size_t> k;
  auto* outage_cmd = calc->add_subcommand("outage", "Probability that k miners are offline");
  outage_cmd->add_option("--p", probs, "Per-miner offline probabilities")->delimiter(',');
  outage_cmd->add_option("--pd", p_d, "Uniform offline probability (with --miners)");
  outage_cmd->add_option("--miners", miners_uniform, "Miner count for --pd");
  outage_cmd->add_option("--k", k, "Offline count (default: whole distribution)");

  models::ProfitInputs profit;
  auto* profit_cmd = calc->add_subcommand("profit", "Expected profit per mined block");
  profit_cmd->add_option("--reward", profit.R, "Tokens per block R")->required();
  profit_cmd->add_option("--eta", profit.eta, "Tokens per hash")->required();
  profit_cmd->add_option("--hashrate", profit.h, "Hashes/s per miner")->required();
  profit_cmd->add_option("--block-time", profit.mean_t, "Mean block time E[T] in seconds")->required();
  profit_cmd->add_option("--miners", profit.l_m, "Number of miners")->required();

  std::uint64_t conn_miners = 0;
  std::uint64_t hops = 0;
  bool conn_sweep = false;
  auto* conn_cmd = calc->add_subcommand("connectivity", "Minimum connections per miner");
  auto* miners_opt = conn_cmd->add_option("--miners", conn_miners, "Number of miners l_m");
  auto* hops_opt = conn_cmd->add_option("--hops", hops, "Maximum hops k");
  conn_cmd->add_flag("--sweep", conn_sweep, "l_m in [4,100], k in [1,4] as CSV");

  double lambda_t = 0.0;
  double s_t = 0.0;
  double mean_t = 0.0;
  auto* bits_cmd = calc->add_subcommand("blockbits", "Expected block payload in bits");
  bits_cmd->add_option("--lambda", lambda_t, "Regular transactions per second")->required();
  bits_cmd->add_option("--tx-bits", s_t, "Bits per transaction s_t")->required();
  bits_cmd->add_option("--block-time", mean_t, "Mean block time E[T] in seconds")->required();

  for (auto* sub : calc->get_subcommands({})) sub->fallthrough();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) return runner::run_scenario(scenario_path, out_dir, seed, std::cout, std::cerr);
    if (*sweep) return runner::run_sweep(sweep_path, sweep_out, std::cout, std::cerr);
    if (*cost_cmd) {
      runner::calc_cost(cost, csv, std::cout);
    } else if (*outage_cmd) {
      if (probs.empty()) {
        if (!p_d || !miners_uniform) {
          std::cerr << "calc outage: give --p, or --pd together with --miners\n";
          return runner::kValidationFailure;
        }
        probs.assign(*miners_uniform, *p_d);
      }
      runner::calc_outage(probs, k, csv, std::cout);
    } else if (*profit_cmd) {
      runner::calc_profit(profit, csv, std::cout);
    } else if (*conn_cmd) {
      if (conn_sweep) {
        models::write_connectivity_sweep(std::cout, 4, 100, 4);
      } else {
        if (miners_opt->count() == 0 || hops_opt->count() == 0) {
          std::cerr << "calc connectivity: missing " << (miners_opt->count() ? "--hops" : "--miners")
                    << '\n';
          return runner::kValidationFailure;
        }
        runner::calc_connectivity(conn_miners, hops, csv, std::cout);
      }
    } else if (*bits_cmd) {
      runner::calc_blockbits(lambda_t, s_t, mean_t, csv, std::cout);
    }
  } catch (const std::exception& e) {
    std::cerr << "calc: " << e.what() << '\n';
    return runner::kValidationFailure;
  }
  return runner::kOk;
}
