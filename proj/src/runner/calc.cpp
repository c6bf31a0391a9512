// Copyright (c) 2026 The dtpay developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#include "dtpay/runner/calc.hpp"

#include <cstdio>
#include <string>

#include "dtpay/common/format.hpp"

namespace dtpay::runner {

namespace {

std::string fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

}  // namespace

void calc_cost(const models::CostInputs& in, bool csv, std::ostream& out) {
  const double total = models::system_cost(in);
  const double equipment = in.l_m * (in.d_m / in.x_m) * in.x_y;
  const double rewards = in.R * in.x_b;
  const double network = in.C_BW * in.T_C * in.BW * in.x_s;
  if (csv) {
    out << "miners,device_cost,device_years,reward,cost_per_bit,bandwidth_bps,connected_s,years,"
           "blocks,periods,equipment,rewards,network,total\n";
    out << format_double(in.l_m) << ',' << format_double(in.d_m) << ',' << format_double(in.x_m)
        << ',' << format_double(in.R) << ',' << format_double(in.C_BW) << ','
        << format_double(in.BW) << ',' << format_double(in.T_C) << ',' << format_double(in.x_y)
        << ',' << format_double(in.x_b) << ',' << format_double(in.x_s) << ','
        << format_double(equipment) << ',' << format_double(rewards) << ','
        << format_double(network) << ',' << format_double(total) << '\n';
    return;
  }
  out << "model: system cost\n"
      << "inputs: miners=" << format_double(in.l_m) << " device_cost=" << format_double(in.d_m)
      << " device_years=" << format_double(in.x_m) << " reward=" << format_double(in.R)
      << " cost_per_bit=" << format_double(in.C_BW) << " bandwidth_bps=" << format_double(in.BW)
      << " connected_s=" << format_double(in.T_C) << " years=" << format_double(in.x_y)
      << " blocks=" << format_double(in.x_b) << " periods=" << format_double(in.x_s) << '\n'
      << "formula: C_All = l_m*(d_m/x_m)*x_y + R*x_b + C_BW*T_C*BW*x_s\n"
      << "result: equipment=" << format_double(equipment) << " rewards=" << format_double(rewards)
      << " network=" << format_double(network) << " total=" << format_double(total) << '\n';
}

void calc_outage(const std::vector<double>& p, std::optional<std::size_t> k, bool csv,
                 std::ostream& out) {
  const auto pmf = models::poisson_binomial_distribution(p);
  if (k && *k >= pmf.size()) throw std::out_of_range("k exceeds the number of miners");
  double online = 0.0;
  for (double pi : p) online += 1.0 - pi;
  if (csv) {
    out << "k,probability\n";
    for (std::size_t i = 0; i < pmf.size(); ++i) {
      if (!k || *k == i) out << i << ',' << format_double(pmf[i]) << '\n';
    }
    return;
  }
  out << "model: offline miners (Poisson binomial)\n"
      << "inputs: miners=" << p.size() << " p=";
  for (std::size_t i = 0; i < p.size(); ++i) out << (i ? "," : "") << format_double(p[i]);
  out << '\n' << "formula: P(X=k) = sum over k-subsets A of prod_{i in A} p_i prod_{j not in A} (1-p_j)\n";
  if (k) {
    out << "result: P(X=" << *k << ")=" << format_double(pmf[*k]);
  } else {
    out << "result:";
    for (std::size_t i = 0; i < pmf.size(); ++i) out << " P(X=" << i << ")=" << format_double(pmf[i]);
  }
  out << " expected_online=" << format_double(online) << '\n';
}

void calc_profit(const models::ProfitInputs& in, bool csv, std::ostream& out) {
  const double profit = models::expected_profit(in);
  const auto max_miners = models::max_profitable_miners(in.R, in.eta, in.h, in.mean_t);
  if (csv) {
    out << "reward,eta,hashrate,mean_block_time,miners,profit,max_profitable_miners\n"
        << format_double(in.R) << ',' << format_double(in.eta) << ',' << format_double(in.h) << ','
        << format_double(in.mean_t) << ',' << format_double(in.l_m) << ',' << format_double(profit)
        << ',' << max_miners << '\n';
    return;
  }
  out << "model: expected mining profit per block\n"
      << "inputs: reward=" << format_double(in.R) << " eta=" << format_double(in.eta)
      << " hashrate=" << format_double(in.h) << " mean_block_time=" << format_double(in.mean_t)
      << " miners=" << format_double(in.l_m) << '\n'
      << "formula: Pi = R/l_m - eta*h*T; profitable while l_m < R/(eta*h*T)\n"
      << "result: profit=" << format_double(profit) << " max_profitable_miners=" << max_miners << '\n';
}

void calc_connectivity(std::uint64_t miners, std::uint64_t hops, bool csv, std::ostream& out) {
  const auto c = models::min_connections(miners, hops);
  if (csv) {
    out << "l_m,k,l_c,gamma\n" << miners << ',' << hops << ',' << c.l_c << ',' << format_double(c.gamma) << '\n';
    return;
  }
  out << "model: minimum connections per miner\n"
      << "inputs: miners=" << miners << " hops=" << hops << '\n'
      << "formula: 1 + l_c * sum_{i=0}^{k-1} (l_c-1)^i >= l_m; gamma = l_c/l_m\n"
      << "result: l_c=" << c.l_c << " gamma=" << fixed(c.gamma, 2) << '\n';
}

void calc_blockbits(double lambda_t, double s_t_bits, double mean_t, bool csv, std::ostream& out) {
  const double bits = models::expected_block_bits(lambda_t, s_t_bits, mean_t);
  if (csv) {
    out << "lambda_t,s_t_bits,mean_block_time,block_bits\n"
        << format_double(lambda_t) << ',' << format_double(s_t_bits) << ',' << format_double(mean_t)
        << ',' << format_double(bits) << '\n';
    return;
  }
  out << "model: expected block payload\n"
      << "inputs: lambda_t=" << format_double(lambda_t) << " s_t_bits=" << format_double(s_t_bits)
      << " mean_block_time=" << format_double(mean_t) << '\n'
      << "formula: s_b = lambda_t * s_t * E[T]\n"
      << "result: block_bits=" << format_double(bits) << '\n';
}

}  // namespace dtpay::runner
