// Copyright (c) 2026 The dtpay developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <ostream>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "dtpay/common/ids.hpp"
#include "dtpay/sim/trace.hpp"

namespace dtpay::analytics {

class InsufficientData : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct MetricSeries {
  std::string name;
  std::vector<std::pair<double, double>> points;  // (t, value), t non-decreasing
};

/// Adjacent differences of `timestamps` (already in block-number order).
std::vector<double> block_times(std::span<const double> timestamps);

/// Canonical: adjacent timestamp deltas along the global canonical chain.
/// Otherwise every block (stale ones included) against its own parent,
/// ordered by number then timestamp. Needs at least two blocks.
std::vector<double> block_times(const sim::SimTrace& trace, bool canonical_only);

struct TxTimes {
  std::vector<double> times;     // included txs, id order
  std::vector<TxId> unincluded;
};

TxTimes tx_processing_times(const sim::SimTrace& trace);

struct PercentileReport {
  static constexpr std::array<int, 5> kRanks{50, 70, 90, 95, 99};
  std::array<double, 5> values{};

  double at(int rank) const;
};

/// Nearest-rank percentile of sorted data: element ceil(p/100 * n).
double nearest_rank(std::span<const double> sorted, double p);

PercentileReport percentile_report(std::span<const double> samples);

struct ResolvingPeriod {
  double start = 0.0;
  std::optional<double> end;
  bool resolved() const { return end.has_value(); }
  double duration() const { return end ? *end - start : -1.0; }
};

/// Starting at the first point at or after t0, finds the first point i such
/// that the relative change |v[j] - v[j-1]| / v[j-1] stays below
/// `tolerance` for j = i+1 .. i+run. The period runs from t0 to t_i.
ResolvingPeriod resolving_period(const MetricSeries& series, double t0, double tolerance = 0.05,
                                 std::size_t run = 3);

/// Block times as seen by the observer: each arriving block's timestamp gap
/// to its parent, stamped with the arrival time.
MetricSeries observer_block_times(const sim::SimTrace& trace);

/// Trailing mean over `window` points; the first window-1 points are dropped.
MetricSeries moving_average(const MetricSeries& series, std::size_t window);

double stale_rate(const sim::SimTrace& trace);

/// Mean difficulty of canonical blocks after genesis.
double mean_difficulty(const sim::SimTrace& trace);

double mean_online_miners(const sim::SimTrace& trace);

double mean(std::span<const double> xs);

struct KsResult {
  double statistic = 0.0;
  double p_value = 1.0;
};

/// Kolmogorov distribution tail Q(lambda) = 2 sum (-1)^(k-1) exp(-2 k^2 lambda^2).
double kolmogorov_q(double lambda);

KsResult ks_exponential(std::span<const double> samples, double mean);
KsResult ks_two_sample(std::span<const double> a, std::span<const double> b);

/// Least-squares line y = intercept + slope x with its R^2.
struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
};

LinearFit linear_fit(std::span<const double> x, std::span<const double> y);

/// Named scalar metrics of one run in a fixed order.
using Metrics = std::vector<std::pair<std::string, double>>;

struct RunOptions {
  std::optional<double> disturbance_t0;
  std::size_t smoothing_window = 5;
};

Metrics run_metrics(const sim::SimTrace& trace, const RunOptions& options = {});

/// series,p50,p70,p90,p95,p99 for canonical and all-block block times and
/// tx processing times (rows with no data are omitted).
void write_percentiles_csv(std::ostream& out, const sim::SimTrace& trace);

void write_summary(std::ostream& out, const Metrics& metrics);

struct LongRow {
  std::string metric;
  std::string sweep_param;
  std::uint64_t seed = 0;
  double value = 0.0;
};

/// metric,sweep_param,seed,value
void write_long_csv(std::ostream& out, std::span<const LongRow> rows);

}  // namespace dtpay::analytics
