// Copyright (c) 2026 The dtpay developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#include "dtpay/analytics/analytics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <unordered_map>

#include "dtpay/common/format.hpp"

namespace dtpay::analytics {

namespace {

using chain::BlockHeader;

std::unordered_map<BlockId, const BlockHeader*> header_index(const sim::SimTrace& trace) {
  std::unordered_map<BlockId, const BlockHeader*> index;
  index.reserve(trace.blocks.size() + 1);
  if (trace.genesis) index.emplace(trace.genesis->id, &trace.genesis->header);
  for (const auto& rec : trace.blocks) index.emplace(rec.block->id, &rec.block->header);
  return index;
}

std::vector<double> sorted_copy(std::span<const double> xs) {
  std::vector<double> v(xs.begin(), xs.end());
  std::sort(v.begin(), v.end());
  return v;
}

}  // namespace

std::vector<double> block_times(std::span<const double> timestamps) {
  if (timestamps.size() < 2) throw InsufficientData("block_times: need at least two blocks");
  std::vector<double> deltas;
  deltas.reserve(timestamps.size() - 1);
  for (std::size_t i = 1; i < timestamps.size(); ++i) {
    deltas.push_back(timestamps[i] - timestamps[i - 1]);
  }
  return deltas;
}

std::vector<double> block_times(const sim::SimTrace& trace, bool canonical_only) {
  const auto index = header_index(trace);
  if (canonical_only) {
    std::vector<double> ts;
    ts.reserve(trace.canonical.size());
    for (BlockId id : trace.canonical) ts.push_back(index.at(id)->timestamp);
    return block_times(ts);
  }
  if (trace.blocks.empty()) throw InsufficientData("block_times: need at least two blocks");
  std::vector<std::pair<std::pair<std::uint64_t, double>, double>> keyed;
  keyed.reserve(trace.blocks.size());
  for (const auto& rec : trace.blocks) {
    const BlockHeader& h = rec.block->header;
    keyed.push_back({{h.number, h.timestamp}, h.timestamp - index.at(h.parent_id)->timestamp});
  }
  std::sort(keyed.begin(), keyed.end());
  std::vector<double> deltas;
  deltas.reserve(keyed.size());
  for (const auto& [key, delta] : keyed) deltas.push_back(delta);
  return deltas;
}

TxTimes tx_processing_times(const sim::SimTrace& trace) {
  TxTimes out;
  for (const auto& rec : trace.txs) {
    if (rec.included_at) {
      out.times.push_back(*rec.included_at - rec.tx.created_at);
    } else {
      out.unincluded.push_back(rec.tx.id);
    }
  }
  return out;
}

double PercentileReport::at(int rank) const {
  for (std::size_t i = 0; i < kRanks.size(); ++i) {
    if (kRanks[i] == rank) return values[i];
  }
  throw std::out_of_range("percentile rank " + std::to_string(rank) + " not reported");
}

double nearest_rank(std::span<const double> sorted, double p) {
  if (sorted.empty()) throw InsufficientData("percentile of an empty sample");
  const double n = static_cast<double>(sorted.size());
  auto rank = static_cast<std::size_t>(std::ceil(p / 100.0 * n));
  rank = std::clamp<std::size_t>(rank, 1, sorted.size());
  return sorted[rank - 1];
}

PercentileReport percentile_report(std::span<const double> samples) {
  if (samples.empty()) throw InsufficientData("percentile_report: empty sample");
  const auto sorted = sorted_copy(samples);
  PercentileReport report;
  for (std::size_t i = 0; i < PercentileReport::kRanks.size(); ++i) {
    report.values[i] = nearest_rank(sorted, PercentileReport::kRanks[i]);
  }
  return report;
}

ResolvingPeriod resolving_period(const MetricSeries& series, double t0, double tolerance,
                                 std::size_t run) {
  ResolvingPeriod out;
  out.start = t0;
  const auto& pts = series.points;
  std::size_t first = 0;
  while (first < pts.size() && pts[first].first < t0) ++first;
  for (std::size_t i = first; i + run < pts.size(); ++i) {
    bool steady = true;
    for (std::size_t j = i + 1; j <= i + run && steady; ++j) {
      const double prev = pts[j - 1].second;
      steady = prev != 0.0 && std::abs(pts[j].second - prev) / std::abs(prev) < tolerance;
    }
    if (steady) {
      out.end = pts[i].first;
      break;
    }
  }
  return out;
}

MetricSeries observer_block_times(const sim::SimTrace& trace) {
  const auto index = header_index(trace);
  MetricSeries series;
  series.name = "observer_block_time";
  for (const auto& arrival : trace.observer_arrivals) {
    const BlockHeader* h = index.at(arrival.block);
    series.points.emplace_back(arrival.at, h->timestamp - index.at(h->parent_id)->timestamp);
  }
  return series;
}

MetricSeries moving_average(const MetricSeries& series, std::size_t window) {
  if (window == 0) throw std::invalid_argument("moving_average: window must be positive");
  MetricSeries out;
  out.name = series.name + "_ma" + std::to_string(window);
  double sum = 0.0;
  for (std::size_t i = 0; i < series.points.size(); ++i) {
    sum += series.points[i].second;
    if (i >= window) sum -= series.points[i - window].second;
    if (i + 1 >= window) {
      out.points.emplace_back(series.points[i].first, sum / static_cast<double>(window));
    }
  }
  return out;
}

double stale_rate(const sim::SimTrace& trace) {
  if (trace.blocks.empty()) return 0.0;
  std::size_t stale = 0;
  for (const auto& rec : trace.blocks) stale += rec.stale ? 1 : 0;
  return static_cast<double>(stale) / static_cast<double>(trace.blocks.size());
}

double mean_difficulty(const sim::SimTrace& trace) {
  if (trace.canonical.size() < 2) throw InsufficientData("mean_difficulty: no mined blocks");
  const auto index = header_index(trace);
  double sum = 0.0;
  for (std::size_t i = 1; i < trace.canonical.size(); ++i) {
    sum += static_cast<double>(index.at(trace.canonical[i])->difficulty);
  }
  return sum / static_cast<double>(trace.canonical.size() - 1);
}

double mean_online_miners(const sim::SimTrace& trace) {
  if (trace.online.empty()) return 0.0;
  double sum = 0.0;
  for (const auto& s : trace.online) sum += s.miners_online;
  return sum / static_cast<double>(trace.online.size());
}

double mean(std::span<const double> xs) {
  if (xs.empty()) throw InsufficientData("mean of an empty sample");
  return std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
}

double kolmogorov_q(double lambda) {
  if (lambda < 1e-3) return 1.0;
  double sum = 0.0;
  double sign = 1.0;
  for (int k = 1; k <= 200; ++k) {
    const double term = sign * std::exp(-2.0 * k * k * lambda * lambda);
    sum += term;
    if (std::abs(term) < 1e-16) break;
    sign = -sign;
  }
  return std::clamp(2.0 * sum, 0.0, 1.0);
}

namespace {

double ks_p_value(double d, double effective_n) {
  const double root = std::sqrt(effective_n);
  return kolmogorov_q((root + 0.12 + 0.11 / root) * d);
}

}  // namespace

KsResult ks_exponential(std::span<const double> samples, double mean_value) {
  if (samples.empty()) throw InsufficientData("ks_exponential: empty sample");
  if (!(mean_value > 0.0)) throw std::invalid_argument("ks_exponential: mean must be positive");
  const auto sorted = sorted_copy(samples);
  const double n = static_cast<double>(sorted.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    const double cdf = sorted[i] <= 0.0 ? 0.0 : -std::expm1(-sorted[i] / mean_value);
    d = std::max({d, static_cast<double>(i + 1) / n - cdf, cdf - static_cast<double>(i) / n});
  }
  return {d, ks_p_value(d, n)};
}

KsResult ks_two_sample(std::span<const double> a, std::span<const double> b) {
  if (a.empty() || b.empty()) throw InsufficientData("ks_two_sample: empty sample");
  const auto sa = sorted_copy(a);
  const auto sb = sorted_copy(b);
  const double na = static_cast<double>(sa.size());
  const double nb = static_cast<double>(sb.size());
  std::size_t i = 0;
  std::size_t j = 0;
  double d = 0.0;
  while (i < sa.size() && j < sb.size()) {
    const double x = std::min(sa[i], sb[j]);
    while (i < sa.size() && sa[i] <= x) ++i;
    while (j < sb.size() && sb[j] <= x) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
  }
  return {d, ks_p_value(d, na * nb / (na + nb))};
}

LinearFit linear_fit(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) {
    throw InsufficientData("linear_fit: need at least two paired points");
  }
  const double mx = mean(x);
  const double my = mean(y);
  double sxx = 0.0;
  double sxy = 0.0;
  double syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx == 0.0) throw InsufficientData("linear_fit: x has no spread");
  LinearFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  fit.r_squared = syy == 0.0 ? 1.0 : (sxy * sxy) / (sxx * syy);
  return fit;
}

Metrics run_metrics(const sim::SimTrace& trace, const RunOptions& options) {
  Metrics m;
  m.emplace_back("blocks_total", static_cast<double>(trace.blocks.size()));
  m.emplace_back("blocks_canonical", static_cast<double>(trace.canonical.size() - 1));
  m.emplace_back("stale_rate", stale_rate(trace));

  auto add_percentiles = [&](const std::string& prefix, std::span<const double> xs) {
    if (xs.empty()) return;
    m.emplace_back(prefix + "_mean", mean(xs));
    const auto report = percentile_report(xs);
    for (std::size_t i = 0; i < report.values.size(); ++i) {
      m.emplace_back(prefix + "_p" + std::to_string(PercentileReport::kRanks[i]), report.values[i]);
    }
  };
  if (trace.canonical.size() >= 2) {
    add_percentiles("block_time", block_times(trace, true));
    add_percentiles("block_time_all", block_times(trace, false));
    m.emplace_back("mean_difficulty", mean_difficulty(trace));
  }
  const auto tx = tx_processing_times(trace);
  m.emplace_back("tx_included", static_cast<double>(tx.times.size()));
  m.emplace_back("tx_unincluded", static_cast<double>(tx.unincluded.size()));
  add_percentiles("tx_time", tx.times);

  std::uint64_t max_depth = 0;
  for (const auto& r : trace.reorgs) max_depth = std::max(max_depth, r.depth);
  m.emplace_back("reorgs", static_cast<double>(trace.reorgs.size()));
  m.emplace_back("max_reorg_depth", static_cast<double>(max_depth));
  m.emplace_back("mean_online_miners", mean_online_miners(trace));

  m.emplace_back("sync_episodes", static_cast<double>(trace.sync.size()));
  if (!trace.sync.empty()) {
    double total = 0.0;
    for (const auto& ep : trace.sync) total += ep.sync_delay_s;
    m.emplace_back("sync_delay_mean", total / static_cast<double>(trace.sync.size()));
  }

  if (options.disturbance_t0) {
    const auto smoothed = moving_average(observer_block_times(trace), options.smoothing_window);
    const auto period = resolving_period(smoothed, *options.disturbance_t0);
    m.emplace_back("smoothing_window", static_cast<double>(options.smoothing_window));
    m.emplace_back("resolving_period_s", period.duration());
  }
  return m;
}

void write_percentiles_csv(std::ostream& out, const sim::SimTrace& trace) {
  out << "series,p50,p70,p90,p95,p99\n";
  auto row = [&](const char* name, std::span<const double> xs) {
    if (xs.empty()) return;
    const auto report = percentile_report(xs);
    out << name;
    for (double v : report.values) out << ',' << format_double(v);
    out << '\n';
  };
  if (trace.canonical.size() >= 2) {
    row("block_time_canonical", block_times(trace, true));
    row("block_time_all", block_times(trace, false));
  }
  row("tx_processing_time", tx_processing_times(trace).times);
}

void write_summary(std::ostream& out, const Metrics& metrics) {
  for (const auto& [name, value] : metrics) out << name << ": " << format_double(value) << '\n';
}

void write_long_csv(std::ostream& out, std::span<const LongRow> rows) {
  out << "metric,sweep_param,seed,value\n";
  for (const auto& r : rows) {
    out << r.metric << ',' << r.sweep_param << ',' << r.seed << ',' << format_double(r.value) << '\n';
  }
}

}  // namespace dtpay::analytics
