// Copyright (c) 2026 The dtpay developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#pragma once

#include <span>

namespace dtpay {

/// Half-open interval [start_s, end_s) of simulated time.
struct TimeWindow {
  double start_s = 0.0;
  double end_s = 0.0;

  double length() const { return end_s - start_s; }
  bool contains(double t) const { return t >= start_s && t < end_s; }
  friend bool operator==(const TimeWindow&, const TimeWindow&) = default;
};

inline bool in_any_window(std::span<const TimeWindow> windows, double t) {
  for (const auto& w : windows) {
    if (w.contains(t)) return true;
  }
  return false;
}

}  // namespace dtpay
