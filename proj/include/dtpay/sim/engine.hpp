// Copyright (c) 2026 The dtpay developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#pragma once

#include <optional>
#include <stdexcept>
#include <vector>

#include "dtpay/ledger/transaction.hpp"
#include "dtpay/sim/scenario.hpp"
#include "dtpay/sim/trace.hpp"

namespace dtpay::sim {

class InvalidScenario : public std::invalid_argument {
 public:
  explicit InvalidScenario(std::vector<ScenarioIssue> issues);
  const std::vector<ScenarioIssue>& issues() const { return issues_; }

 private:
  std::vector<ScenarioIssue> issues_;
};

/// Runs the scenario to its horizon. `replay` replaces the generated
/// workload. Throws InvalidScenario before any event runs.
SimTrace run(const Scenario& scenario,
             std::optional<std::vector<ledger::Transaction>> replay = std::nullopt);

}  // namespace dtpay::sim
