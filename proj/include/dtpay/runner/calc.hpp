// Copyright (c) 2026 The dtpay developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <vector>

#include "dtpay/models/models.hpp"

namespace dtpay::runner {

void calc_cost(const models::CostInputs& in, bool csv, std::ostream& out);

/// With k: P(X = k). Without: the whole distribution.
void calc_outage(const std::vector<double>& p, std::optional<std::size_t> k, bool csv,
                 std::ostream& out);

void calc_profit(const models::ProfitInputs& in, bool csv, std::ostream& out);

void calc_connectivity(std::uint64_t miners, std::uint64_t hops, bool csv, std::ostream& out);

void calc_blockbits(double lambda_t, double s_t_bits, double mean_t, bool csv, std::ostream& out);

}  // namespace dtpay::runner
