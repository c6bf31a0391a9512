// Copyright (c) 2026 The dtpay developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace dtpay {

/// Shortest round-trip decimal form of a double ("12.5", "1e-06").
std::string format_double(double value);

/// 16 lowercase hex digits.
std::string format_hex64(std::uint64_t value);

std::string_view trim(std::string_view text);

}  // namespace dtpay
