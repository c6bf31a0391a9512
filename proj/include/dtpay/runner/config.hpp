// Copyright (c) 2026 The dtpay developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#pragma once

#include <cstddef>
#include <filesystem>
#include <istream>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "dtpay/sim/scenario.hpp"

namespace dtpay::runner {

struct IniEntry {
  std::string key;
  std::string value;
  std::size_t line = 0;
};

struct IniSection {
  std::string name;
  std::size_t line = 0;
  std::vector<IniEntry> entries;

  const IniEntry* find(const std::string& key) const;
};

/// Sectioned key = value text. '#' and ';' start comment lines.
struct IniDocument {
  std::vector<IniSection> sections;

  const IniSection* find(const std::string& name) const;
  /// Sets section.key, adding the section or key when missing.
  void set(const std::string& section, const std::string& key, const std::string& value);
};

struct ConfigIssue {
  std::size_t line = 0;  // 0 when no line applies
  std::string field;
  std::string message;
};

class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(std::vector<ConfigIssue> issues);
  const std::vector<ConfigIssue>& issues() const { return issues_; }

 private:
  std::vector<ConfigIssue> issues_;
};

/// "source:line: field: message" per issue, one per line.
std::string describe(const ConfigError& error, const std::string& source);

IniDocument parse_ini(std::istream& in);

/// Builds and validates a scenario. Unknown sections and keys are errors,
/// except a [manifest] section which is ignored.
sim::Scenario scenario_from_ini(const IniDocument& doc);

sim::Scenario parse_scenario(std::istream& in);
sim::Scenario load_scenario(const std::filesystem::path& path);
IniDocument load_ini(const std::filesystem::path& path);

/// Every field written out, so parse(serialize(s)) == s.
void write_scenario(std::ostream& out, const sim::Scenario& scenario);
std::string serialize_scenario(const sim::Scenario& scenario);

}  // namespace dtpay::runner
