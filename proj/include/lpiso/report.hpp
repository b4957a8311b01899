#pragma once

#include <json.hpp>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace lpiso {

struct DiagonalizationSummary {
  std::string name;
  int n = 0;
  int ell = 0;
  int signature = 0;
  std::vector<std::vector<double>> M;
  double residual = 0.0;

  bool operator==(const DiagonalizationSummary&) const = default;
};

struct CheckEntry {
  std::string name;
  bool passed = false;
  double value = 0.0;
  double tolerance = 0.0;
  std::string detail;

  bool operator==(const CheckEntry&) const = default;
};

struct Provenance {
  std::uint64_t seed = 0;
  std::string version;
  std::string config_hash;

  bool operator==(const Provenance&) const = default;
};

struct Report {
  std::string command;
  std::string status;  // ok | pass | fail
  int exit_code = 0;
  std::string message;
  std::optional<std::string> verdict;
  std::optional<std::string> rule;
  std::vector<DiagonalizationSummary> diagonalizations;
  std::vector<CheckEntry> checks;
  nlohmann::json details = nlohmann::json::object();
  Provenance provenance;

  bool operator==(const Report&) const = default;
};

nlohmann::json to_json(const Report& r);
Report report_from_json(const nlohmann::json& j);
std::string render_text(const Report& r);

}  // namespace lpiso
