#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

namespace gpm {

class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Tolerance on assertive inequalities; ratios in (1, 1 + tol] are "pass-marginal".
inline constexpr double kPassTolerance = 0.05;
// Rate studies: max r / median r must stay below this.
inline constexpr double kBoundednessFactor = 10.0;

struct InequalityReport {
  std::string check;
  std::string theorem;
  nlohmann::json params = nlohmann::json::object();  // fully resolved, enough to replay
  std::uint64_t seed = 0;
  double lhs = 0.0;
  double rhs = 0.0;
  double ratio = 0.0;
  // "pass", "pass-marginal", "fail", "report-only" or "hypothesis-violation".
  std::string status;
  bool assertive = false;
  nlohmann::json provenance = nlohmann::json::array();
  nlohmann::json details = nlohmann::json::object();

  bool failed() const { return status == "fail"; }
  nlohmann::json to_json(bool timestamp = false) const;
};

std::vector<std::string> check_names();
InequalityReport run_check(const std::string& check, const nlohmann::json& params, std::uint64_t seed);
// Re-runs a check from the metadata embedded in a report.
InequalityReport replay(const nlohmann::json& report);

struct SuiteItem {
  std::string check;
  nlohmann::json params = nlohmann::json::object();
  std::uint64_t seed = 0;
};

struct SuiteConfig {
  std::vector<SuiteItem> items;
  std::optional<std::filesystem::path> output_dir;
};

// {suite: [{check, params, seed}], output_dir}; throws ConfigError on schema violations.
SuiteConfig parse_suite(const nlohmann::json& j);
SuiteConfig paper_default_suite(std::uint64_t seed);

struct RunOptions {
  bool timestamp = true;
  std::ostream* progress = nullptr;
};

struct SuiteResult {
  std::vector<InequalityReport> reports;
  std::map<std::string, std::size_t> counts;  // by status
  bool any_assertive_failure = false;
  nlohmann::json summary() const;
};

// Runs the items in config order; writes one JSON per item and summary.csv when output_dir is set.
SuiteResult run_suite(const SuiteConfig& config, const RunOptions& options = {});

// Columns: theorem,lhs,rhs,ratio,pass,status.
void write_aggregate_csv(std::ostream& out, const std::vector<InequalityReport>& reports);

}  // namespace gpm
