#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace confext::cli {

/// Rejected configuration (exit code 2).
class ConfigError : public std::invalid_argument {
 public:
  explicit ConfigError(const std::string& what) : std::invalid_argument(what) {}
};

struct RunConfig {
  std::string command;
  std::optional<int> n;  // unset: the command default
  std::optional<double> a;
  std::optional<double> a_min, a_max, a_step;
  int resolution = 0;  // 0: the command default
  int samples = -1;    // -1: the command default
  std::uint64_t seed = 1;
  std::string out;
  std::string format = "json";
  std::map<std::string, double> tolerances;  // overrides only
};

/// Tolerance names with their defaults.
const std::map<std::string, double>& default_tolerances();

/// Parses "name=value" into cfg.tolerances; ConfigError for unknown names or bad numbers.
void add_tolerance_override(RunConfig& cfg, const std::string& spec);

/// Range and resolution checks per command; ConfigError on failure. Returns warnings.
std::vector<std::string> validate(const RunConfig& cfg);

enum class Status { pass, fail, error };

struct Record {
  std::string name;
  std::string inputs;  // canonical description, hashed into the digest
  std::vector<std::pair<std::string, double>> values;
  std::vector<std::pair<std::string, double>> errors;
  std::string verdict;
  Status status = Status::pass;
  std::string message;
};

struct Report {
  RunConfig config;
  std::vector<Record> records;  // sorted by name
  std::vector<std::vector<double>> table;  // sweep rows (n, a, S, error)
  std::vector<std::string> warnings;
  std::string timestamp;
  double wall_time = 0.0;

  int passed() const;
  int failed() const;
  int errored() const;
  /// 1 if any check failed, else 2 if any check hit a numerical error, else 0.
  int exit_code() const;
  /// The JSON report; without `timing` the output is a pure function of the config.
  std::string json(bool timing = true) const;
  /// Sweep table as n,a,S,error rows.
  std::string csv() const;
};

/// 64-bit FNV-1a of a string, as 16 hex digits.
std::string fnv1a_hex(const std::string& s);

/// Validates and runs one command.
Report run(const RunConfig& cfg);

}  // namespace confext::cli
