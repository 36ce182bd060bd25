#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "brownflow/linalg.hpp"

namespace brownflow::cli {

enum ExitCode : int { kOk = 0, kComparisonFailed = 1, kUsage = 2, kNumeric = 3 };

/// Bad flags, bad config files, missing inputs and unreadable or unwritable
/// paths. Maps to exit code 2.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr int kConfigVersion = 1;

struct RunConfig {
  std::string command;
  std::string ensemble;  // gue, ginibre, ginibre-bm, unitary-bm, gl-bm, nilpotent-demo
  std::string density = "semicircle";
  std::string check = "all";
  std::string mode = "circular";
  std::string preset;
  std::string input;
  std::string output;  // empty: standard output (a directory for presets)
  std::string format = "csv";
  int n = 200;
  double t = 1.0;
  int k = 0;  // path steps; 0 selects 100 per unit time
  double epsilon = 1e-5;
  int theta_resolution = 256;
  std::uint64_t seed = 42;
  int samples = 1;
  int bins = 40;
  double lambda_re = 0.5;
  double lambda_im = 0.0;
  std::optional<double> x0;
  std::vector<Complex> targets;
  std::map<std::string, double> tolerances;  // "check.metric" -> threshold

  /// Keys set by a config file or a flag rather than left at their default.
  std::set<std::string> explicit_keys;

  Complex lambda() const { return {lambda_re, lambda_im}; }
  int steps() const;
  void validate() const;
  nlohmann::ordered_json to_json() const;
};

/// Overwrites the fields named in `j`. Throws UsageError on an unknown key, a
/// wrong value type or a version other than kConfigVersion.
void apply_json(RunConfig& config, const nlohmann::json& j);
RunConfig load_config_file(const std::string& path, RunConfig base = {});

/// Flag beats environment beats config file beats 42.
std::uint64_t resolve_seed(std::optional<std::uint64_t> flag, const char* env,
                           std::optional<std::uint64_t> file);

/// Tabular result of a command, written as CSV or JSON.
struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
  nlohmann::ordered_json extras = nlohmann::ordered_json::object();
};

void write_table(const RunConfig& config, const Table& table, std::ostream& os);
void write_json(const RunConfig& config, nlohmann::ordered_json body, std::ostream& os);

/// Eigenvalue points read from a CSV with `re` and `im` columns; lines
/// starting with '#' are skipped.
std::vector<Complex> read_points_csv(const std::string& path);

/// Pooled eigenvalues of `config.samples` draws of `config.ensemble`; draw j
/// uses RNG stream j.
std::vector<Complex> sample_points(const RunConfig& config, std::ostream& log);

// Each command writes to config.output (standard output when empty) and
// returns an exit code.
int cmd_sample(const RunConfig& config, std::ostream& out, std::ostream& log);
int cmd_density(const RunConfig& config, std::ostream& out, std::ostream& log);
int cmd_compare(const RunConfig& config, std::ostream& out, std::ostream& log);
int cmd_hj(const RunConfig& config, std::ostream& out, std::ostream& log);
int cmd_preset(const RunConfig& config, std::ostream& out, std::ostream& log);

std::vector<std::string> preset_names();

/// Full command-line entry point. `env_seed` is the value of BROWNFLOW_SEED
/// or null.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err,
            const char* env_seed);

}  // namespace brownflow::cli
