#pragma once

// Run configuration, group construction from a configuration, the check
// suites behind the command-line driver, and the JSON report.

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "fglab/formal_group.hpp"

namespace fglab {

using Json = nlohmann::ordered_json;

inline constexpr const char* kReportSchemaVersion = "1.0";

/// Invalid or infeasible configuration (exit code 2).
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

struct RunConfig {
  u64 p = 3;
  int f = 1;
  int N = 6;
  /// lubin_tate | multiplicative | honda | custom
  std::string group = "lubin_tate";
  /// Honda coefficients u_1, ..., u_h.
  std::vector<i64> u{0, 1};
  /// Lubin-Tate: coefficient subfield degree; 0 means f.
  int d = 0;
  /// Lubin-Tate: f = X^{p^h} mod p; 0 means d.
  int h = 0;
  /// Custom group: Frobenius polynomial, one "degree coefficient" pair per line.
  std::string file;
  int nmax = 2;
  int dcap = 800;
  int jobs = 1;
  u64 seed = 1;
  std::string out;

  /// Keys in echo order.
  static const std::vector<std::string>& keys();
  /// Applies key=value pairs; unknown keys and malformed values throw ConfigError.
  void apply(const std::map<std::string, std::string>& kv);
  Json to_json() const;
};

/// Flat "key = value" text, '#' starts a comment.
std::map<std::string, std::string> parse_config_text(const std::string& text);
std::map<std::string, std::string> read_config_file(const std::string& path);

/// Builds the group; ConfigError on invalid parameters.
FormalModule build_group(const RunConfig& cfg);

/// Checks the parameters and the N * e <= dcap budget for every level up to nmax.
void validate(const RunConfig& cfg, const FormalModule& G);

/// Coefficients of F, its height and the [p]-series, for the report.
Json serialize_group(const FormalModule& G);

struct CheckRecord {
  std::string id;
  /// Short name of the statement being checked.
  std::string claim;
  Json inputs = Json::object();
  std::string asserted;
  Json observed = Json::object();
  /// pass | fail | skipped
  std::string status = "fail";
  int D = 0;
  int N = 0;
  std::string error;
  double seconds = 0;
  Json to_json() const;
};

struct RunResult {
  Json report;
  int exit_code = 0;
  std::vector<CheckRecord> checks;
};

/// construct | torsion | endo | matrices | verify.  Configuration problems
/// are reported with exit code 2 and no checks.
RunResult run_command(const std::string& command, const RunConfig& cfg);

/// One line per check and a closing summary.
std::string render_summary(const RunResult& r);

}  // namespace fglab
