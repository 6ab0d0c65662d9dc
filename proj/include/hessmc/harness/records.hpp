#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "hessmc/estimators/estimators.hpp"
#include "hessmc/harness/config.hpp"

namespace hessmc {

struct OracleComparison {
  double value = 0.0;
  double tolerance = 0.0;
  double abs_err = 0.0;
  bool pass = false;
};

// Self-describing run output: re-running from the config echo reproduces
// mean and standard error bit-identically on one platform.
struct RunRecord {
  std::map<std::string, std::string> config;
  EstimatorResult result;
  std::optional<OracleComparison> oracle;
  bool degraded = false;
  bool pass = true;
  double wall_ms = 0.0;
  std::string version = kVersion;
  nlohmann::ordered_json extras;  // estimator-specific tables
};

nlohmann::ordered_json record_to_json(const RunRecord& record);
std::string record_to_string(const RunRecord& record);
void write_text_file(const std::string& path, const std::string& text);

// Output path resolution: relative paths land in $HESSMC_OUTPUT_DIR when the
// variable is set.
std::string resolve_output_path(const std::string& path);

struct SweepRow {
  double axis_value = 0.0;
  double mean = 0.0;
  double std_error = 0.0;
  std::optional<double> oracle;
  std::optional<double> abs_err;
  bool pass = true;
};

// CSV with the fixed column set axis_value,mean,stderr,oracle,abs_err,pass;
// fitted slopes are appended as trailing comment lines.
std::string sweep_csv(const std::vector<SweepRow>& rows,
                      const std::map<std::string, double>& slopes);

}  // namespace hessmc
