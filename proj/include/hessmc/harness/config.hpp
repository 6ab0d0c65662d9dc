#pragma once

#include <map>
#include <string>
#include <vector>

#include "hessmc/estimators/mc.hpp"

namespace hessmc {

// One experiment per config file. Structured text, one `key = value` pair per
// line, `#` comments; every key can be overridden from the command line with
// `--set key=value`. See README for the schema.
struct ExperimentConfig {
  std::string model = "euclidean:1";
  std::string h = "zero";
  std::string V = "zero";
  std::string f = "x1sq";
  std::string estimator = "feynman_kac";
  std::vector<double> x0;          // chart coordinates
  std::vector<double> x0_ambient;  // alternative for embedded models
  std::vector<double> v1, v2;
  std::vector<double> v1_ambient, v2_ambient;
  double t = 1.0;
  std::vector<double> t_list;      // nt_scaling horizons
  std::vector<double> alpha_list;  // exp_moment rates; empty = {alpha2}
  double dt = 5e-3;
  long n_paths = 100000;
  std::uint64_t seed = 42;
  int threads = 0;
  std::string output;  // record path; empty = stdout only
  std::string format = "json";

  McConfig mc() const {
    McConfig m;
    m.n_paths = n_paths;
    m.dt = dt;
    m.seed = seed;
    m.threads = threads;
    return m;
  }
};

ExperimentConfig parse_config_file(const std::string& path);
ExperimentConfig parse_config_text(const std::string& text);

// Applies a single `key=value` override.
void apply_config_entry(ExperimentConfig& cfg, const std::string& key,
                        const std::string& value);

// Full echo of a config as an ordered key/value map; parsing the echo yields
// an equal config (round-trip invariant).
std::map<std::string, std::string> config_echo(const ExperimentConfig& cfg);
ExperimentConfig config_from_echo(
    const std::map<std::string, std::string>& echo);

bool operator==(const ExperimentConfig& a, const ExperimentConfig& b);

// Catalog resolution plus the grid invariants (t/dt integral and divisible
// by 4, n_paths >= 100). Throws UsageError with field diagnostics.
void validate_config(const ExperimentConfig& cfg);

std::vector<std::string> estimator_ids();

}  // namespace hessmc
