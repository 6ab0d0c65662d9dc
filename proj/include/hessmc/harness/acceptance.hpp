#pragma once

#include <string>
#include <vector>

namespace hessmc {

struct CriterionResult {
  int index = 0;
  std::string name;
  bool pass = false;
  std::string detail;
  double wall_ms = 0.0;
};

struct AcceptanceOptions {
  long n_paths = 100000;  // desk scale
  double dt = 5e-3;
  std::uint64_t seed = 42;
  int threads = 0;
  // Sensitivity hook: flips the sign of the Ricci operator fed to the
  // transport equations; the sphere eigenfunction criterion must then fail.
  bool mutate_flip_ricci_sign = false;
  // Run only these criterion indices (1-based); empty = all.
  std::vector<int> only;
};

std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& options);

bool acceptance_passed(const std::vector<CriterionResult>& results);

// One line per criterion plus a summary; returns the process exit code
// (0 all pass, 1 otherwise).
int print_acceptance(const std::vector<CriterionResult>& results);

}  // namespace hessmc
