// Acceptance battery entry point: runs every criterion at desk scale and
// prints one pass/fail line per criterion. Exit code 0 iff all pass.

#include <cstdlib>
#include <cstring>

#include "hessmc/harness/acceptance.hpp"

int main(int argc, char** argv) {
  hessmc::AcceptanceOptions options;
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--n-paths") == 0 && i + 1 < argc) {
      options.n_paths = std::atol(argv[++i]);
    } else if (std::strcmp(argv[i], "--only") == 0 && i + 1 < argc) {
      options.only.push_back(std::atoi(argv[++i]));
    }
  }
  const auto results = hessmc::run_acceptance(options);
  return hessmc::print_acceptance(results);
}
