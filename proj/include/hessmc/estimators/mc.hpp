#pragma once

#include <cstdint>
#include <functional>
#include <optional>

#include "hessmc/estimators/stats.hpp"

namespace hessmc {

struct McConfig {
  long n_paths = 100000;
  double dt = 5e-3;
  std::uint64_t seed = 42;
  int threads = 0;       // 0 = hardware concurrency
  long block_size = 4096;
};

// Evaluates one path; returns false when the path failed (chart exit,
// projection failure) and must be excluded.
using PathEvaluator = std::function<bool(std::int64_t path, VecX& out)>;

// Called once per worker thread; the returned evaluator owns its per-thread
// workspace (observers, buffers).
using WorkerFactory = std::function<PathEvaluator()>;

struct McOutput {
  Welford stats;
  std::optional<Welford> checkpoint;  // stats over paths [0, checkpoint_paths)
  VecX max_abs;                       // componentwise max |value| over paths
  long failed = 0;
};

// Map-reduce over paths [0, n_paths). Paths are grouped into fixed blocks;
// threads pull blocks dynamically but block results merge in index order, so
// the output is independent of the thread count and schedule.
McOutput run_mc(const McConfig& mc, long n_paths, int dim,
                const WorkerFactory& factory, long checkpoint_paths = 0);

}  // namespace hessmc
