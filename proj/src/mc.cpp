#include "hessmc/estimators/mc.hpp"

#include <atomic>
#include <thread>
#include <vector>

namespace hessmc {

double least_squares_slope(const VecX& x, const VecX& y) {
  const double n = static_cast<double>(x.size());
  const double mx = x.mean(), my = y.mean();
  const double sxx = (x.array() - mx).square().sum();
  const double sxy = ((x.array() - mx) * (y.array() - my)).sum();
  if (sxx == 0.0 || n < 2) return 0.0;
  return sxy / sxx;
}

namespace {

struct BlockRange {
  std::int64_t begin;
  std::int64_t end;
};

struct BlockAcc {
  Welford stats;
  VecX max_abs;
  long failed = 0;
};

}  // namespace

McOutput run_mc(const McConfig& mc, long n_paths, int dim,
                const WorkerFactory& factory, long checkpoint_paths) {
  if (n_paths <= 0) throw UsageError("run_mc: n_paths must be positive");

  // Block boundaries at multiples of block_size and at the checkpoint, so the
  // sequential merge can emit the checkpoint statistics exactly.
  std::vector<BlockRange> ranges;
  const long bs = std::max<long>(1, mc.block_size);
  std::int64_t pos = 0;
  while (pos < n_paths) {
    std::int64_t end = std::min<std::int64_t>(n_paths, (pos / bs + 1) * bs);
    if (checkpoint_paths > pos && checkpoint_paths < end) {
      end = checkpoint_paths;
    }
    ranges.push_back({pos, end});
    pos = end;
  }

  const int n_blocks = static_cast<int>(ranges.size());
  std::vector<BlockAcc> blocks(n_blocks);
  std::atomic<int> next{0};

  const auto work = [&]() {
    PathEvaluator eval = factory();
    VecX out(dim);
    for (;;) {
      const int b = next.fetch_add(1);
      if (b >= n_blocks) break;
      BlockAcc& acc = blocks[b];
      acc.stats.init(dim);
      acc.max_abs = VecX::Zero(dim);
      for (std::int64_t p = ranges[b].begin; p < ranges[b].end; ++p) {
        if (!eval(p, out)) {
          ++acc.failed;
          continue;
        }
        acc.stats.add(out);
        acc.max_abs = acc.max_abs.cwiseMax(out.cwiseAbs());
      }
    }
  };

  int n_threads = mc.threads > 0
                      ? mc.threads
                      : static_cast<int>(std::thread::hardware_concurrency());
  if (n_threads < 1) n_threads = 1;
  n_threads = std::min<int>(n_threads, n_blocks);

  if (n_threads <= 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(n_threads);
    for (int i = 0; i < n_threads; ++i) pool.emplace_back(work);
    for (auto& th : pool) th.join();
  }

  McOutput out;
  out.stats.init(dim);
  out.max_abs = VecX::Zero(dim);
  for (int b = 0; b < n_blocks; ++b) {
    out.stats.merge(blocks[b].stats);
    out.max_abs = out.max_abs.cwiseMax(blocks[b].max_abs);
    out.failed += blocks[b].failed;
    if (checkpoint_paths > 0 && ranges[b].end == checkpoint_paths) {
      out.checkpoint = out.stats;
    }
  }
  return out;
}

}  // namespace hessmc
