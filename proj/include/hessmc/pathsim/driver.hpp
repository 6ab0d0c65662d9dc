#pragma once

#include "hessmc/rng.hpp"
#include "hessmc/types.hpp"

namespace hessmc {

// Brownian increments for one path on a uniform grid.
class NoiseSource {
 public:
  virtual ~NoiseSource() = default;
  virtual int dim() const = 0;
  virtual int steps() const = 0;
  virtual double dt() const = 0;
  // Fills out (resized to dim) with the increment of step k, ~ N(0, dt I).
  virtual void increments(int step, Vec& out) const = 0;
};

// Counter-based driver: the increment of (seed, stream, path, step) is a pure
// function of its key, so paths replay bit-identically and parallelize
// without shared state. Streams keep the intrinsic (n-dimensional) and
// extrinsic (m-dimensional) noises independent.
class BrownianDriver final : public NoiseSource {
 public:
  BrownianDriver(std::uint64_t seed, std::uint64_t stream, std::int64_t path,
                 double dt, int steps, int dim)
      : seed_(seed), stream_(stream), path_(path), dt_(dt), steps_(steps),
        dim_(dim) {}

  int dim() const override { return dim_; }
  int steps() const override { return steps_; }
  double dt() const override { return dt_; }
  void increments(int step, Vec& out) const override;

  std::uint64_t seed() const { return seed_; }
  std::int64_t path() const { return path_; }

 private:
  std::uint64_t seed_;
  std::uint64_t stream_;
  std::int64_t path_;
  double dt_;
  int steps_;
  int dim_;
};

// Dyadic coarsening of a finer source: increment k is the sum of `factor`
// consecutive fine increments. Used by step-size sweeps so that all
// resolutions ride the same Brownian path.
class CoarsenedDriver final : public NoiseSource {
 public:
  CoarsenedDriver(const NoiseSource& fine, int factor)
      : fine_(&fine), factor_(factor) {}

  int dim() const override { return fine_->dim(); }
  int steps() const override { return fine_->steps() / factor_; }
  double dt() const override { return fine_->dt() * factor_; }
  void increments(int step, Vec& out) const override;

 private:
  const NoiseSource* fine_;
  int factor_;
};

inline constexpr std::uint64_t kStreamIntrinsic = 0;
inline constexpr std::uint64_t kStreamExtrinsic = 1;

}  // namespace hessmc
