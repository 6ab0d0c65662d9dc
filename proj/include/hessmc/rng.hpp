#pragma once

#include <cstdint>

namespace hessmc {

// Counter-based random numbers: every variate is a pure function of
// (seed, stream, path, step, lane). Paths replay bit-identically and can be
// generated concurrently without shared state.

// SplitMix64 finalizer.
inline std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline std::uint64_t counter_key(std::uint64_t seed, std::uint64_t stream,
                                 std::uint64_t path, std::uint64_t step,
                                 std::uint64_t lane) {
  std::uint64_t h = mix64(seed);
  h = mix64(h ^ (stream + 0xd1b54a32d192ed03ULL));
  h = mix64(h ^ (path + 0x8cb92ba72f3d8dd7ULL));
  h = mix64(h ^ (step + 0x2545f4914f6cdd1dULL));
  h = mix64(h ^ (lane + 0x9e3779b97f4a7c15ULL));
  return h;
}

// Uniform in (0,1): 53 significant bits, never exactly 0.
inline double u64_to_unit(std::uint64_t k) {
  return (static_cast<double>(k >> 11) + 0.5) * 0x1.0p-53;
}

// Two standard normals per (key pair) via Box-Muller.
void normal_pair(std::uint64_t seed, std::uint64_t stream, std::uint64_t path,
                 std::uint64_t step, std::uint64_t pair_index, double& z0,
                 double& z1);

// Fills out[0..dim) with independent standard normals.
void standard_normals(std::uint64_t seed, std::uint64_t stream,
                      std::uint64_t path, std::uint64_t step, int dim,
                      double* out);

}  // namespace hessmc
