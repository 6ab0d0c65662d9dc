#include "hessmc/rng.hpp"

#include <cmath>

namespace hessmc {

void normal_pair(std::uint64_t seed, std::uint64_t stream, std::uint64_t path,
                 std::uint64_t step, std::uint64_t pair_index, double& z0,
                 double& z1) {
  const double u1 =
      u64_to_unit(counter_key(seed, stream, path, step, 2 * pair_index));
  const double u2 =
      u64_to_unit(counter_key(seed, stream, path, step, 2 * pair_index + 1));
  const double rad = std::sqrt(-2.0 * std::log(u1));
  const double ang = 6.283185307179586476925286766559 * u2;
  z0 = rad * std::cos(ang);
  z1 = rad * std::sin(ang);
}

void standard_normals(std::uint64_t seed, std::uint64_t stream,
                      std::uint64_t path, std::uint64_t step, int dim,
                      double* out) {
  for (int j = 0; 2 * j < dim; ++j) {
    double z0, z1;
    normal_pair(seed, stream, path, step, static_cast<std::uint64_t>(j), z0, z1);
    out[2 * j] = z0;
    if (2 * j + 1 < dim) out[2 * j + 1] = z1;
  }
}

}  // namespace hessmc
