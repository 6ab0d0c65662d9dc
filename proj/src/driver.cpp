#include "hessmc/pathsim/driver.hpp"

#include <cmath>

namespace hessmc {

void BrownianDriver::increments(int step, Vec& out) const {
  out.resize(dim_);
  double z[kMaxDim];
  standard_normals(seed_, stream_, static_cast<std::uint64_t>(path_),
                   static_cast<std::uint64_t>(step), dim_, z);
  const double scale = std::sqrt(dt_);
  for (int i = 0; i < dim_; ++i) out[i] = scale * z[i];
}

void CoarsenedDriver::increments(int step, Vec& out) const {
  out = Vec::Zero(fine_->dim());
  Vec fine_incr;
  for (int j = 0; j < factor_; ++j) {
    fine_->increments(step * factor_ + j, fine_incr);
    out += fine_incr;
  }
}

}  // namespace hessmc
