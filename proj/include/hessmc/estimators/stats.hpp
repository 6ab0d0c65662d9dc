#pragma once

#include <cmath>

#include "hessmc/types.hpp"

namespace hessmc {

// One-pass mean/variance accumulator (Welford) with the parallel merge rule,
// vector-valued componentwise.
struct Welford {
  long n = 0;
  VecX mean;
  VecX m2;

  void init(int dim) {
    n = 0;
    mean = VecX::Zero(dim);
    m2 = VecX::Zero(dim);
  }

  void add(const VecX& x) {
    ++n;
    const VecX delta = x - mean;
    mean += delta / static_cast<double>(n);
    m2 += delta.cwiseProduct(x - mean);
  }

  void merge(const Welford& other) {
    if (other.n == 0) return;
    if (n == 0) {
      *this = other;
      return;
    }
    const double na = static_cast<double>(n);
    const double nb = static_cast<double>(other.n);
    const VecX delta = other.mean - mean;
    const double nt = na + nb;
    mean += (nb / nt) * delta;
    m2 += other.m2 + delta.cwiseAbs2() * (na * nb / nt);
    n += other.n;
  }

  VecX variance() const {
    if (n < 2) return VecX::Zero(mean.size());
    return m2 / static_cast<double>(n - 1);
  }

  // Standard error of the mean: sample standard deviation / sqrt(n).
  VecX std_error() const {
    if (n < 2) return VecX::Zero(mean.size());
    return (m2 / static_cast<double>(n - 1) / static_cast<double>(n))
        .cwiseSqrt();
  }
};

// Least-squares slope of y against x.
double least_squares_slope(const VecX& x, const VecX& y);

}  // namespace hessmc
