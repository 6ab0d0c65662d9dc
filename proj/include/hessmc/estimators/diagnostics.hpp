#pragma once

#include <vector>

#include "hessmc/estimators/estimators.hpp"

namespace hessmc {

// E|N_t| over a list of horizons with the fitted log-log slope; the
// second-order weight scales like 1/t, so the slope should sit near -1.
struct NtScalingRow {
  double t = 0.0;
  double mean_abs_n = 0.0;
  double std_error = 0.0;
};

struct NtScalingTable {
  std::vector<NtScalingRow> rows;
  double slope = 0.0;
};

NtScalingTable nt_scaling_diagnostic(const Manifold& M,
                                     const ScalarFieldBundle& fields,
                                     const Vec& x0, const Vec& v1,
                                     const Vec& v2,
                                     const std::vector<double>& t_list,
                                     const McConfig& mc);

// Exponential-moment diagnostic for |W^(2)|^2 with the admissible rate
//   C1(T, K) = (e^{3KT} - 1) / (3KT)  (K > 0;  C1(T, 0) = 1),
//   alpha2 = 1 / (49 n^2 |R|_inf^2 C1(T, K)).
// Empirical E exp(alpha |W_t^(2)|^2) per requested alpha, with stability
// under doubling of paths and the largest single-path share of the sum.
double exp_moment_c1(double T, double K);
double exp_moment_alpha2(double T, double K, double norm_R, int n);

struct ExpMomentRow {
  double alpha = 0.0;
  double mean = 0.0;        // over 2 n_paths
  double std_error = 0.0;
  double mean_half = 0.0;   // over the first n_paths
  double rel_change = 0.0;  // |mean - mean_half| / mean_half
  double max_share = 0.0;   // largest path term / sum
};

struct ExpMomentTable {
  double c1 = 0.0;
  double alpha2 = 0.0;
  double t = 0.0;
  std::vector<ExpMomentRow> rows;
};

ExpMomentTable exp_moment_diagnostic(const Manifold& M,
                                     const ScalarFieldBundle& fields, double t,
                                     const Vec& v1, const Vec& v2,
                                     const Vec& x0,
                                     const std::vector<double>& alpha_list,
                                     const McConfig& mc);

}  // namespace hessmc
