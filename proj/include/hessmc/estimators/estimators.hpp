#pragma once

#include "hessmc/estimators/mc.hpp"
#include "hessmc/transport/transport.hpp"

namespace hessmc {

struct EstimatorResult {
  VecX mean;
  VecX std_error;
  long n_paths = 0;  // successful paths
  long failed_paths = 0;
  long n_steps = 0;
  double dt = 0.0;
  std::uint64_t seed = 0;
  bool quadrature_warning = false;

  double value() const { return mean[0]; }
  double se() const { return std_error[0]; }
};

// Number of grid steps for horizon t; throws unless t is a positive grid
// multiple of dt and m is divisible by `divisor`.
int grid_steps(double t, double dt, int divisor, const char* who);

// P_t^{h,V} f(x0) = E[ f(x_t) exp(-int_0^t V(x_s) ds) ].
// The engine's sign convention (sigma_V = -1, documented in the README) makes
// the value estimator consistent with the second-order formula's
// e^{-V(x0) t} prefactor.
EstimatorResult feynman_kac(const Manifold& M, const ScalarFieldBundle& fields,
                            const TestFunction& f, double t, const Vec& x0,
                            const McConfig& mc);

// Same semigroup through the extrinsic gradient-SDE representation
// (embedded models only); cross-validation oracle for the frame-bundle path.
EstimatorResult feynman_kac_extrinsic(const Manifold& M,
                                      const ScalarFieldBundle& fields,
                                      const TestFunction& f, double t,
                                      const Vec& x0, const McConfig& mc);

// dP_t^h f(v) = E[ df(W_t v) ]; requires df, V = 0.
EstimatorResult gradient_pathwise(const Manifold& M,
                                  const ScalarFieldBundle& fields,
                                  const TestFunction& f, double t,
                                  const Vec& x0, const Vec& v,
                                  const McConfig& mc);

// dP_t^h f(v) = E[ f(x_t) (2/t) int_0^{t/2} <X dB, W_s v> ]; derivative-free.
EstimatorResult gradient_bismut(const Manifold& M,
                                const ScalarFieldBundle& fields,
                                const TestFunction& f, double t, const Vec& x0,
                                const Vec& v, const McConfig& mc);

// Hess P_t^h f(v2, v1) = E[ nabla df(W_t v2, W_t v1) ] + E[ df(W_t^(2)(v1,v2)) ].
EstimatorResult hessian_elementary(const Manifold& M,
                                   const ScalarFieldBundle& fields,
                                   const TestFunction& f, double t,
                                   const Vec& x0, const Vec& v1, const Vec& v2,
                                   const McConfig& mc);

// Second-order Feynman-Kac estimator of Hess P_t^{h,V} f(v1, v2); no
// derivatives of f. Terms per path:
//   (i)  f(x_t) N_t,  N_t = (4/t^2)(G1(t) - G1(t/2)) G2(t/2)
//   (ii) f(x_t) (2/t) S(t/2)
//   (iii)/(iv) r-integrals of the potential-increment weight V_{t-r,t} times
//   ((2/(t-r)) S((t-r)/2) + N_{t-r}), entering with a minus sign,
// all scaled by e^{-V(x0) t}.
EstimatorResult hessian_fk(const Manifold& M, const ScalarFieldBundle& fields,
                           const TestFunction& f, double t, const Vec& x0,
                           const Vec& v1, const Vec& v2, const McConfig& mc);

// Per-path breakdown of the hessian_fk statistic, for structural tests.
struct HessianFkPathDetail {
  bool ok = false;
  double f_terminal = 0.0;
  double n_t = 0.0;       // term (i) weight
  double s_half = 0.0;    // S(t/2)
  double r_integral = 0.0;
  double r_integral_coarse = 0.0;
  double prefactor = 1.0;
  double value = 0.0;
};

HessianFkPathDetail hessian_fk_path_detail(const Manifold& M,
                                           const ScalarFieldBundle& fields,
                                           const TestFunction& f, double t,
                                           const Vec& x0, const Vec& v1,
                                           const Vec& v2, const McConfig& mc,
                                           std::int64_t path);

}  // namespace hessmc
