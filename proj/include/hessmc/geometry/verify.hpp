#pragma once

#include <vector>

#include "hessmc/geometry/manifold.hpp"

namespace hessmc {

// Central finite differences in chart coordinates. Step and tolerance
// defaults are the engine-wide verification convention.
inline constexpr double kFdStep = 1e-4;
inline constexpr double kFdTol = 1e-6;

struct ConnectionReport {
  double max_dev_christoffel = 0.0;  // analytic Gamma vs Gamma from FD of g
  double max_dev_compatibility = 0.0;  // nabla g with analytic Gamma, FD dg
  Vec worst_point;
  double tolerance = kFdTol;
  bool pass = false;
};

// Checks the analytic connection against finite differences of the metric at
// the given points.
ConnectionReport verify_connection(const Manifold& M,
                                   const std::vector<Vec>& points,
                                   double fd_step = kFdStep,
                                   double tolerance = kFdTol);

// Deterministic chart-point sample, uniform in the model's sampling ball.
std::vector<Vec> sample_chart_points(const Manifold& M, int count,
                                     std::uint64_t seed);

// Christoffel symbols from finite differences of the metric.
Christoffel christoffel_from_metric_fd(const Manifold& M, const Vec& x,
                                       double fd_step = kFdStep);

// Christoffel jet with the derivative part taken by finite differences of
// the analytic christoffel(); feeds the FD curvature route.
ChristoffelJet christoffel_jet_fd(const Manifold& M, const Vec& x,
                                  double fd_step = kFdStep);

// R(u,v)w through the FD jet.
Vec riemann_fd(const Manifold& M, const Vec& x, const Vec& u, const Vec& v,
               const Vec& w, double fd_step = kFdStep);

// (nabla_a Ric^#) by finite differences of the analytic ricci_sharp plus
// connection corrections; the independent oracle for nabla_ricci_sharp.
Mat covariant_fd_nabla_ricci_sharp(const Manifold& M, const Vec& x,
                                   const Vec& a, double fd_step = kFdStep);

}  // namespace hessmc
