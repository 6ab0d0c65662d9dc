#include "hessmc/pathsim/path.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace hessmc {

const char* path_error_name(PathError e) {
  switch (e) {
    case PathError::none: return "none";
    case PathError::chart_exit: return "chart_exit";
    case PathError::projection_failure: return "projection_failure";
    case PathError::overflow: return "overflow";
  }
  return "unknown";
}

PathState initial_state(const Manifold& M, const Vec& x0) {
  check_tangent_dim(M, x0, "initial point");
  if (!M.in_domain(x0)) throw UsageError("initial point outside chart domain");
  PathState s;
  s.t = 0.0;
  s.x = x0;
  s.u = Mat::Identity(M.dim(), M.dim());
  orthonormalize_columns(s.u, M.metric(x0));
  return s;
}

AmbientState initial_state_ambient(const Manifold& M, const Vec& p0) {
  const int m = M.ambient_dim();
  const int n = M.dim();
  AmbientState s;
  s.t = 0.0;
  s.x = M.retract(p0);
  if (m == n) {
    s.u = Mat::Identity(m, n);
    return s;
  }
  // Greedy tangent basis: project the ambient axes least aligned with the
  // position direction, then Gram-Schmidt.
  const Mat P = M.tangent_projector(s.x);
  std::array<int, kMaxDim> order{};
  std::iota(order.begin(), order.begin() + m, 0);
  const Vec dir = s.x / s.x.norm();
  std::sort(order.begin(), order.begin() + m,
            [&](int a, int b) { return std::abs(dir[a]) < std::abs(dir[b]); });
  s.u = Mat(m, n);
  int col = 0;
  for (int idx = 0; idx < m && col < n; ++idx) {
    Vec cand = P.col(order[idx]);
    for (int b = 0; b < col; ++b) cand -= s.u.col(b).dot(cand) * s.u.col(b);
    const double nrm = cand.norm();
    if (nrm < 1e-8) continue;
    s.u.col(col++) = cand / nrm;
  }
  if (col != n) throw EstimationError("could not build ambient tangent frame");
  return s;
}

AmbientState initial_state_ambient(const Manifold& M, const Vec& p0,
                                   const Mat& frame) {
  AmbientState s;
  s.t = 0.0;
  s.x = M.retract(p0);
  s.u = frame;
  Mat id = Mat::Identity(M.ambient_dim(), M.ambient_dim());
  orthonormalize_columns(s.u, id);
  return s;
}

namespace {

// Combined Stratonovich increment of the frame-bundle system.
void frame_bundle_increment(const Manifold& M, const ScalarFieldBundle& fields,
                            const Vec& x, const Mat& u, const Vec& dB,
                            double dt, Vec& dx, Mat& du) {
  const int n = M.dim();
  dx = u * dB;
  if (!fields.h_is_zero()) dx += field_gradient(M, *fields.h, x) * dt;
  const Christoffel G = M.christoffel(x);
  du.resize(n, n);
  for (int i = 0; i < n; ++i) {
    // du^i_a = -Gamma^i_{jk} u^j_a dx^k = -(u^T G[i] dx)_a
    du.row(i) = -(u.transpose() * (G.G[i] * dx)).transpose();
  }
}

}  // namespace

PathError step_frame_bundle(const Manifold& M, const ScalarFieldBundle& fields,
                            PathState& state, const Vec& dB, double dt) {
  Vec dx0, dx1;
  Mat du0, du1;
  frame_bundle_increment(M, fields, state.x, state.u, dB, dt, dx0, du0);
  const Vec x_pred = state.x + dx0;
  if (!x_pred.allFinite()) return PathError::overflow;
  if (!M.in_domain(x_pred)) return PathError::chart_exit;
  const Mat u_pred = state.u + du0;
  frame_bundle_increment(M, fields, x_pred, u_pred, dB, dt, dx1, du1);

  const Vec x_new = state.x + 0.5 * (dx0 + dx1);
  if (!x_new.allFinite()) return PathError::overflow;
  if (!M.in_domain(x_new)) return PathError::chart_exit;
  Mat u_new = state.u + 0.5 * (du0 + du1);
  orthonormalize_columns(u_new, M.metric(x_new));
  if (!u_new.allFinite()) return PathError::overflow;

  state.x = x_new;
  state.u = u_new;
  state.t += dt;
  return PathError::none;
}

PathError step_gradient_sde(const Manifold& M, const ScalarFieldBundle& fields,
                            AmbientState& state, const Vec& dB, double dt) {
  const bool drift = !fields.h_is_zero();
  const auto increment = [&](const Vec& x) {
    Vec inc = M.tangent_projector(x) * dB;
    if (drift) inc += fields.h->grad_ambient(M, x) * dt;
    return inc;
  };
  const Vec inc0 = increment(state.x);
  const Vec x_pred = state.x + inc0;
  if (!x_pred.allFinite()) return PathError::overflow;
  Vec x_new = state.x + 0.5 * (inc0 + increment(x_pred));
  if (!x_new.allFinite()) return PathError::overflow;

  const Vec projected = M.retract(x_new);
  const double guard = 0.1 * std::max(1.0, projected.norm());
  if ((x_new - projected).norm() > guard) return PathError::projection_failure;
  x_new = projected;

  Mat u_new = M.tangent_projector(x_new) * state.u;
  Mat id = Mat::Identity(M.ambient_dim(), M.ambient_dim());
  orthonormalize_columns(u_new, id);
  if (!u_new.allFinite()) return PathError::overflow;

  state.x = x_new;
  state.u = u_new;
  state.t += dt;
  return PathError::none;
}

PathRunResult simulate_path(const Manifold& M, const ScalarFieldBundle& fields,
                            const Vec& x0, const NoiseSource& driver,
                            const std::vector<PathObserver*>& observers) {
  PathRunResult run;
  run.state = initial_state(M, x0);
  for (PathObserver* obs : observers) obs->begin(M, run.state);

  const int m = driver.steps();
  const double dt = driver.dt();
  Vec dB;
  PathState before = run.state;
  for (int k = 0; k < m; ++k) {
    driver.increments(k, dB);
    before = run.state;
    const PathError err = step_frame_bundle(M, fields, run.state, dB, dt);
    if (err != PathError::none) {
      run.error = err;
      run.state = before;
      return run;
    }
    const StepContext ctx{k, before, run.state, dB, dt};
    for (PathObserver* obs : observers) obs->pre_step(ctx);
    for (PathObserver* obs : observers) obs->step(ctx);
    ++run.steps_done;
  }
  for (PathObserver* obs : observers) obs->finish(run.state);
  return run;
}

AmbientRunResult simulate_path_gradient(
    const Manifold& M, const ScalarFieldBundle& fields,
    const AmbientState& initial, const NoiseSource& driver,
    const std::function<void(const AmbientStepContext&)>& on_step) {
  AmbientRunResult run;
  run.state = initial;
  const int m = driver.steps();
  const double dt = driver.dt();
  Vec dB;
  AmbientState before = run.state;
  for (int k = 0; k < m; ++k) {
    driver.increments(k, dB);
    before = run.state;
    const PathError err = step_gradient_sde(M, fields, run.state, dB, dt);
    if (err != PathError::none) {
      run.error = err;
      run.state = before;
      return run;
    }
    if (on_step) on_step(AmbientStepContext{k, before, run.state, dB, dt});
    ++run.steps_done;
  }
  return run;
}

}  // namespace hessmc
