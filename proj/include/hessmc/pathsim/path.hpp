#pragma once

#include <functional>
#include <vector>

#include "hessmc/geometry/fields.hpp"
#include "hessmc/geometry/manifold.hpp"
#include "hessmc/pathsim/driver.hpp"

namespace hessmc {

inline constexpr double kOrthoTol = 1e-12;

// Intrinsic path state: chart point and a g-orthonormal frame whose columns
// carry the stochastic parallel transport.
struct PathState {
  double t = 0.0;
  Vec x;
  Mat u;
};

// Extrinsic path state: ambient point on the embedded manifold and an
// orthonormal tangent frame (m x n).
struct AmbientState {
  double t = 0.0;
  Vec x;
  Mat u;
};

enum class PathError { none, chart_exit, projection_failure, overflow };

const char* path_error_name(PathError e);

PathState initial_state(const Manifold& M, const Vec& x0);
AmbientState initial_state_ambient(const Manifold& M, const Vec& p0);
AmbientState initial_state_ambient(const Manifold& M, const Vec& p0,
                                   const Mat& frame);

// One Heun (Stratonovich predictor-corrector) step of the frame-bundle SDE
//   dx = u . dB + grad h dt,   du^i_a = -Gamma^i_{jk} u^j_a . dx^k,
// followed by Gram-Schmidt of the frame in the metric at the new point.
PathError step_frame_bundle(const Manifold& M, const ScalarFieldBundle& fields,
                            PathState& state, const Vec& dB, double dt);

// One Heun step of the gradient SDE dx = X(x) . dB + grad h dt in ambient
// coordinates, with projection back onto the manifold; the frame is carried
// by projecting and re-orthonormalizing.
PathError step_gradient_sde(const Manifold& M, const ScalarFieldBundle& fields,
                            AmbientState& state, const Vec& dB, double dt);

struct StepContext {
  int step = 0;  // grid index k of the step t_k -> t_{k+1}
  const PathState& before;
  const PathState& after;
  const Vec& dB;
  double dt = 0.0;
};

// Streaming per-step observation. simulate_path runs two phases per step:
// pre_step() while every observer still holds its grid-k data (left-point
// reads, e.g. the Ito weight increments), then step() to advance.
class PathObserver {
 public:
  virtual ~PathObserver() = default;
  virtual void begin(const Manifold& M, const PathState& s0) {}
  virtual void pre_step(const StepContext& ctx) {}
  virtual void step(const StepContext& ctx) {}
  virtual void finish(const PathState& terminal) {}
};

struct PathRunResult {
  PathError error = PathError::none;
  int steps_done = 0;
  PathState state;  // terminal state, or last valid state on failure

  bool ok() const { return error == PathError::none; }
};

PathRunResult simulate_path(const Manifold& M, const ScalarFieldBundle& fields,
                            const Vec& x0, const NoiseSource& driver,
                            const std::vector<PathObserver*>& observers);

struct AmbientStepContext {
  int step = 0;
  const AmbientState& before;
  const AmbientState& after;
  const Vec& dB;
  double dt = 0.0;
};

struct AmbientRunResult {
  PathError error = PathError::none;
  int steps_done = 0;
  AmbientState state;

  bool ok() const { return error == PathError::none; }
};

AmbientRunResult simulate_path_gradient(
    const Manifold& M, const ScalarFieldBundle& fields,
    const AmbientState& initial, const NoiseSource& driver,
    const std::function<void(const AmbientStepContext&)>& on_step = {});

// Pushforward of a chart tangent vector to ambient coordinates.
inline Vec chart_to_ambient(const Manifold& M, const Vec& x, const Vec& v) {
  return M.embed_jacobian(x) * v;
}

}  // namespace hessmc
