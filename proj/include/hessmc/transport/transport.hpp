#pragma once

#include <vector>

#include "hessmc/geometry/tensors.hpp"
#include "hessmc/pathsim/path.hpp"

namespace hessmc {

// Transport quantities in frame coordinates, for one fixed ordered pair
// (v1, v2) of initial tangent vectors:
//   damped translation      W_t = u_t A_t u_0^{-1},
//   doubly damped           W_t^(2)(v1, v2) = u_t C_t.
struct TransportState {
  Mat A;
  Vec C;
  Vec v1_frame;  // u_0^{-1} v1
  Vec v2_frame;  // u_0^{-1} v2
};

// Drift matrix of the damped equation in frame coordinates:
// M = u^{-1} (-1/2 Ric^# + Hess h) u, with u^{-1} = u^T g.
Mat damped_drift_matrix(const Manifold& M, const ScalarFieldBundle& fields,
                        const PathState& state);

// Integrates A (always) and C (optionally) along a simulated path.
// Drift terms advance by Heun; the curvature noise term of the doubly damped
// equation is added by left-point Ito evaluation,
//   C += u_k^{-1} R(u_k dB, W_k v2) W_k v1.
class TransportObserver final : public PathObserver {
 public:
  struct Options {
    // Initial pair in chart coordinates at x0. Required whenever the weight
    // integrals or the doubly damped translation are wanted; may stay empty
    // for A-only integration.
    Vec v1;
    Vec v2;
    bool doubly_damped = false;
  };

  TransportObserver(const Manifold& M, const ScalarFieldBundle& fields,
                    Options options);

  void begin(const Manifold& M, const PathState& s0) override;
  void step(const StepContext& ctx) override;

  const TransportState& state() const { return ts_; }
  const Mat& A() const { return ts_.A; }
  const Vec& C() const { return ts_.C; }
  bool doubly_damped() const { return opt_.doubly_damped; }

  // W_t applied to an initial chart vector, as a chart vector at the current
  // path point (frame from the caller's terminal state).
  Vec damped_apply(const PathState& terminal, const Vec& v0_chart) const;

  // u_t C_t: the doubly damped translation as a chart vector.
  Vec doubly_damped_vector(const PathState& terminal) const;

 private:
  Vec c_drift_with(const PathState& s, const Mat& drift, const Mat& A,
                   const Vec& C) const;

  const Manifold* manifold_;
  const ScalarFieldBundle* fields_;
  Options opt_;
  bool theta_term_zero_ = false;  // space forms: Theta == 0
  Mat u0_inv_;
  TransportState ts_;
};

// Prefix accumulators of the stochastic integrals entering the Feynman-Kac
// weights, sampled on the time grid (entry k = integral up to k dt):
//   G1, G2:  int <X dB, W_s v_i>, realized as <dB_k, A_k v_i~>
//   S:       int <X dB, W_s^(2)>, realized as <dB_k, C_k>
//   PV:      int V(x_s) ds (left point)
// plus V(x_k) snapshots for the potential-increment weight.
class WeightObserver final : public PathObserver {
 public:
  WeightObserver(const TransportObserver* transport, const Potential* V,
                 int expected_steps);

  void begin(const Manifold& M, const PathState& s0) override;
  void pre_step(const StepContext& ctx) override;
  void finish(const PathState& terminal) override;

  const std::vector<double>& g1() const { return g1_; }
  const std::vector<double>& g2() const { return g2_; }
  const std::vector<double>& s() const { return s_; }
  const std::vector<double>& pv() const { return pv_; }
  const std::vector<double>& v_snapshots() const { return v_snap_; }

  // Linear interpolation of a prefix array at time tau = q dt.
  static double at_time(const std::vector<double>& prefix, double q);

 private:
  const TransportObserver* transport_;
  const Potential* potential_;
  const Manifold* manifold_ = nullptr;
  int expected_steps_;
  bool track_s_ = false;
  std::vector<double> g1_, g2_, s_, pv_, v_snap_;
};

// Damped translation along an extrinsic gradient-SDE path, in the ambient
// tangent frame: M = U^T (-1/2 Ric + Hess h) U with ambient operators.
class AmbientTransportIntegrator {
 public:
  AmbientTransportIntegrator(const Manifold& M,
                             const ScalarFieldBundle& fields);

  void begin(const AmbientState& s0);
  void step(const AmbientStepContext& ctx);
  const Mat& A() const { return A_; }

  // W_t applied to frame-0 coordinates, as an ambient vector.
  Vec damped_apply_frame(const AmbientState& terminal,
                         const Vec& v_frame) const;

 private:
  Mat drift(const AmbientState& s) const;

  const Manifold* manifold_;
  const ScalarFieldBundle* fields_;
  Mat A_;
};

}  // namespace hessmc
