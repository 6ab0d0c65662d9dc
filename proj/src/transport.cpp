#include "hessmc/transport/transport.hpp"

namespace hessmc {

Mat damped_drift_matrix(const Manifold& M, const ScalarFieldBundle& fields,
                        const PathState& state) {
  const int n = M.dim();
  Mat op = -0.5 * M.ricci_sharp(state.x);
  if (!fields.h_is_zero()) op += field_hessian_op(M, *fields.h, state.x);
  const Mat u_inv = state.u.transpose() * M.metric(state.x);
  return u_inv * op * state.u;
}

TransportObserver::TransportObserver(const Manifold& M,
                                     const ScalarFieldBundle& fields,
                                     Options options)
    : manifold_(&M), fields_(&fields), opt_(std::move(options)) {
  theta_term_zero_ = M.space_form_curvature().has_value();
  if (opt_.v1.size() > 0 || opt_.doubly_damped) {
    check_tangent_dim(M, opt_.v1, "transport v1");
    check_tangent_dim(M, opt_.v2, "transport v2");
  }
}

void TransportObserver::begin(const Manifold& M, const PathState& s0) {
  const int n = M.dim();
  u0_inv_ = s0.u.transpose() * M.metric(s0.x);
  ts_.A = Mat::Identity(n, n);
  ts_.C = Vec::Zero(n);
  if (opt_.v1.size() > 0) {
    ts_.v1_frame = u0_inv_ * opt_.v1;
    ts_.v2_frame = u0_inv_ * opt_.v2;
  } else {
    ts_.v1_frame = Vec::Zero(n);
    ts_.v2_frame = Vec::Zero(n);
  }
}

Vec TransportObserver::c_drift_with(const PathState& s, const Mat& drift,
                                    const Mat& A, const Vec& C) const {
  const Manifold& M = *manifold_;
  Vec out = drift * C;
  const bool h_zero = fields_->h_is_zero();
  if (theta_term_zero_ && h_zero) return out;
  const Vec w1 = s.u * (A * ts_.v1_frame);
  const Vec w2 = s.u * (A * ts_.v2_frame);
  const Mat u_inv = s.u.transpose() * M.metric(s.x);
  Vec extra = Vec::Zero(M.dim());
  if (!theta_term_zero_) extra += 0.5 * theta_vector(M, s.x, w1, w2);
  if (!h_zero) {
    extra += field_second_gradient(M, *fields_->h, s.x, w2, w1);
    extra += M.riemann(s.x, field_gradient(M, *fields_->h, s.x), w2, w1);
  }
  out += u_inv * extra;
  return out;
}

void TransportObserver::step(const StepContext& ctx) {
  const Manifold& M = *manifold_;
  const Mat m_before = damped_drift_matrix(M, *fields_, ctx.before);
  const Mat m_after = damped_drift_matrix(M, *fields_, ctx.after);
  const Mat a_pred = ts_.A + ctx.dt * (m_before * ts_.A);
  const Mat a_new =
      ts_.A + 0.5 * ctx.dt * (m_before * ts_.A + m_after * a_pred);

  if (opt_.doubly_damped) {
    // Ito curvature increment: left-point integrand against the martingale
    // part of the scheme's step, which for the Heun corrector is the
    // half-sum frame applied to dB (the left frame alone leaves an O(sqrt(dt))
    // weak bias in the stochastic integrals).
    const Vec mart = 0.5 * ((ctx.before.u + ctx.after.u) * ctx.dB);
    const Vec w1 = ctx.before.u * (ts_.A * ts_.v1_frame);
    const Vec w2 = ctx.before.u * (ts_.A * ts_.v2_frame);
    const Mat u_inv = ctx.before.u.transpose() * M.metric(ctx.before.x);
    const Vec ito = u_inv * M.riemann(ctx.before.x, mart, w2, w1);

    const Vec g_before = c_drift_with(ctx.before, m_before, ts_.A, ts_.C);
    const Vec c_pred = ts_.C + ctx.dt * g_before;
    const Vec g_after = c_drift_with(ctx.after, m_after, a_pred, c_pred);
    ts_.C += 0.5 * ctx.dt * (g_before + g_after) + ito;
  }
  ts_.A = a_new;
}

Vec TransportObserver::damped_apply(const PathState& terminal,
                                    const Vec& v0_chart) const {
  return terminal.u * (ts_.A * (u0_inv_ * v0_chart));
}

Vec TransportObserver::doubly_damped_vector(const PathState& terminal) const {
  return terminal.u * ts_.C;
}

AmbientTransportIntegrator::AmbientTransportIntegrator(
    const Manifold& M, const ScalarFieldBundle& fields)
    : manifold_(&M), fields_(&fields) {}

void AmbientTransportIntegrator::begin(const AmbientState& s0) {
  A_ = Mat::Identity(manifold_->dim(), manifold_->dim());
}

Mat AmbientTransportIntegrator::drift(const AmbientState& s) const {
  const Manifold& M = *manifold_;
  Mat op = -0.5 * M.ricci_sharp_ambient(s.x);
  if (!fields_->h_is_zero()) op += fields_->h->hess_op_ambient(M, s.x);
  return s.u.transpose() * op * s.u;
}

void AmbientTransportIntegrator::step(const AmbientStepContext& ctx) {
  const Mat m_before = drift(ctx.before);
  const Mat m_after = drift(ctx.after);
  const Mat a_pred = A_ + ctx.dt * (m_before * A_);
  A_ = A_ + 0.5 * ctx.dt * (m_before * A_ + m_after * a_pred);
}

Vec AmbientTransportIntegrator::damped_apply_frame(const AmbientState& terminal,
                                                   const Vec& v_frame) const {
  return terminal.u * (A_ * v_frame);
}

WeightObserver::WeightObserver(const TransportObserver* transport,
                               const Potential* V, int expected_steps)
    : transport_(transport), potential_(V), expected_steps_(expected_steps) {}

void WeightObserver::begin(const Manifold& M, const PathState& s0) {
  manifold_ = &M;
  track_s_ = transport_ && transport_->doubly_damped();
  const auto reset = [&](std::vector<double>& v) {
    v.clear();
    v.reserve(expected_steps_ + 1);
    v.push_back(0.0);
  };
  reset(g1_);
  reset(g2_);
  reset(s_);
  reset(pv_);
  v_snap_.clear();
  v_snap_.reserve(expected_steps_ + 1);
  if (potential_) v_snap_.push_back(potential_->value(s0.x));
}

void WeightObserver::pre_step(const StepContext& ctx) {
  // Left-point Ito increments against the martingale part of the step
  // (half-sum frame; see the doubly damped Ito term). In frame coordinates
  // the increment reduces to <corr dB, A_k v~> with corr capturing the
  // corrector's frame average; on flat charts corr == Id and G1(t) = B_t
  // exactly.
  if (transport_) {
    const TransportState& ts = transport_->state();
    const Mat g = manifold_->metric(ctx.before.x);
    const Vec corr_db =
        0.5 * (ctx.before.u.transpose() *
               (g * ((ctx.before.u + ctx.after.u) * ctx.dB)));
    g1_.push_back(g1_.back() + corr_db.dot(ts.A * ts.v1_frame));
    g2_.push_back(g2_.back() + corr_db.dot(ts.A * ts.v2_frame));
    s_.push_back(s_.back() + (track_s_ ? corr_db.dot(ts.C) : 0.0));
  } else {
    g1_.push_back(0.0);
    g2_.push_back(0.0);
    s_.push_back(0.0);
  }
  if (potential_) {
    pv_.push_back(pv_.back() + potential_->value(ctx.before.x) * ctx.dt);
    v_snap_.push_back(potential_->value(ctx.after.x));
  } else {
    pv_.push_back(0.0);
  }
}

void WeightObserver::finish(const PathState&) {}

double WeightObserver::at_time(const std::vector<double>& prefix, double q) {
  if (q <= 0.0) return prefix.front();
  const double last = static_cast<double>(prefix.size() - 1);
  if (q >= last) return prefix.back();
  const int k = static_cast<int>(q);
  const double frac = q - k;
  return (1.0 - frac) * prefix[k] + frac * prefix[k + 1];
}

}  // namespace hessmc
