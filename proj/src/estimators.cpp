#include "hessmc/estimators/estimators.hpp"

#include <cmath>
#include <memory>

namespace hessmc {

namespace {

constexpr double kQuadWarnRel = 0.02;

EstimatorResult finalize(const McOutput& out, const McConfig& mc, int m,
                         const char* who, int keep_dims = 1) {
  if (out.stats.n == 0) {
    throw EstimationError(std::string(who) + ": all paths failed");
  }
  EstimatorResult res;
  res.mean = out.stats.mean.head(keep_dims);
  res.std_error = out.stats.std_error().head(keep_dims);
  res.n_paths = out.stats.n;
  res.failed_paths = out.failed;
  res.n_steps = m;
  res.dt = mc.dt;
  res.seed = mc.seed;
  return res;
}

void require_no_potential(const ScalarFieldBundle& fields, const char* who) {
  if (!fields.v_is_zero()) {
    throw UsageError(std::string(who) + ": requires V = 0");
  }
}

void require_derivatives(const TestFunction& f, int order, const char* who) {
  if (!f.f || f.f->derivative_order() < order) {
    throw CapabilityError(std::string(who) +
                          ": test function lacks required derivatives");
  }
}

}  // namespace

int grid_steps(double t, double dt, int divisor, const char* who) {
  if (!(t > 0.0)) throw UsageError(std::string(who) + ": t must be positive");
  if (!(dt > 0.0)) throw UsageError(std::string(who) + ": dt must be positive");
  const long m = std::llround(t / dt);
  if (m < 1 || std::abs(m * dt - t) > 1e-9 * std::max(1.0, t)) {
    throw UsageError(std::string(who) + ": t must be a grid multiple of dt");
  }
  if (m % divisor != 0) {
    throw UsageError(std::string(who) + ": t/dt must be divisible by " +
                     std::to_string(divisor));
  }
  return static_cast<int>(m);
}

EstimatorResult feynman_kac(const Manifold& M, const ScalarFieldBundle& fields,
                            const TestFunction& f, double t, const Vec& x0,
                            const McConfig& mc) {
  const int m = grid_steps(t, mc.dt, 1, "feynman_kac");
  initial_state(M, x0);  // validates the start point
  const bool need_v = !fields.v_is_zero();
  const ChartFunction& fn = *f.f;

  const WorkerFactory factory = [&, m, x0]() -> PathEvaluator {
    auto weights = std::make_shared<WeightObserver>(
        nullptr, need_v ? fields.V.get() : nullptr, m);
    return [&, m, x0, weights](std::int64_t path, VecX& out) -> bool {
      BrownianDriver driver(mc.seed, kStreamIntrinsic, path, mc.dt, m, M.dim());
      std::vector<PathObserver*> obs;
      if (need_v) obs.push_back(weights.get());
      const PathRunResult run = simulate_path(M, fields, x0, driver, obs);
      if (!run.ok()) return false;
      const double w = need_v ? std::exp(-weights->pv().back()) : 1.0;
      out[0] = fn.value(run.state.x) * w;
      return true;
    };
  };
  return finalize(run_mc(mc, mc.n_paths, 1, factory), mc, m, "feynman_kac");
}

EstimatorResult feynman_kac_extrinsic(const Manifold& M,
                                      const ScalarFieldBundle& fields,
                                      const TestFunction& f, double t,
                                      const Vec& x0, const McConfig& mc) {
  if (!M.has_embedding()) {
    throw CapabilityError("feynman_kac_extrinsic: model has no embedding");
  }
  const int m = grid_steps(t, mc.dt, 1, "feynman_kac_extrinsic");
  const Vec p0 = M.embed(x0);
  const bool need_v = !fields.v_is_zero();
  const ChartFunction& fn = *f.f;

  const WorkerFactory factory = [&, m, p0]() -> PathEvaluator {
    return [&, m, p0](std::int64_t path, VecX& out) -> bool {
      BrownianDriver driver(mc.seed, kStreamExtrinsic, path, mc.dt, m,
                            M.ambient_dim());
      double pv = 0.0;
      const auto on_step = [&](const AmbientStepContext& ctx) {
        if (need_v) pv += fields.V->value_ambient(M, ctx.before.x) * ctx.dt;
      };
      const AmbientRunResult run = simulate_path_gradient(
          M, fields, initial_state_ambient(M, p0), driver,
          need_v ? std::function<void(const AmbientStepContext&)>(on_step)
                 : std::function<void(const AmbientStepContext&)>{});
      if (!run.ok()) return false;
      out[0] = fn.value_ambient(M, run.state.x) * (need_v ? std::exp(-pv) : 1.0);
      return true;
    };
  };
  return finalize(run_mc(mc, mc.n_paths, 1, factory), mc, m,
                  "feynman_kac_extrinsic");
}

EstimatorResult gradient_pathwise(const Manifold& M,
                                  const ScalarFieldBundle& fields,
                                  const TestFunction& f, double t,
                                  const Vec& x0, const Vec& v,
                                  const McConfig& mc) {
  require_derivatives(f, 1, "gradient_pathwise");
  require_no_potential(fields, "gradient_pathwise");
  check_tangent_dim(M, v, "gradient_pathwise v");
  const int m = grid_steps(t, mc.dt, 1, "gradient_pathwise");
  const ChartFunction& fn = *f.f;

  const WorkerFactory factory = [&, m, x0, v]() -> PathEvaluator {
    auto transport =
        std::make_shared<TransportObserver>(M, fields, TransportObserver::Options{});
    return [&, m, x0, v, transport](std::int64_t path, VecX& out) -> bool {
      BrownianDriver driver(mc.seed, kStreamIntrinsic, path, mc.dt, m, M.dim());
      const PathRunResult run =
          simulate_path(M, fields, x0, driver, {transport.get()});
      if (!run.ok()) return false;
      out[0] = fn.d1(run.state.x).dot(transport->damped_apply(run.state, v));
      return true;
    };
  };
  return finalize(run_mc(mc, mc.n_paths, 1, factory), mc, m,
                  "gradient_pathwise");
}

EstimatorResult gradient_bismut(const Manifold& M,
                                const ScalarFieldBundle& fields,
                                const TestFunction& f, double t, const Vec& x0,
                                const Vec& v, const McConfig& mc) {
  require_no_potential(fields, "gradient_bismut");
  check_tangent_dim(M, v, "gradient_bismut v");
  const int m = grid_steps(t, mc.dt, 2, "gradient_bismut");
  const double horizon = m * mc.dt;
  const ChartFunction& fn = *f.f;

  const WorkerFactory factory = [&, m, x0, v, horizon]() -> PathEvaluator {
    TransportObserver::Options opt;
    opt.v1 = v;
    opt.v2 = v;
    auto transport = std::make_shared<TransportObserver>(M, fields, opt);
    auto weights =
        std::make_shared<WeightObserver>(transport.get(), nullptr, m);
    return [&, m, x0, horizon, transport, weights](std::int64_t path,
                                                   VecX& out) -> bool {
      BrownianDriver driver(mc.seed, kStreamIntrinsic, path, mc.dt, m, M.dim());
      const PathRunResult run = simulate_path(M, fields, x0, driver,
                                              {transport.get(), weights.get()});
      if (!run.ok()) return false;
      out[0] = fn.value(run.state.x) * (2.0 / horizon) * weights->g1()[m / 2];
      return true;
    };
  };
  return finalize(run_mc(mc, mc.n_paths, 1, factory), mc, m,
                  "gradient_bismut");
}

EstimatorResult hessian_elementary(const Manifold& M,
                                   const ScalarFieldBundle& fields,
                                   const TestFunction& f, double t,
                                   const Vec& x0, const Vec& v1, const Vec& v2,
                                   const McConfig& mc) {
  require_derivatives(f, 2, "hessian_elementary");
  require_no_potential(fields, "hessian_elementary");
  check_tangent_dim(M, v1, "hessian_elementary v1");
  check_tangent_dim(M, v2, "hessian_elementary v2");
  const int m = grid_steps(t, mc.dt, 1, "hessian_elementary");
  const ChartFunction& fn = *f.f;

  const WorkerFactory factory = [&, m, x0, v1, v2]() -> PathEvaluator {
    TransportObserver::Options opt;
    opt.v1 = v1;
    opt.v2 = v2;
    opt.doubly_damped = true;
    auto transport = std::make_shared<TransportObserver>(M, fields, opt);
    return [&, m, x0, v1, v2, transport](std::int64_t path, VecX& out) -> bool {
      BrownianDriver driver(mc.seed, kStreamIntrinsic, path, mc.dt, m, M.dim());
      const PathRunResult run =
          simulate_path(M, fields, x0, driver, {transport.get()});
      if (!run.ok()) return false;
      const Vec w1 = transport->damped_apply(run.state, v1);
      const Vec w2 = transport->damped_apply(run.state, v2);
      const Mat hess = field_hessian_form(M, fn, run.state.x);
      out[0] = w2.dot(hess * w1) +
               fn.d1(run.state.x).dot(transport->doubly_damped_vector(run.state));
      return true;
    };
  };
  return finalize(run_mc(mc, mc.n_paths, 1, factory), mc, m,
                  "hessian_elementary");
}

// ---------------------------------------------------------------------------
// Second-order Feynman-Kac

namespace {

// Per-worker state for the hessian_fk statistic, including the node table of
// the r-quadrature: trapezoid on the uniform grid over [0, 0.9 t], graded
// mesh r = t - L ((J-i)/J)^2 on the last stretch, where per path the
// integrand behaves like (t-r)^{beta-1} with beta the Holder exponent / 2.
class HessianFkWorker {
 public:
  HessianFkWorker(const Manifold& M, const ScalarFieldBundle& fields,
                  const TestFunction& f, double t, const Vec& x0,
                  const Vec& v1, const Vec& v2, const McConfig& mc, int m)
      : manifold_(M),
        fields_(fields),
        fn_(*f.f),
        x0_(x0),
        mc_(mc),
        m_(m),
        t_(m * mc.dt),
        need_v_(!fields.v_is_zero()),
        transport_(M, fields,
                   TransportObserver::Options{v1, v2, /*doubly_damped=*/true}),
        weights_(&transport_, need_v_ ? fields.V.get() : nullptr, m) {
    if (need_v_) {
      v0_ = fields.V->value(x0);
      const int k0 = (9 * m_) / 10;
      uniform_end_ = k0;
      const double r_star = k0 * mc_.dt;
      const double L = t_ - r_star;
      int J = std::max(8, m_ / 8);
      if (J % 2 != 0) ++J;
      graded_.resize(J + 1);
      for (int i = 0; i <= J; ++i) {
        const double frac = static_cast<double>(J - i) / J;
        graded_[i] = t_ - L * frac * frac;
      }
      prefactor_ = std::exp(-v0_ * t_);
    }
  }

  bool eval(std::int64_t path, HessianFkPathDetail& detail) {
    BrownianDriver driver(mc_.seed, kStreamIntrinsic, path, mc_.dt, m_,
                          manifold_.dim());
    const PathRunResult run = simulate_path(manifold_, fields_, x0_, driver,
                                            {&transport_, &weights_});
    if (!run.ok()) return false;

    const auto& g1 = weights_.g1();
    const auto& g2 = weights_.g2();
    const auto& s = weights_.s();
    detail.f_terminal = fn_.value(run.state.x);
    detail.n_t =
        (4.0 / (t_ * t_)) * (g1[m_] - g1[m_ / 2]) * g2[m_ / 2];
    detail.s_half = s[m_ / 2];
    detail.prefactor = prefactor_;

    double base = detail.f_terminal * detail.n_t +
                  detail.f_terminal * (2.0 / t_) * detail.s_half;
    if (need_v_) {
      r_quadrature(detail);
      base -= detail.f_terminal * detail.r_integral;
    } else {
      detail.r_integral = 0.0;
      detail.r_integral_coarse = 0.0;
    }
    detail.value = prefactor_ * base;
    detail.ok = true;
    return true;
  }

 private:
  // V_{t-r,t} (N_{t-r} + (2/(t-r)) S((t-r)/2)) from the prefix arrays.
  double integrand(double r) const {
    if (r >= t_) return 0.0;
    const auto& g1 = weights_.g1();
    const auto& g2 = weights_.g2();
    const auto& s = weights_.s();
    const auto& pv = weights_.pv();
    const auto& vs = weights_.v_snapshots();
    const double tr = t_ - r;
    const double q = tr / mc_.dt;  // grid index of t - r
    const double v_at = WeightObserver::at_time(vs, q);
    const double expo = (pv[m_] - WeightObserver::at_time(pv, q)) - v0_ * r;
    const double vweight = (v_at - v0_) * std::exp(-expo);
    const double s_half = WeightObserver::at_time(s, 0.5 * q);
    const double g1_tr = WeightObserver::at_time(g1, q);
    const double g1_half = WeightObserver::at_time(g1, 0.5 * q);
    const double g2_half = WeightObserver::at_time(g2, 0.5 * q);
    const double n_tr = (4.0 / (tr * tr)) * (g1_tr - g1_half) * g2_half;
    return vweight * (n_tr + (2.0 / tr) * s_half);
  }

  void r_quadrature(HessianFkPathDetail& detail) const {
    // Uniform trapezoid over grid nodes [0, k0 dt].
    double uniform = 0.0;
    double prev = integrand(0.0);
    for (int j = 1; j <= uniform_end_; ++j) {
      const double cur = integrand(j * mc_.dt);
      uniform += 0.5 * (prev + cur) * mc_.dt;
      prev = cur;
    }
    // Graded trapezoid on [k0 dt, t], fine and every-other-node coarse rule.
    const int J = static_cast<int>(graded_.size()) - 1;
    double fine = 0.0, coarse = 0.0;
    double f_prev = integrand(graded_[0]);
    double c_prev = f_prev;
    for (int i = 1; i <= J; ++i) {
      const double cur = integrand(graded_[i]);
      fine += 0.5 * (f_prev + cur) * (graded_[i] - graded_[i - 1]);
      f_prev = cur;
      if (i % 2 == 0) {
        coarse += 0.5 * (c_prev + cur) * (graded_[i] - graded_[i - 2]);
        c_prev = cur;
      }
    }
    detail.r_integral = uniform + fine;
    detail.r_integral_coarse = uniform + coarse;
  }

  const Manifold& manifold_;
  const ScalarFieldBundle& fields_;
  const ChartFunction& fn_;
  Vec x0_;
  McConfig mc_;
  int m_;
  double t_;
  bool need_v_;
  double v0_ = 0.0;
  double prefactor_ = 1.0;
  int uniform_end_ = 0;
  std::vector<double> graded_;
  TransportObserver transport_;
  WeightObserver weights_;
};

}  // namespace

EstimatorResult hessian_fk(const Manifold& M, const ScalarFieldBundle& fields,
                           const TestFunction& f, double t, const Vec& x0,
                           const Vec& v1, const Vec& v2, const McConfig& mc) {
  check_tangent_dim(M, v1, "hessian_fk v1");
  check_tangent_dim(M, v2, "hessian_fk v2");
  const int m = grid_steps(t, mc.dt, 4, "hessian_fk");
  const bool need_v = !fields.v_is_zero();
  const int dim = need_v ? 2 : 1;

  const WorkerFactory factory = [&, m, x0, v1, v2]() -> PathEvaluator {
    auto worker = std::make_shared<HessianFkWorker>(M, fields, f, t, x0, v1,
                                                    v2, mc, m);
    return [worker, need_v](std::int64_t path, VecX& out) -> bool {
      HessianFkPathDetail detail;
      if (!worker->eval(path, detail)) return false;
      out[0] = detail.value;
      if (need_v) {
        out[1] = std::abs(detail.r_integral - detail.r_integral_coarse);
      }
      return true;
    };
  };
  const McOutput out = run_mc(mc, mc.n_paths, dim, factory);
  EstimatorResult res = finalize(out, mc, m, "hessian_fk");
  if (need_v) {
    res.quadrature_warning =
        out.stats.mean[1] > kQuadWarnRel * (std::abs(out.stats.mean[0]) + 1e-9);
  }
  return res;
}

HessianFkPathDetail hessian_fk_path_detail(const Manifold& M,
                                           const ScalarFieldBundle& fields,
                                           const TestFunction& f, double t,
                                           const Vec& x0, const Vec& v1,
                                           const Vec& v2, const McConfig& mc,
                                           std::int64_t path) {
  const int m = grid_steps(t, mc.dt, 4, "hessian_fk");
  HessianFkWorker worker(M, fields, f, t, x0, v1, v2, mc, m);
  HessianFkPathDetail detail;
  worker.eval(path, detail);
  return detail;
}

}  // namespace hessmc
