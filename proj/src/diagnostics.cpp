#include "hessmc/estimators/diagnostics.hpp"

#include <cmath>
#include <memory>

namespace hessmc {

NtScalingTable nt_scaling_diagnostic(const Manifold& M,
                                     const ScalarFieldBundle& fields,
                                     const Vec& x0, const Vec& v1,
                                     const Vec& v2,
                                     const std::vector<double>& t_list,
                                     const McConfig& mc) {
  if (t_list.empty()) throw UsageError("nt_scaling: empty t list");
  NtScalingTable table;
  for (const double t : t_list) {
    const int m = grid_steps(t, mc.dt, 2, "nt_scaling");
    const double horizon = m * mc.dt;
    const WorkerFactory factory = [&, m, x0, v1, v2, horizon]() -> PathEvaluator {
      TransportObserver::Options opt;
      opt.v1 = v1;
      opt.v2 = v2;
      auto transport = std::make_shared<TransportObserver>(M, fields, opt);
      auto weights =
          std::make_shared<WeightObserver>(transport.get(), nullptr, m);
      return [&, m, x0, horizon, transport, weights](std::int64_t path,
                                                     VecX& out) -> bool {
        BrownianDriver driver(mc.seed, kStreamIntrinsic, path, mc.dt, m,
                              M.dim());
        const PathRunResult run = simulate_path(
            M, fields, x0, driver, {transport.get(), weights.get()});
        if (!run.ok()) return false;
        const auto& g1 = weights->g1();
        const auto& g2 = weights->g2();
        out[0] = std::abs((4.0 / (horizon * horizon)) *
                          (g1[m] - g1[m / 2]) * g2[m / 2]);
        return true;
      };
    };
    const McOutput out = run_mc(mc, mc.n_paths, 1, factory);
    if (out.stats.n == 0) throw EstimationError("nt_scaling: all paths failed");
    table.rows.push_back(
        {horizon, out.stats.mean[0], out.stats.std_error()[0]});
  }
  VecX lx(table.rows.size()), ly(table.rows.size());
  for (size_t i = 0; i < table.rows.size(); ++i) {
    lx[i] = std::log(table.rows[i].t);
    ly[i] = std::log(table.rows[i].mean_abs_n);
  }
  table.slope = least_squares_slope(lx, ly);
  return table;
}

double exp_moment_c1(double T, double K) {
  if (K < 0.0) throw UsageError("exp_moment: K must be nonnegative");
  if (K == 0.0) return 1.0;
  const double s = 3.0 * K * T;
  // (e^s - 1)/s is increasing, so the sup over (0, s] sits at the endpoint.
  return std::expm1(s) / s;
}

double exp_moment_alpha2(double T, double K, double norm_R, int n) {
  if (norm_R <= 0.0) return std::numeric_limits<double>::infinity();
  return 1.0 / (49.0 * n * n * norm_R * norm_R * exp_moment_c1(T, K));
}

ExpMomentTable exp_moment_diagnostic(const Manifold& M,
                                     const ScalarFieldBundle& fields, double t,
                                     const Vec& v1, const Vec& v2,
                                     const Vec& x0,
                                     const std::vector<double>& alpha_list,
                                     const McConfig& mc) {
  if (alpha_list.empty()) throw UsageError("exp_moment: empty alpha list");
  const int m = grid_steps(t, mc.dt, 1, "exp_moment");
  const double K = M.ricci_lower_K();
  ExpMomentTable table;
  table.t = m * mc.dt;
  table.c1 = exp_moment_c1(table.t, K);
  table.alpha2 = exp_moment_alpha2(table.t, K, M.norm_R_inf(), M.dim());
  for (const double alpha : alpha_list) {
    if (alpha > table.alpha2) {
      throw UsageError(
          "exp_moment: alpha exceeds the admissible bound alpha2 = " +
          std::to_string(table.alpha2) +
          " (exponential integrability is only guaranteed up to alpha2)");
    }
  }

  const int dim = static_cast<int>(alpha_list.size());
  const WorkerFactory factory = [&, m, x0, v1, v2]() -> PathEvaluator {
    TransportObserver::Options opt;
    opt.v1 = v1;
    opt.v2 = v2;
    opt.doubly_damped = true;
    auto transport = std::make_shared<TransportObserver>(M, fields, opt);
    return [&, m, x0, transport](std::int64_t path, VecX& out) -> bool {
      BrownianDriver driver(mc.seed, kStreamIntrinsic, path, mc.dt, m, M.dim());
      const PathRunResult run =
          simulate_path(M, fields, x0, driver, {transport.get()});
      if (!run.ok()) return false;
      // |W^(2)| = |u C| in the metric = |C| in frame coordinates.
      const double c2 = transport->C().squaredNorm();
      for (size_t i = 0; i < alpha_list.size(); ++i) {
        out[i] = std::exp(alpha_list[i] * c2);
      }
      return true;
    };
  };

  // One sweep over 2 n paths with a checkpoint at n gives the
  // doubling-stability comparison on nested path sets.
  const McOutput out =
      run_mc(mc, 2 * mc.n_paths, dim, factory, mc.n_paths);
  if (out.stats.n == 0) throw EstimationError("exp_moment: all paths failed");
  const VecX se = out.stats.std_error();
  for (int i = 0; i < dim; ++i) {
    ExpMomentRow row;
    row.alpha = alpha_list[i];
    row.mean = out.stats.mean[i];
    row.std_error = se[i];
    row.mean_half = out.checkpoint ? out.checkpoint->mean[i] : row.mean;
    row.rel_change = std::abs(row.mean - row.mean_half) /
                     std::max(1e-300, std::abs(row.mean_half));
    const double sum = row.mean * static_cast<double>(out.stats.n);
    row.max_share = out.max_abs[i] / std::max(1e-300, sum);
    table.rows.push_back(row);
  }
  return table;
}

}  // namespace hessmc
