#pragma once

#include "hessmc/estimators/diagnostics.hpp"
#include "hessmc/geometry/catalog.hpp"
#include "hessmc/harness/records.hpp"

namespace hessmc {

// Resolved experiment inputs (catalog objects plus chart coordinates).
struct ResolvedExperiment {
  ManifoldPtr model;
  ScalarFieldBundle fields;
  TestFunction f;
  Vec x0;
  Vec v1;
  Vec v2;
};

ResolvedExperiment resolve_experiment(const ExperimentConfig& cfg);

// Executes the configured estimator, attaches the registered closed-form
// oracle when one matches, and assembles the self-describing record.
RunRecord run_experiment(const ExperimentConfig& cfg);

struct SweepResult {
  std::vector<RunRecord> records;
  std::vector<SweepRow> rows;
  std::map<std::string, double> slopes;
  std::string csv;
};

// Runs the experiment once per axis value with common seeds. axis is one of
// dt | n_paths | t. A failing cell is recorded and does not abort the sweep.
SweepResult run_sweep(const ExperimentConfig& cfg, const std::string& axis,
                      const std::vector<double>& values);

// Weak-order estimate for E f(x_t) with dyadically coupled paths: all step
// sizes ride the same Brownian path, so the level differences
// D_i = E[f(x_t^{dt_i}) - f(x_t^{dt_{i+1}})] resolve the O(dt) bias well
// below the absolute Monte Carlo error. order = log2(D_0 / D_1).
struct WeakOrderResult {
  std::vector<double> dts;    // descending, dyadic
  std::vector<double> means;  // per level
  std::vector<double> ses;
  std::vector<double> diffs;     // coupled level differences
  std::vector<double> diff_ses;
  double order = 0.0;
};

WeakOrderResult weak_order_coupled_fk(const Manifold& M,
                                      const ScalarFieldBundle& fields,
                                      const TestFunction& f, double t,
                                      const Vec& x0,
                                      const std::vector<double>& dts,
                                      const McConfig& mc);

}  // namespace hessmc
