#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <fstream>

#include "hessmc/harness/acceptance.hpp"
#include "hessmc/harness/runner.hpp"

using namespace hessmc;

namespace {

ExperimentConfig small_config() {
  ExperimentConfig cfg;
  cfg.model = "euclidean:1";
  cfg.h = "zero";
  cfg.V = "zero";
  cfg.f = "x1sq";
  cfg.estimator = "feynman_kac";
  cfg.x0 = {0.0};
  cfg.v1 = {1.0};
  cfg.v2 = {1.0};
  cfg.t = 1.0;
  cfg.dt = 5e-3;
  cfg.n_paths = 4000;
  cfg.seed = 11;
  return cfg;
}

}  // namespace

TEST_CASE("config text parses, echoes and round-trips") {
  const std::string text = R"(# sphere eigenfunction value
model = sphere:r=1
h = zero
V = zero
f = ambient_x3
estimator = feynman_kac
x0_ambient = 0,0,1
t = 0.5
dt = 5e-3
n_paths = 4000
seed = 3
)";
  const ExperimentConfig cfg = parse_config_text(text);
  CHECK(cfg.model == "sphere:r=1");
  CHECK(cfg.x0_ambient.size() == 3);
  CHECK(cfg.t == 0.5);
  validate_config(cfg);

  const auto echo = config_echo(cfg);
  const ExperimentConfig back = config_from_echo(echo);
  CHECK(back == cfg);

  ExperimentConfig cfg2 = cfg;
  apply_config_entry(cfg2, "n_paths", "8000");
  CHECK(cfg2.n_paths == 8000);
  CHECK(!(cfg2 == cfg));
  CHECK_THROWS_AS(apply_config_entry(cfg2, "bogus", "1"), UsageError);
  CHECK_THROWS_AS(parse_config_text("model sphere"), UsageError);
}

TEST_CASE("config validation enforces the grid and catalog invariants") {
  ExperimentConfig cfg = small_config();
  validate_config(cfg);
  cfg.t = 0.123;  // t/dt not divisible by 4
  CHECK_THROWS_AS(validate_config(cfg), UsageError);
  cfg = small_config();
  cfg.n_paths = 50;
  CHECK_THROWS_AS(validate_config(cfg), UsageError);
  cfg = small_config();
  cfg.estimator = "bogus";
  CHECK_THROWS_AS(validate_config(cfg), UsageError);
  cfg = small_config();
  cfg.model = "torus:r=1";
  CHECK_THROWS_AS(validate_config(cfg), UsageError);
  cfg = small_config();
  cfg.x0.clear();
  CHECK_THROWS_AS(validate_config(cfg), UsageError);
}

TEST_CASE("run_experiment attaches the Gaussian oracle and passes") {
  const RunRecord record = run_experiment(small_config());
  REQUIRE(record.oracle.has_value());
  CHECK(record.oracle->value == 1.0);
  CHECK(record.pass);
  CHECK(!record.degraded);
  CHECK(record.result.n_steps == 200);

  // Byte-identical reruns modulo wall time.
  RunRecord again = run_experiment(small_config());
  auto j1 = record_to_json(record);
  auto j2 = record_to_json(again);
  j1.erase("wall_ms");
  j2.erase("wall_ms");
  CHECK(j1.dump() == j2.dump());
}

TEST_CASE("records serialize the config echo for reproduction") {
  const ExperimentConfig cfg = small_config();
  const RunRecord record = run_experiment(cfg);
  const auto j = record_to_json(record);
  std::map<std::string, std::string> echo;
  for (const auto& [k, v] : j.at("config").items()) {
    echo[k] = v.get<std::string>();
  }
  const ExperimentConfig back = config_from_echo(echo);
  CHECK(back == cfg);
  const RunRecord repro = run_experiment(back);
  CHECK(repro.result.mean[0] == record.result.mean[0]);
  CHECK(repro.result.std_error[0] == record.result.std_error[0]);
}

TEST_CASE("sweep over n_paths shows the CLT stderr slope") {
  ExperimentConfig cfg = small_config();
  const SweepResult sweep =
      run_sweep(cfg, "n_paths", {2000.0, 8000.0, 32000.0});
  REQUIRE(sweep.rows.size() == 3);
  REQUIRE(sweep.slopes.count("stderr_slope") == 1);
  CHECK(std::abs(sweep.slopes.at("stderr_slope") + 0.5) <= 0.1);
  CHECK(sweep.csv.find("axis_value,mean,stderr,oracle,abs_err,pass") !=
        std::string::npos);
  CHECK(sweep.csv.find("# stderr_slope=") != std::string::npos);
  // A failing cell is recorded, not fatal.
  const SweepResult bad = run_sweep(cfg, "t", {1.0, 0.123});
  CHECK(bad.rows.size() == 2);
  CHECK(bad.rows[0].pass);
  CHECK(!bad.rows[1].pass);
}

TEST_CASE("ambient inputs resolve through the embedding") {
  ExperimentConfig cfg;
  cfg.model = "sphere:r=1";
  cfg.f = "ambient_x3";
  cfg.estimator = "gradient_pathwise";
  cfg.x0_ambient = {1.0, 0.0, 0.0};
  cfg.v1_ambient = {0.0, 0.0, 1.0};
  cfg.t = 0.5;
  cfg.n_paths = 4000;
  cfg.seed = 5;
  const ResolvedExperiment rx = resolve_experiment(cfg);
  CHECK(rx.x0.size() == 2);
  // |v1|_g = 1 after conversion.
  CHECK(rx.v1.dot(rx.model->metric(rx.x0) * rx.v1) ==
        doctest::Approx(1.0).epsilon(1e-12));
  const RunRecord record = run_experiment(cfg);
  REQUIRE(record.oracle.has_value());
  CHECK(record.pass);
}

TEST_CASE("weak order measurement runs with coupled drivers") {
  const auto model = make_model("euclidean:1");
  const ScalarFieldBundle fields = make_fields(*model, "zero", "zero");
  const TestFunction f = make_test_function("x1sq", *model);
  McConfig mc;
  mc.n_paths = 2000;
  mc.seed = 17;
  // Flat Brownian motion is exact at every step size: the level values are
  // identical path by path, so the coupled differences vanish.
  const WeakOrderResult order = weak_order_coupled_fk(
      *model, fields, f, 1.0, Vec::Zero(1), {2e-2, 1e-2, 5e-3}, mc);
  REQUIRE(order.means.size() == 3);
  CHECK(std::abs(order.means[0] - order.means[2]) <= 1e-12);
  CHECK(std::abs(order.diffs[0]) <= 1e-12);
}

TEST_CASE("acceptance criteria can run individually at reduced scale") {
  AcceptanceOptions opt;
  opt.n_paths = 4000;
  opt.only = {1, 6};
  const auto results = run_acceptance(opt);
  REQUIRE(results.size() == 2);
  CHECK(results[0].name == "flat_degeneracy");
  CHECK(results[0].pass);
  CHECK(results[1].name == "constant_v_reductions");
  CHECK(results[1].pass);
}

TEST_CASE("ricci sign mutation makes the sphere suite fail") {
  AcceptanceOptions opt;
  opt.n_paths = 4000;
  opt.mutate_flip_ricci_sign = true;
  opt.only = {4};
  const auto results = run_acceptance(opt);
  REQUIRE(results.size() == 1);
  CHECK(!results[0].pass);
}

TEST_CASE("output paths resolve through HESSMC_OUTPUT_DIR") {
  setenv("HESSMC_OUTPUT_DIR", "/tmp/hessmc_test_out", 1);
  CHECK(resolve_output_path("runs/a.json") ==
        "/tmp/hessmc_test_out/runs/a.json");
  CHECK(resolve_output_path("/abs/b.json") == "/abs/b.json");
  unsetenv("HESSMC_OUTPUT_DIR");
  CHECK(resolve_output_path("runs/a.json") == "runs/a.json");
}
