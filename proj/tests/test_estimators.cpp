#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "hessmc/estimators/diagnostics.hpp"
#include "hessmc/estimators/oracles.hpp"
#include "hessmc/geometry/catalog.hpp"
#include "hessmc/geometry/models.hpp"

using namespace hessmc;

namespace {

Vec vec1(double a) {
  Vec v(1);
  v << a;
  return v;
}

Vec vec2(double a, double b) {
  Vec v(2);
  v << a, b;
  return v;
}

McConfig quick_mc(long n = 20000, double dt = 5e-3, std::uint64_t seed = 7) {
  McConfig mc;
  mc.n_paths = n;
  mc.dt = dt;
  mc.seed = seed;
  return mc;
}

}  // namespace

TEST_CASE("feynman_kac: Brownian second moment on R^1") {
  const auto model = make_model("euclidean:1");
  const ScalarFieldBundle fields = make_fields(*model, "zero", "zero");
  const TestFunction f = make_test_function("x1sq", *model);
  const EstimatorResult res =
      feynman_kac(*model, fields, f, 1.0, vec1(0.0), quick_mc());
  CHECK(std::abs(res.mean[0] - 1.0) <= 4.0 * res.std_error[0]);
  CHECK(res.failed_paths == 0);
}

TEST_CASE("feynman_kac is linear in f path by path") {
  const auto model = make_model("euclidean:2");
  const ScalarFieldBundle fields = make_fields(*model, "zero", "zero");
  const McConfig mc = quick_mc(2000);
  TestFunction fa = make_test_function("x1sq", *model);
  TestFunction fb = make_test_function("sin_x1", *model);
  TestFunction combo;
  combo.f = std::make_shared<LinearCombination>(2.5, fa.f, -1.5, fb.f);
  const Vec x0 = vec2(0.3, 0.0);
  const double lhs =
      feynman_kac(*model, fields, combo, 0.5, x0, mc).mean[0];
  const double rhs =
      2.5 * feynman_kac(*model, fields, fa, 0.5, x0, mc).mean[0] -
      1.5 * feynman_kac(*model, fields, fb, 0.5, x0, mc).mean[0];
  CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
}

TEST_CASE("feynman_kac: constant potential factors out exactly") {
  const auto model = make_model("euclidean:1");
  const ScalarFieldBundle f0 = make_fields(*model, "zero", "zero");
  const ScalarFieldBundle fc = make_fields(*model, "zero", "const:c=0.4");
  const TestFunction f = make_test_function("x1sq", *model);
  const McConfig mc = quick_mc(2000);
  const double m0 = feynman_kac(*model, f0, f, 1.0, vec1(0.2), mc).mean[0];
  const double mc_val = feynman_kac(*model, fc, f, 1.0, vec1(0.2), mc).mean[0];
  // sigma_V = -1: the weight is e^{-c t}.
  CHECK(mc_val == doctest::Approx(std::exp(-0.4) * m0).epsilon(1e-12));
}

TEST_CASE("sphere eigenfunction value, both representations") {
  const auto model = make_model("sphere:r=1");
  const ScalarFieldBundle fields = make_fields(*model, "zero", "zero");
  const TestFunction f = make_test_function("ambient_x3", *model);
  const McConfig mc = quick_mc(20000);
  const double t = 0.5;
  const EstimatorResult intr =
      feynman_kac(*model, fields, f, t, vec2(0.0, 0.0), mc);
  const double expect = oracle::sphere_eigen_decay(t);
  CHECK(std::abs(intr.mean[0] - expect) <= 4.0 * intr.std_error[0] + 6e-3);
  const EstimatorResult extr =
      feynman_kac_extrinsic(*model, fields, f, t, vec2(0.0, 0.0), mc);
  CHECK(std::abs(extr.mean[0] - expect) <= 4.0 * extr.std_error[0] + 6e-3);
}

TEST_CASE("gradient_pathwise: exact zero-variance case") {
  const auto model = make_model("euclidean:2");
  const ScalarFieldBundle fields = make_fields(*model, "zero", "zero");
  const TestFunction f = make_test_function("x1", *model);
  const EstimatorResult res = gradient_pathwise(
      *model, fields, f, 0.5, vec2(0.1, 0.1), vec2(1.0, 0.0), quick_mc(500));
  CHECK(res.mean[0] == 1.0);
  CHECK(res.std_error[0] == 0.0);
}

TEST_CASE("gradient_bismut: Gaussian normalization and zero mean for f == 1") {
  const auto model = make_model("euclidean:1");
  const ScalarFieldBundle fields = make_fields(*model, "zero", "zero");
  {
    const TestFunction f = make_test_function("x1", *model);
    const EstimatorResult res = gradient_bismut(*model, fields, f, 1.0,
                                                vec1(0.0), vec1(1.0),
                                                quick_mc());
    CHECK(std::abs(res.mean[0] - 1.0) <= 4.0 * res.std_error[0]);
  }
  {
    const TestFunction f = make_test_function("one", *model);
    const EstimatorResult res = gradient_bismut(*model, fields, f, 1.0,
                                                vec1(0.0), vec1(1.0),
                                                quick_mc());
    CHECK(std::abs(res.mean[0]) <= 4.0 * res.std_error[0]);
    CHECK(res.std_error[0] > 0.0);
  }
}

TEST_CASE("gradient estimators agree on the sphere eigenfunction") {
  const auto model = make_model("sphere:r=1");
  const ScalarFieldBundle fields = make_fields(*model, "zero", "zero");
  const TestFunction f = make_test_function("ambient_x3", *model);
  const McConfig mc = quick_mc(20000);
  const Vec x0 = model->chart_of([] {
    Vec p(3);
    p << 1.0, 0.0, 0.0;
    return p;
  }());
  const Mat J = model->embed_jacobian(x0);
  Vec v_amb(3);
  v_amb << 0.0, 0.0, 1.0;
  const Vec v = (J.transpose() * J).inverse() * (J.transpose() * v_amb);
  const EstimatorResult gp =
      gradient_pathwise(*model, fields, f, 0.5, x0, v, mc);
  const EstimatorResult gb = gradient_bismut(*model, fields, f, 0.5, x0, v, mc);
  const double comb = std::sqrt(gp.std_error[0] * gp.std_error[0] +
                                gb.std_error[0] * gb.std_error[0]);
  CHECK(std::abs(gp.mean[0] - gb.mean[0]) <= 4.0 * comb);
  const double expect = oracle::sphere_eigen_decay(0.5) * f.f->d1(x0).dot(v);
  CHECK(std::abs(gp.mean[0] - expect) <= 4.0 * gp.std_error[0] + 6e-3);
}

TEST_CASE("hessian_elementary: exact flat case and OU odd symmetry") {
  {
    const auto model = make_model("euclidean:2");
    const ScalarFieldBundle fields = make_fields(*model, "zero", "zero");
    const TestFunction f = make_test_function("x1sq", *model);
    const EstimatorResult res =
        hessian_elementary(*model, fields, f, 0.8, vec2(0.0, 0.0),
                           vec2(1.0, 0.0), vec2(1.0, 0.0), quick_mc(500));
    CHECK(res.mean[0] == 2.0);
    CHECK(res.std_error[0] == 0.0);
  }
  {
    const auto model = make_model("euclidean:1");
    const ScalarFieldBundle fields = make_fields(*model, "quadratic", "zero");
    const TestFunction f = make_test_function("sin_x1", *model);
    const EstimatorResult res =
        hessian_elementary(*model, fields, f, 1.0, vec1(0.0), vec1(1.0),
                           vec1(1.0), quick_mc());
    CHECK(std::abs(res.mean[0] - oracle::ou_hessian_sin(0.0, 1.0)) <=
          4.0 * res.std_error[0] + 1e-3);
  }
}

TEST_CASE("hessian_fk: Gaussian oracle and agreement with the elementary "
          "formula on the sphere") {
  {
    const auto model = make_model("euclidean:1");
    const ScalarFieldBundle fields = make_fields(*model, "zero", "zero");
    const TestFunction f = make_test_function("x1sq", *model);
    const EstimatorResult res = hessian_fk(*model, fields, f, 1.0, vec1(0.0),
                                           vec1(1.0), vec1(1.0), quick_mc());
    CHECK(std::abs(res.mean[0] - 2.0) <= 4.0 * res.std_error[0]);
  }
  {
    const auto model = make_model("sphere:r=1");
    const ScalarFieldBundle fields = make_fields(*model, "zero", "zero");
    const TestFunction f = make_test_function("ambient_x3", *model);
    const McConfig mc = quick_mc(20000);
    const Vec x0 = model->chart_of([] {
      Vec p(3);
      p << 0.0, std::sqrt(0.5), std::sqrt(0.5);
      return p;
    }());
    const Mat J = model->embed_jacobian(x0);
    Vec v_amb(3);
    v_amb << 0.0, std::sqrt(0.5), -std::sqrt(0.5);
    const Vec v = (J.transpose() * J).inverse() * (J.transpose() * v_amb);
    const EstimatorResult he =
        hessian_elementary(*model, fields, f, 0.5, x0, v, v, mc);
    const EstimatorResult hf = hessian_fk(*model, fields, f, 0.5, x0, v, v, mc);
    const double comb = std::sqrt(he.std_error[0] * he.std_error[0] +
                                  hf.std_error[0] * hf.std_error[0]);
    CHECK(std::abs(he.mean[0] - hf.mean[0]) <= 4.0 * comb);
  }
}

TEST_CASE("hessian symmetry over a basis of direction pairs") {
  const auto model = make_model("sphere:r=1");
  const ScalarFieldBundle fields = make_fields(*model, "zero", "zero");
  const TestFunction f = make_test_function("ambient_x3", *model);
  const McConfig mc = quick_mc(10000);
  const Vec x0 = vec2(0.3, -0.2);
  const Vec e1 = vec2(0.5, 0.0), e2 = vec2(0.0, 0.5);
  const EstimatorResult h12 =
      hessian_elementary(*model, fields, f, 0.5, x0, e1, e2, mc);
  const EstimatorResult h21 =
      hessian_elementary(*model, fields, f, 0.5, x0, e2, e1, mc);
  const double comb = std::sqrt(h12.std_error[0] * h12.std_error[0] +
                                h21.std_error[0] * h21.std_error[0]);
  CHECK(std::abs(h12.mean[0] - h21.mean[0]) <= 4.0 * comb + 1e-3);
}

TEST_CASE("pathwise gradient bound |df(W v)| <= |df| e^{rho t}") {
  const auto model = make_model("sphere:r=1");
  const ScalarFieldBundle fields = make_fields(*model, "height", "zero");
  const TestFunction f = make_test_function("ambient_x3", *model);
  // |df|_inf = 1 for the height function, rho^h = 1/2.
  const double t = 0.5, dt = 5e-3;
  const double bound =
      1.0 * std::exp(fields.rho_h_bound * t) * (1.0 + 2.0 * dt);
  const McConfig mc = quick_mc(200);
  TransportObserver::Options topt;
  const Vec v = vec2(0.5, 0.0);
  for (int p = 0; p < 200; ++p) {
    TransportObserver transport(*model, fields, topt);
    const BrownianDriver driver(mc.seed, kStreamIntrinsic, p, dt, 100, 2);
    const PathRunResult run =
        simulate_path(*model, fields, vec2(0.0, 0.0), driver, {&transport});
    REQUIRE(run.ok());
    const double val =
        f.f->d1(run.state.x).dot(transport.damped_apply(run.state, v));
    // |v|_g = 1 at the chart origin.
    CHECK(std::abs(val) <= bound + 1e-12);
  }
}

TEST_CASE("constant-V structural identity for hessian_fk, path by path") {
  const auto model = make_model("euclidean:1");
  const ScalarFieldBundle f0 = make_fields(*model, "zero", "zero");
  const ScalarFieldBundle fc = make_fields(*model, "zero", "const:c=0.3");
  const TestFunction f = make_test_function("x1sq", *model);
  const McConfig mc = quick_mc();
  const int m = 200;
  const double factor = std::exp(-0.3 * (m * mc.dt));
  for (std::int64_t p = 0; p < 100; ++p) {
    const HessianFkPathDetail d0 = hessian_fk_path_detail(
        *model, f0, f, 1.0, vec1(0.0), vec1(1.0), vec1(1.0), mc, p);
    const HessianFkPathDetail dc = hessian_fk_path_detail(
        *model, fc, f, 1.0, vec1(0.0), vec1(1.0), vec1(1.0), mc, p);
    REQUIRE(d0.ok);
    REQUIRE(dc.ok);
    CHECK(dc.r_integral == 0.0);
    CHECK(dc.value == factor * d0.value);
    CHECK(d0.f_terminal == dc.f_terminal);
  }
}

TEST_CASE("nt scaling slope on R^1") {
  const auto model = make_model("euclidean:1");
  const ScalarFieldBundle fields = make_fields(*model, "zero", "zero");
  const NtScalingTable table = nt_scaling_diagnostic(
      *model, fields, vec1(0.0), vec1(1.0), vec1(1.0),
      {0.04, 0.08, 0.16, 0.32, 0.64}, quick_mc(20000));
  CHECK(std::abs(table.slope + 1.0) <= 0.2);
  // Exact Gaussian constant: E|N_t| = 4/(pi t).
  for (const auto& row : table.rows) {
    const double expect = 4.0 / (3.141592653589793 * row.t);
    CHECK(std::abs(row.mean_abs_n - expect) <=
          4.0 * row.std_error + 0.05 * expect);
  }
}

TEST_CASE("exp moment diagnostic constants and flat exactness") {
  CHECK(exp_moment_c1(1.0, 0.0) == 1.0);
  CHECK(exp_moment_c1(1.0, 1.0) ==
        doctest::Approx((std::exp(3.0) - 1.0) / 3.0).epsilon(1e-14));
  CHECK(exp_moment_alpha2(1.0, 1.0, 1.0, 2) ==
        doctest::Approx(8.0198e-4).epsilon(1e-3));

  const auto model = make_model("euclidean:2");
  const ScalarFieldBundle fields = make_fields(*model, "zero", "zero");
  const ExpMomentTable table = exp_moment_diagnostic(
      *model, fields, 1.0, vec2(1.0, 0.0), vec2(0.0, 1.0), vec2(0.0, 0.0),
      {1e-3, 1e-2}, quick_mc(500));
  for (const auto& row : table.rows) {
    CHECK(row.mean == 1.0);  // W^(2) == 0 exactly on flat space
    CHECK(row.rel_change == 0.0);
  }

  const auto sphere = make_model("sphere:r=1");
  const ScalarFieldBundle sf = make_fields(*sphere, "zero", "zero");
  CHECK_THROWS_AS(exp_moment_diagnostic(*sphere, sf, 1.0, vec2(0.5, 0.0),
                                        vec2(0.0, 0.5), vec2(0.0, 0.0),
                                        {1.0}, quick_mc(500)),
                  UsageError);
}

TEST_CASE("estimator error contracts") {
  const auto model = make_model("euclidean:1");
  const ScalarFieldBundle fields = make_fields(*model, "zero", "zero");
  const ScalarFieldBundle with_v = make_fields(*model, "zero", "const:c=0.1");
  const TestFunction f = make_test_function("x1sq", *model);
  const McConfig mc = quick_mc(500);

  CHECK_THROWS_AS(
      feynman_kac(*model, fields, f, -1.0, vec1(0.0), mc), UsageError);
  CHECK_THROWS_AS(
      feynman_kac(*model, fields, f, 0.123456, vec1(0.0), mc), UsageError);
  CHECK_THROWS_AS(gradient_pathwise(*model, with_v, f, 1.0, vec1(0.0),
                                    vec1(1.0), mc),
                  UsageError);
  // t/dt = 10 is not divisible by 4.
  CHECK_THROWS_AS(hessian_fk(*model, fields, f, 0.05, vec1(0.0), vec1(1.0),
                             vec1(1.0), mc),
                  UsageError);

  class ValueOnly final : public ChartFunction {
   public:
    std::string id() const override { return "value_only"; }
    double value(const Vec& x) const override { return x[0]; }
    int derivative_order() const override { return 0; }
  };
  TestFunction rough;
  rough.f = std::make_shared<ValueOnly>();
  rough.smoothness = Smoothness::BoundedMeasurable;
  CHECK_THROWS_AS(gradient_pathwise(*model, fields, rough, 1.0, vec1(0.0),
                                    vec1(1.0), mc),
                  CapabilityError);
  CHECK_THROWS_AS(hessian_elementary(*model, fields, rough, 1.0, vec1(0.0),
                                     vec1(1.0), vec1(1.0), mc),
                  CapabilityError);

  // All paths failing surfaces as an estimation error (tiny hyperbolic
  // domain margin with large steps).
  const auto hyper = make_model("hyperbolic:r=1");
  const ScalarFieldBundle hfields = make_fields(*hyper, "zero", "zero");
  TestFunction hx1 = make_test_function("x1", *hyper);
  McConfig big = quick_mc(200, 0.25);
  CHECK_THROWS_AS(
      feynman_kac(*hyper, hfields, hx1, 4.0, vec2(0.9999985, 0.0), big),
      EstimationError);
}

TEST_CASE("runs are deterministic and independent of the thread count") {
  const auto model = make_model("sphere:r=1");
  const ScalarFieldBundle fields = make_fields(*model, "zero", "zero");
  const TestFunction f = make_test_function("ambient_x3", *model);
  McConfig mc = quick_mc(4000);
  mc.threads = 1;
  const EstimatorResult a =
      feynman_kac(*model, fields, f, 0.5, vec2(0.0, 0.0), mc);
  mc.threads = 2;
  const EstimatorResult b =
      feynman_kac(*model, fields, f, 0.5, vec2(0.0, 0.0), mc);
  CHECK(a.mean[0] == b.mean[0]);
  CHECK(a.std_error[0] == b.std_error[0]);
}
