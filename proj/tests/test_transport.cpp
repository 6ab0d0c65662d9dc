#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "hessmc/estimators/stats.hpp"
#include "hessmc/geometry/catalog.hpp"
#include "hessmc/geometry/models.hpp"
#include "hessmc/transport/transport.hpp"

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

struct TransportRun {
  PathRunResult run;
  Mat A;
  Vec C;
  Vec uC;
};

TransportRun run_transport(const Manifold& M, const ScalarFieldBundle& fields,
                           const Vec& x0, const Vec& v1, const Vec& v2,
                           std::uint64_t seed, std::int64_t path, double dt,
                           int m, bool doubly = true) {
  TransportObserver::Options opt;
  opt.v1 = v1;
  opt.v2 = v2;
  opt.doubly_damped = doubly;
  TransportObserver transport(M, fields, opt);
  const BrownianDriver driver(seed, kStreamIntrinsic, path, dt, m, M.dim());
  TransportRun out{simulate_path(M, fields, x0, driver, {&transport}),
                   transport.A(), transport.C(), Vec()};
  if (out.run.ok()) out.uC = transport.doubly_damped_vector(out.run.state);
  return out;
}

}  // namespace

TEST_CASE("flat degeneracy: A stays the identity and C stays zero exactly") {
  const auto model = make_model("euclidean:2");
  const ScalarFieldBundle fields = make_fields(*model, "zero", "zero");
  const TransportRun tr = run_transport(*model, fields, vec2(0.4, -1.0),
                                        vec2(1.0, 0.0), vec2(0.0, 1.0), 9, 0,
                                        5e-3, 200);
  REQUIRE(tr.run.ok());
  CHECK((tr.A - Mat::Identity(2, 2)).cwiseAbs().maxCoeff() == 0.0);
  CHECK(tr.C.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("constant-coefficient damped equations integrate to exponentials") {
  // R^1 with h = -x^2/2: drift matrix is the constant -1, A_t = e^{-t}.
  {
    const auto model = make_model("euclidean:1");
    const ScalarFieldBundle fields = make_fields(*model, "quadratic", "zero");
    const TransportRun tr = run_transport(*model, fields, vec1(0.7),
                                          vec1(1.0), vec1(1.0), 5, 2, 1e-4,
                                          10000, false);
    REQUIRE(tr.run.ok());
    CHECK(std::abs(tr.A(0, 0) - std::exp(-1.0)) <= 1e-8);
  }
  // Sphere with h = 0: drift matrix is the constant -1/2 Id, A_t = e^{-t/2}.
  {
    const auto model = make_model("sphere:r=1");
    const ScalarFieldBundle fields = make_fields(*model, "zero", "zero");
    const TransportRun tr = run_transport(*model, fields, vec2(0.3, 0.1),
                                          vec2(1.0, 0.0), vec2(0.0, 1.0), 5, 3,
                                          1e-4, 5000, false);
    REQUIRE(tr.run.ok());
    CHECK((tr.A - std::exp(-0.25) * Mat::Identity(2, 2)).cwiseAbs().maxCoeff() <=
          1e-8);
  }
}

TEST_CASE("doubly damped translation equals the pathwise derivative of the "
          "damped transport (flat 1D oracle)") {
  // On R^1 with h = sin x the full derivative chain is computable pathwise:
  // the finite difference of A along two common-noise paths started at x0
  // and x0 + eps must match the C integration along the base path.
  const auto model = make_model("euclidean:1");
  ScalarFieldBundle fields;
  fields.h = std::make_shared<SinFirstCoordinate>();
  fields.V = std::make_shared<ZeroPotential>();
  fields.rho_h_bound = 1.0;
  const double dt = 2e-4, t = 0.5, eps = 1e-4;
  const int m = 2500;
  for (std::int64_t path = 0; path < 5; ++path) {
    const double x0 = 0.3;
    const TransportRun base = run_transport(*model, fields, vec1(x0),
                                            vec1(1.0), vec1(1.0), 23, path, dt,
                                            m, true);
    const TransportRun shifted = run_transport(*model, fields, vec1(x0 + eps),
                                               vec1(1.0), vec1(1.0), 23, path,
                                               dt, m, false);
    REQUIRE(base.run.ok());
    REQUIRE(shifted.run.ok());
    const double fd = (shifted.A(0, 0) - base.A(0, 0)) / eps;
    INFO("path ", path, ": C = ", base.C[0], " fd = ", fd);
    CHECK(std::abs(base.C[0] - fd) <=
          2e-2 * std::max(1.0, std::abs(fd)));
  }
}

TEST_CASE("doubly damped output is bilinear in the initial pair") {
  const auto model = make_model("sphere:r=1");
  const ScalarFieldBundle fields = make_fields(*model, "zero", "zero");
  const Vec x0 = vec2(0.2, -0.1);
  const Vec a = vec2(0.6, 0.1), b = vec2(-0.2, 0.5), v2 = vec2(0.1, 0.4);
  const int m = 100;
  const TransportRun ta =
      run_transport(*model, fields, x0, a, v2, 31, 6, 5e-3, m);
  const TransportRun tb =
      run_transport(*model, fields, x0, b, v2, 31, 6, 5e-3, m);
  const TransportRun tab =
      run_transport(*model, fields, x0, Vec(a + b), v2, 31, 6, 5e-3, m);
  REQUIRE(ta.run.ok());
  REQUIRE(tb.run.ok());
  REQUIRE(tab.run.ok());
  CHECK((tab.C - ta.C - tb.C).cwiseAbs().maxCoeff() <= 1e-10);

  // Linearity in the differentiation direction as well.
  const TransportRun sa =
      run_transport(*model, fields, x0, v2, a, 31, 6, 5e-3, m);
  const TransportRun sb =
      run_transport(*model, fields, x0, v2, b, 31, 6, 5e-3, m);
  const TransportRun sab =
      run_transport(*model, fields, x0, v2, Vec(a + b), 31, 6, 5e-3, m);
  CHECK((sab.C - sa.C - sb.C).cwiseAbs().maxCoeff() <= 1e-10);
}

TEST_CASE("pure curvature martingale: E C = 0, E |C|^2 > 0 on the sphere") {
  const auto model = make_model("sphere:r=1");
  const ScalarFieldBundle fields = make_fields(*model, "zero", "zero");
  const Vec x0 = vec2(0.0, 0.0);
  Welford stats;
  stats.init(3);
  const int n_paths = 20000;
  for (int p = 0; p < n_paths; ++p) {
    const TransportRun tr = run_transport(*model, fields, x0, vec2(0.5, 0.0),
                                          vec2(0.0, 0.5), 41, p, 5e-3, 100);
    REQUIRE(tr.run.ok());
    VecX out(3);
    out[0] = tr.C[0];
    out[1] = tr.C[1];
    out[2] = tr.C.squaredNorm();
    stats.add(out);
  }
  const VecX se = stats.std_error();
  CHECK(std::abs(stats.mean[0]) <= 4.0 * se[0]);
  CHECK(std::abs(stats.mean[1]) <= 4.0 * se[1]);
  CHECK(stats.mean[2] > 10.0 * se[2]);
}

TEST_CASE("damped transport norm respects the rho^h bound") {
  const auto model = make_model("sphere:r=1");
  const ScalarFieldBundle fields = make_fields(*model, "height", "zero");
  CHECK(fields.rho_h_bound == doctest::Approx(0.5));
  const double t = 0.5, dt = 5e-3;
  for (int p = 0; p < 200; ++p) {
    const TransportRun tr = run_transport(*model, fields, vec2(0.1, 0.3),
                                          vec2(1.0, 0.0), vec2(0.0, 1.0), 47,
                                          p, dt, 100, false);
    REQUIRE(tr.run.ok());
    const double op_norm = tr.A.jacobiSvd().singularValues()[0];
    CHECK(op_norm <= std::exp(fields.rho_h_bound * t) * (1.0 + 2.0 * dt));
  }
}

TEST_CASE("weight accumulators: flat identities") {
  const auto model = make_model("euclidean:1");
  const ScalarFieldBundle f0 = make_fields(*model, "zero", "zero");
  const ScalarFieldBundle fc = make_fields(*model, "zero", "const:c=0.25");
  const int m = 80;
  const double dt = 5e-3;

  TransportObserver::Options topt;
  topt.v1 = vec1(1.0);
  topt.v2 = vec1(1.0);
  TransportObserver transport(*model, f0, topt);
  WeightObserver weights(&transport, fc.V.get(), m);
  const BrownianDriver driver(53, kStreamIntrinsic, 8, dt, m, 1);
  const PathRunResult run =
      simulate_path(*model, fc, vec1(0.0), driver, {&transport, &weights});
  REQUIRE(run.ok());

  // G1(t) = B_t exactly: W = Id and u = Id on flat space with h = 0.
  Vec dB;
  double b = 0.0;
  for (int k = 0; k < m; ++k) {
    driver.increments(k, dB);
    b += dB[0];
  }
  CHECK(weights.g1()[m] == b);
  CHECK(weights.g2()[m] == b);
  CHECK(run.state.x[0] == b);

  // P_V(t) = c t for constant V (left-point sums of a constant).
  CHECK(weights.pv()[m] == doctest::Approx(0.25 * m * dt).epsilon(1e-13));
  CHECK(weights.s()[m] == 0.0);  // C = 0 on flat space

  // Prefix arrays have one entry per grid point and interpolate linearly.
  CHECK(weights.g1().size() == static_cast<size_t>(m + 1));
  const double mid = WeightObserver::at_time(weights.g1(), 10.5);
  CHECK(mid == doctest::Approx(0.5 * (weights.g1()[10] + weights.g1()[11])));
}

TEST_CASE("first-order weight normalization: E[x_t (2/t) G1(t/2)] = 1") {
  const auto model = make_model("euclidean:1");
  const ScalarFieldBundle fields = make_fields(*model, "zero", "zero");
  const int m = 100;
  const double dt = 0.01, t = 1.0;
  Welford stats;
  stats.init(1);
  for (int p = 0; p < 20000; ++p) {
    TransportObserver::Options topt;
    topt.v1 = vec1(1.0);
    topt.v2 = vec1(1.0);
    TransportObserver transport(*model, fields, topt);
    WeightObserver weights(&transport, nullptr, m);
    const BrownianDriver driver(59, kStreamIntrinsic, p, dt, m, 1);
    const PathRunResult run =
        simulate_path(*model, fields, vec1(0.0), driver, {&transport, &weights});
    REQUIRE(run.ok());
    VecX out(1);
    out[0] = run.state.x[0] * (2.0 / t) * weights.g1()[m / 2];
    stats.add(out);
  }
  CHECK(std::abs(stats.mean[0] - 1.0) <= 4.0 * stats.std_error()[0]);
}

TEST_CASE("ambient damped transport matches the intrinsic one in law "
          "(sphere, deterministic drift matrix)") {
  // Both representations have the constant drift matrix -1/2 Id, so A agrees
  // pathwise for any noise.
  const auto model_ptr = make_model("sphere:r=1");
  const SphereModel& M = dynamic_cast<const SphereModel&>(*model_ptr);
  const ScalarFieldBundle fields = make_fields(M, "zero", "zero");
  Vec p0(3);
  p0 << 0.0, 0.0, 1.0;
  AmbientTransportIntegrator ta(M, fields);
  const AmbientState s0 = initial_state_ambient(M, p0);
  ta.begin(s0);
  const BrownianDriver driver(61, kStreamExtrinsic, 2, 5e-3, 100, 3);
  const AmbientRunResult run = simulate_path_gradient(
      M, fields, s0, driver,
      [&](const AmbientStepContext& ctx) { ta.step(ctx); });
  REQUIRE(run.ok());
  CHECK((ta.A() - std::exp(-0.25) * Mat::Identity(2, 2)).cwiseAbs().maxCoeff() <=
        1e-6);
}
