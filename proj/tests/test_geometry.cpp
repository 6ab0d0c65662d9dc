#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "hessmc/geometry/catalog.hpp"
#include "hessmc/geometry/models.hpp"
#include "hessmc/geometry/tensors.hpp"
#include "hessmc/geometry/verify.hpp"

using namespace hessmc;

namespace {

Vec rand_vec(std::mt19937_64& gen, int n) {
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  Vec v(n);
  for (int i = 0; i < n; ++i) v[i] = unif(gen);
  return v;
}

// Euclidean background with an artificial position-dependent Ricci operator;
// exercises the Theta algebra away from the constant-curvature degeneracy.
class SyntheticRicciModel final : public Manifold {
 public:
  int dim() const override { return 2; }
  std::string name() const override { return "synthetic"; }
  Mat metric(const Vec& x) const override { return Mat::Identity(2, 2); }
  Christoffel christoffel(const Vec& x) const override {
    Christoffel out;
    out.n = 2;
    for (int i = 0; i < 2; ++i) out.G[i] = Mat::Zero(2, 2);
    return out;
  }
  ChristoffelJet christoffel_jet(const Vec& x) const override {
    ChristoffelJet out;
    out.gamma = christoffel(x);
    out.d[0] = out.gamma;
    out.d[1] = out.gamma;
    return out;
  }
  Mat ricci_sharp(const Vec& x) const override {
    Mat a(2, 2), b(2, 2), c(2, 2);
    a << 1.0, 0.2, 0.2, 0.5;
    b << 0.3, -0.1, 0.4, 0.0;
    c << -0.2, 0.6, 0.1, 0.7;
    return a + x[0] * b + x[1] * c;
  }
  // Flat background: the covariant derivative is the plain directional one.
  Mat nabla_ricci_sharp(const Vec& x, const Vec& a) const override {
    Mat b(2, 2), c(2, 2);
    b << 0.3, -0.1, 0.4, 0.0;
    c << -0.2, 0.6, 0.1, 0.7;
    return a[0] * b + a[1] * c;
  }
  double norm_R_inf() const override { return 0.0; }
  double ricci_lower_K() const override { return 0.0; }
};

}  // namespace

TEST_CASE("connection verification by finite differences of the metric") {
  for (const std::string id :
       {std::string("euclidean:2"), std::string("euclidean:3"),
        std::string("sphere:r=1"), std::string("sphere:r=2"),
        std::string("hyperbolic:r=1")}) {
    const auto model = make_model(id);
    const auto points = sample_chart_points(*model, 100, 2024);
    const ConnectionReport report = verify_connection(*model, points);
    INFO(id, " max christoffel dev ", report.max_dev_christoffel,
         " compat dev ", report.max_dev_compatibility);
    CHECK(report.pass);
    if (id == "euclidean:2") {
      CHECK(report.max_dev_christoffel == 0.0);
      CHECK(report.max_dev_compatibility == 0.0);
    }
  }
}

TEST_CASE("curvature closed forms match the generic assembly and FD route") {
  std::mt19937_64 gen(11);
  for (const std::string id :
       {std::string("sphere:r=1"), std::string("hyperbolic:r=1"),
        std::string("sphere:r=2")}) {
    const auto model = make_model(id);
    const Manifold& M = *model;
    const auto points = sample_chart_points(M, 200, 7);
    for (const Vec& x : points) {
      const Vec u = rand_vec(gen, 2), v = rand_vec(gen, 2),
                w = rand_vec(gen, 2);
      const Vec closed = M.riemann(x, u, v, w);
      const Vec generic = riemann_from_jet(M.christoffel_jet(x), u, v, w);
      const Vec fd = riemann_fd(M, x, u, v, w);
      CHECK((closed - generic).cwiseAbs().maxCoeff() <= 1e-10);
      CHECK((closed - fd).cwiseAbs().maxCoeff() <= 1e-6);
    }
  }
}

TEST_CASE("riemann symmetries and Bianchi identity hold analytically") {
  std::mt19937_64 gen(23);
  for (const std::string id :
       {std::string("sphere:r=1"), std::string("hyperbolic:r=1")}) {
    const auto model = make_model(id);
    const Manifold& M = *model;
    for (const Vec& x : sample_chart_points(M, 1000, 99)) {
      const Vec u = rand_vec(gen, 2), v = rand_vec(gen, 2),
                w = rand_vec(gen, 2), z = rand_vec(gen, 2);
      const Mat g = M.metric(x);
      const Vec r = M.riemann(x, u, v, w);
      CHECK((r + M.riemann(x, v, u, w)).cwiseAbs().maxCoeff() <= 1e-10);
      CHECK(std::abs(z.dot(g * r) + w.dot(g * M.riemann(x, u, v, z))) <=
            1e-10);
      CHECK((r + M.riemann(x, v, w, u) + M.riemann(x, w, u, v))
                .cwiseAbs()
                .maxCoeff() <= 1e-10);
    }
  }
}

TEST_CASE("sphere sectional curvature is positive in the fixed convention") {
  const auto model = make_model("sphere:r=1");
  std::mt19937_64 gen(3);
  for (const Vec& x : sample_chart_points(*model, 50, 13)) {
    const Vec u = rand_vec(gen, 2), v = rand_vec(gen, 2);
    const Mat g = model->metric(x);
    const double sec = u.dot(g * model->riemann(x, u, v, v));
    const double area2 = u.dot(g * u) * v.dot(g * v) - std::pow(u.dot(g * v), 2);
    CHECK(sec == doctest::Approx(area2).epsilon(1e-10));
    CHECK(sec >= 0.0);
  }
}

TEST_CASE("ricci closed forms and the contraction route") {
  {
    const auto sphere = make_model("sphere:r=1");
    for (const Vec& x : sample_chart_points(*sphere, 50, 1)) {
      CHECK((sphere->ricci_sharp(x) - Mat::Identity(2, 2))
                .cwiseAbs()
                .maxCoeff() <= 1e-14);
      CHECK((ricci_sharp_from_riemann(*sphere, x) - Mat::Identity(2, 2))
                .cwiseAbs()
                .maxCoeff() <= 1e-8);
    }
  }
  {
    const auto hyper = make_model("hyperbolic:r=1");
    for (const Vec& x : sample_chart_points(*hyper, 50, 2)) {
      CHECK((hyper->ricci_sharp(x) + Mat::Identity(2, 2))
                .cwiseAbs()
                .maxCoeff() <= 1e-14);
      CHECK((ricci_sharp_from_riemann(*hyper, x) + Mat::Identity(2, 2))
                .cwiseAbs()
                .maxCoeff() <= 1e-8);
    }
  }
  {
    const auto euclid = make_model("euclidean:3");
    Vec x(3);
    x << 0.1, 0.2, 0.3;
    CHECK(euclid->ricci_sharp(x).cwiseAbs().maxCoeff() == 0.0);
  }
}

TEST_CASE("nabla Ric vanishes on constant-curvature models (FD oracle)") {
  std::mt19937_64 gen(5);
  for (const std::string id :
       {std::string("sphere:r=1"), std::string("hyperbolic:r=1")}) {
    const auto model = make_model(id);
    for (const Vec& x : sample_chart_points(*model, 100, 3)) {
      const Vec a = rand_vec(gen, 2);
      CHECK(covariant_fd_nabla_ricci_sharp(*model, x, a)
                .cwiseAbs()
                .maxCoeff() <= 1e-6);
      CHECK(model->nabla_ricci_sharp(x, a).cwiseAbs().maxCoeff() == 0.0);
    }
  }
}

TEST_CASE("theta is trilinear and antisymmetric patterns hold") {
  const SyntheticRicciModel M;
  std::mt19937_64 gen(17);
  for (int trial = 0; trial < 200; ++trial) {
    const Vec x = rand_vec(gen, 2);
    const Vec u = rand_vec(gen, 2), up = rand_vec(gen, 2),
              v = rand_vec(gen, 2), w = rand_vec(gen, 2);
    const double alpha = 0.7, beta = -1.3;
    CHECK(theta(M, x, alpha * u + beta * up, v, w) ==
          doctest::Approx(alpha * theta(M, x, u, v, w) +
                          beta * theta(M, x, up, v, w))
              .epsilon(1e-12));
    CHECK(theta(M, x, u, alpha * v + beta * up, w) ==
          doctest::Approx(alpha * theta(M, x, u, v, w) +
                          beta * theta(M, x, u, up, w))
              .epsilon(1e-12));
    CHECK(theta(M, x, u, v, alpha * w + beta * up) ==
          doctest::Approx(alpha * theta(M, x, u, v, w) +
                          beta * theta(M, x, u, v, up))
              .epsilon(1e-12));
  }
}

TEST_CASE("theta duality and theta_h with h == 0") {
  const SyntheticRicciModel M;
  ScalarFieldBundle fields;
  fields.h = std::make_shared<ZeroFunction>();
  fields.V = std::make_shared<ZeroPotential>();
  std::mt19937_64 gen(29);
  for (int trial = 0; trial < 100; ++trial) {
    const Vec x = rand_vec(gen, 2);
    const Vec v1 = rand_vec(gen, 2), v2 = rand_vec(gen, 2),
              v3 = rand_vec(gen, 2);
    const Vec tv = theta_vector(M, x, v1, v2);
    CHECK(tv.dot(M.metric(x) * v3) ==
          doctest::Approx(theta(M, x, v1, v2, v3)).epsilon(1e-12));
    const Vec th = theta_h(M, fields, x, v2, v1);
    CHECK((th - 0.5 * tv).cwiseAbs().maxCoeff() <= 1e-15);
  }
}

TEST_CASE("theta vanishes on the built-in models") {
  std::mt19937_64 gen(31);
  for (const std::string id :
       {std::string("euclidean:2"), std::string("sphere:r=1"),
        std::string("hyperbolic:r=1")}) {
    const auto model = make_model(id);
    for (const Vec& x : sample_chart_points(*model, 20, 4)) {
      const Vec v1 = rand_vec(gen, 2), v2 = rand_vec(gen, 2),
                v3 = rand_vec(gen, 2);
      CHECK(theta(*model, x, v1, v2, v3) == 0.0);
    }
  }
}

TEST_CASE("sphere embedding geometry") {
  const auto model = make_model("sphere:r=1");
  const SphereModel& M = dynamic_cast<const SphereModel&>(*model);
  std::mt19937_64 gen(41);
  for (const Vec& x : sample_chart_points(M, 100, 8)) {
    const Vec p = M.embed(x);
    CHECK(p.norm() == doctest::Approx(1.0).epsilon(1e-14));
    CHECK((M.chart_of(p) - x).cwiseAbs().maxCoeff() <= 1e-12);

    // Isometric embedding: J^T J equals the chart metric.
    const Mat J = M.embed_jacobian(x);
    CHECK((J.transpose() * J - M.metric(x)).cwiseAbs().maxCoeff() <= 1e-12);

    // X(p) X(p)^* restricted to the tangent space is the identity.
    const Mat P = M.tangent_projector(p);
    CHECK((P * P - P).cwiseAbs().maxCoeff() <= 1e-13);
    const Vec tangent = J * rand_vec(gen, 2);
    CHECK((P * tangent - tangent).cwiseAbs().maxCoeff() <= 1e-12);
    CHECK(std::abs(P.trace() - 2.0) <= 1e-12);
  }
}

TEST_CASE("sphere geodesic helpers") {
  const auto model = make_model("sphere:r=1");
  const SphereModel& M = dynamic_cast<const SphereModel&>(*model);
  Vec p(3), v(3);
  p << 0.0, 0.0, 1.0;
  v << 1.0, 0.0, 0.0;
  const Vec q = M.exp_map(p, 0.5 * v);
  CHECK(q.norm() == doctest::Approx(1.0));
  CHECK(M.geodesic_distance(p, q) == doctest::Approx(0.5).epsilon(1e-12));
  const Vec w = M.parallel_transport(p, q, v);
  CHECK(std::abs(w.dot(q)) <= 1e-12);
  CHECK(w.norm() == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("condition Ric - 2 Hess h >= -K on the catalog pairs") {
  struct Case {
    std::string model, h;
  };
  for (const Case& cs :
       {Case{"euclidean:2", "zero"}, Case{"euclidean:2", "quadratic"},
        Case{"sphere:r=1", "zero"}, Case{"sphere:r=1", "height"},
        Case{"hyperbolic:r=1", "zero"}}) {
    const auto model = make_model(cs.model);
    const ScalarFieldBundle fields = make_fields(*model, cs.h, "zero");
    const double K = model->ricci_lower_K();
    for (const Vec& x : sample_chart_points(*model, 200, 12)) {
      const Mat g = model->metric(x);
      Mat form = g * model->ricci_sharp(x);
      if (!fields.h_is_zero()) {
        form -= 2.0 * field_hessian_form(*model, *fields.h, x);
      }
      // Generalized eigenvalue bound via the metric square root.
      Eigen::SelfAdjointEigenSolver<Mat> gs(g);
      const Mat g_inv_sqrt = gs.operatorInverseSqrt();
      Eigen::SelfAdjointEigenSolver<Mat> es(g_inv_sqrt * form * g_inv_sqrt);
      CHECK(es.eigenvalues().minCoeff() >= -K - 1e-9);
    }
  }
}

TEST_CASE("catalog rejects unknown identifiers") {
  CHECK_THROWS_AS(make_model("torus:r=1"), UsageError);
  CHECK_THROWS_AS(make_model("euclidean:4"), UsageError);
  CHECK_THROWS_AS(make_model("sphere:radius=1"), UsageError);
  const auto sphere = make_model("sphere:r=1");
  CHECK_THROWS_AS(make_h_field("quadratic", *sphere), UsageError);
  CHECK_THROWS_AS(make_potential("tanh:eps=1"), UsageError);
  CHECK_THROWS_AS(make_test_function("x9", *sphere), UsageError);
  const auto euclid = make_model("euclidean:2");
  CHECK_THROWS_AS(make_test_function("ambient_x3", *euclid), UsageError);
}

TEST_CASE("theta rejects wrong-dimension inputs") {
  const auto model = make_model("sphere:r=1");
  Vec good(2), bad(3);
  good << 0.1, 0.2;
  bad << 1.0, 0.0, 0.0;
  CHECK_THROWS_AS(theta(*model, good, bad, good, good), UsageError);
}
