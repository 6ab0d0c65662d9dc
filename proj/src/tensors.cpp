#include "hessmc/geometry/tensors.hpp"

namespace hessmc {

double theta(const Manifold& M, const Vec& x, const Vec& v1, const Vec& v2,
             const Vec& v3) {
  check_tangent_dim(M, v1, "theta v1");
  check_tangent_dim(M, v2, "theta v2");
  check_tangent_dim(M, v3, "theta v3");
  const Mat g = M.metric(x);
  const auto pairing = [&](const Vec& a, const Vec& b, const Vec& c) {
    return c.dot(g * (M.nabla_ricci_sharp(x, a) * b));
  };
  return pairing(v3, v1, v2) - pairing(v1, v3, v2) - pairing(v2, v1, v3);
}

Vec theta_vector(const Manifold& M, const Vec& x, const Vec& v1,
                 const Vec& v2) {
  const int n = M.dim();
  Vec lowered(n);
  Vec e = Vec::Zero(n);
  for (int j = 0; j < n; ++j) {
    e.setZero();
    e[j] = 1.0;
    lowered[j] = theta(M, x, v1, v2, e);
  }
  return M.metric(x).inverse() * lowered;
}

Vec theta_h(const Manifold& M, const ScalarFieldBundle& fields, const Vec& x,
            const Vec& v2, const Vec& v1) {
  check_tangent_dim(M, v1, "theta_h v1");
  check_tangent_dim(M, v2, "theta_h v2");
  Vec out = 0.5 * theta_vector(M, x, v1, v2);
  if (!fields.h_is_zero()) {
    out += field_second_gradient(M, *fields.h, x, v2, v1);
    out += M.riemann(x, field_gradient(M, *fields.h, x), v2, v1);
  }
  return out;
}

}  // namespace hessmc
