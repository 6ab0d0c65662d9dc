#include "hessmc/geometry/manifold.hpp"

#include <cmath>

#include "hessmc/geometry/verify.hpp"

namespace hessmc {

Vec riemann_from_jet(const ChristoffelJet& jet, const Vec& u, const Vec& v,
                     const Vec& w) {
  const int n = jet.gamma.n;
  // R^i_{jkl} = d_k G^i_{lj} - d_l G^i_{kj} + G^i_{km} G^m_{lj} - G^i_{lm} G^m_{kj}
  // R(u,v)w = u^k v^l w^j R^i_{jkl} e_i.
  Vec out = Vec::Zero(n);
  for (int i = 0; i < n; ++i) {
    double acc = 0.0;
    for (int k = 0; k < n; ++k) {
      for (int l = 0; l < n; ++l) {
        const double uv = u[k] * v[l];
        if (uv == 0.0) continue;
        for (int j = 0; j < n; ++j) {
          double r = jet.d[k].G[i](l, j) - jet.d[l].G[i](k, j);
          for (int m = 0; m < n; ++m) {
            r += jet.gamma.G[i](k, m) * jet.gamma.G[m](l, j) -
                 jet.gamma.G[i](l, m) * jet.gamma.G[m](k, j);
          }
          acc += uv * w[j] * r;
        }
      }
    }
    out[i] = acc;
  }
  return out;
}

Vec Manifold::riemann(const Vec& x, const Vec& u, const Vec& v,
                      const Vec& w) const {
  return riemann_from_jet(christoffel_jet(x), u, v, w);
}

Mat Manifold::ricci_sharp(const Vec& x) const {
  return ricci_sharp_from_riemann(*this, x);
}

Mat ricci_sharp_from_riemann(const Manifold& M, const Vec& x) {
  const int n = M.dim();
  const ChristoffelJet jet = M.christoffel_jet(x);
  // Ric_{jl} = sum_k R^k_{l k j}: trace of w -> R(w, e_j) e_l.
  Mat ric_form = Mat::Zero(n, n);
  for (int j = 0; j < n; ++j) {
    for (int l = 0; l < n; ++l) {
      double s = 0.0;
      Vec ek = Vec::Zero(n), ej = Vec::Zero(n), el = Vec::Zero(n);
      ej[j] = 1.0;
      el[l] = 1.0;
      for (int k = 0; k < n; ++k) {
        ek.setZero();
        ek[k] = 1.0;
        s += riemann_from_jet(jet, ek, ej, el)[k];
      }
      ric_form(j, l) = s;
    }
  }
  return M.metric(x).inverse() * ric_form;
}

Mat Manifold::nabla_ricci_sharp(const Vec& x, const Vec& a) const {
  return covariant_fd_nabla_ricci_sharp(*this, x, a);
}

Vec Manifold::embed(const Vec& x) const {
  if (!has_embedding()) throw CapabilityError(name() + ": no embedding");
  return x;
}

Vec Manifold::chart_of(const Vec& p) const {
  if (!has_embedding()) throw CapabilityError(name() + ": no embedding");
  return p;
}

Mat Manifold::embed_jacobian(const Vec& x) const {
  if (!has_embedding()) throw CapabilityError(name() + ": no embedding");
  return Mat::Identity(dim(), dim());
}

Mat Manifold::tangent_projector(const Vec& p) const {
  if (!has_embedding()) throw CapabilityError(name() + ": no embedding");
  return Mat::Identity(ambient_dim(), ambient_dim());
}

Vec Manifold::retract(const Vec& p) const {
  if (!has_embedding()) throw CapabilityError(name() + ": no embedding");
  return p;
}

Mat Manifold::ricci_sharp_ambient(const Vec& p) const {
  throw CapabilityError(name() + ": no ambient Ricci operator");
}

void orthonormalize_columns(Mat& u, const Mat& g) {
  const int n = static_cast<int>(u.cols());
  for (int a = 0; a < n; ++a) {
    Vec col = u.col(a);
    for (int b = 0; b < a; ++b) {
      const Vec ub = u.col(b);
      col -= ub.dot(g * col) * ub;
    }
    u.col(a) = col / std::sqrt(col.dot(g * col));
  }
}

void check_tangent_dim(const Manifold& M, const Vec& v, const char* what) {
  if (v.size() != M.dim()) {
    throw UsageError(std::string(what) + ": expected dimension " +
                     std::to_string(M.dim()) + ", got " +
                     std::to_string(v.size()));
  }
}

}  // namespace hessmc
