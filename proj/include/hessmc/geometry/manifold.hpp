#pragma once

#include <memory>
#include <optional>
#include <string>

#include "hessmc/types.hpp"

namespace hessmc {

// A manifold model exposed through a coordinate chart, with optional
// isometric-embedding data for the extrinsic (gradient-SDE) representation.
//
// Conventions, fixed across the engine:
//   R(u,v)w = nabla_u nabla_v w - nabla_v nabla_u w - nabla_{[u,v]} w,
//   so that <R(u,v)v, u> > 0 on the round sphere.
//   Ric(u,v) = tr(w -> R(w,u)v);  Ric^#: <Ric^#(u), v> = Ric(u,v).
class Manifold {
 public:
  virtual ~Manifold() = default;

  virtual int dim() const = 0;
  virtual std::string name() const = 0;

  // Chart data.
  virtual Mat metric(const Vec& x) const = 0;
  virtual Christoffel christoffel(const Vec& x) const = 0;
  virtual ChristoffelJet christoffel_jet(const Vec& x) const = 0;
  virtual bool in_domain(const Vec& x) const { return true; }

  // Curvature. The base implementations assemble everything from the
  // Christoffel jet; models with closed forms override.
  virtual Vec riemann(const Vec& x, const Vec& u, const Vec& v,
                      const Vec& w) const;
  virtual Mat ricci_sharp(const Vec& x) const;

  // (nabla_a Ric^#) as a (1,1) matrix in chart coordinates. The default is a
  // covariant finite difference of ricci_sharp; constant-curvature models
  // override with zero.
  virtual Mat nabla_ricci_sharp(const Vec& x, const Vec& a) const;

  // Declared analytic constants.
  virtual double norm_R_inf() const = 0;     // sup |R|
  virtual double ricci_lower_K() const = 0;  // Ric - 2 Hess h >= -K for catalog h

  // Constant sectional curvature, when the model is a space form.
  virtual std::optional<double> space_form_curvature() const {
    return std::nullopt;
  }

  // Radius of the chart ball used for random verification sampling.
  virtual double chart_sample_radius() const { return 2.0; }

  // Embedding interface (extrinsic models only).
  virtual bool has_embedding() const { return false; }
  virtual int ambient_dim() const { return dim(); }
  virtual Vec embed(const Vec& x) const;
  virtual Vec chart_of(const Vec& p) const;
  virtual Mat embed_jacobian(const Vec& x) const;       // d(embed), m x n
  virtual Mat tangent_projector(const Vec& p) const;    // X(p), m x m
  virtual Vec retract(const Vec& p) const;              // project onto manifold
  virtual Mat ricci_sharp_ambient(const Vec& p) const;  // operator on tangents
};

using ManifoldPtr = std::shared_ptr<const Manifold>;

// Riemannian inner product of chart vectors at x.
inline double metric_inner(const Manifold& M, const Vec& x, const Vec& a,
                           const Vec& b) {
  return a.dot(M.metric(x) * b);
}

// In-place Gram-Schmidt of the columns of u in the inner product given by g.
void orthonormalize_columns(Mat& u, const Mat& g);

// R(u,v)w assembled from the Christoffel jet (the generic route; models may
// provide a faster analytic override of Manifold::riemann).
Vec riemann_from_jet(const ChristoffelJet& jet, const Vec& u, const Vec& v,
                     const Vec& w);

// Ric^# obtained by contracting riemann(); used to cross-check analytic
// Ricci data.
Mat ricci_sharp_from_riemann(const Manifold& M, const Vec& x);

void check_tangent_dim(const Manifold& M, const Vec& v, const char* what);

}  // namespace hessmc
