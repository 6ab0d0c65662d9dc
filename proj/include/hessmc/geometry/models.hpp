#pragma once

#include "hessmc/geometry/manifold.hpp"

namespace hessmc {

// Shared machinery for conformally flat charts g = e^{2 phi} delta with
// phi = log(2 r^2) - log(r^2 + sigma |x|^2), sigma = +1 (stereographic
// sphere chart) or -1 (Poincare disk).
struct ConformalFactor {
  double r = 1.0;
  double sigma = 1.0;

  double lambda(const Vec& x) const;          // e^{phi}
  Vec d1(const Vec& x) const;                 // phi_i
  Mat d2(const Vec& x) const;                 // phi_ij
  std::array<Mat, kMaxDim> d3(const Vec& x) const;  // phi_ijk = d3[k](i,j)

  Mat metric(const Vec& x) const;
  Christoffel christoffel(const Vec& x) const;
  ChristoffelJet christoffel_jet(const Vec& x) const;
};

class EuclideanSpace final : public Manifold {
 public:
  explicit EuclideanSpace(int n);

  int dim() const override { return n_; }
  std::string name() const override;
  Mat metric(const Vec& x) const override;
  Christoffel christoffel(const Vec& x) const override;
  ChristoffelJet christoffel_jet(const Vec& x) const override;
  Vec riemann(const Vec& x, const Vec& u, const Vec& v,
              const Vec& w) const override;
  Mat ricci_sharp(const Vec& x) const override;
  Mat nabla_ricci_sharp(const Vec& x, const Vec& a) const override;
  double norm_R_inf() const override { return 0.0; }
  double ricci_lower_K() const override { return 0.0; }
  std::optional<double> space_form_curvature() const override { return 0.0; }

  // R^n embeds in itself; the gradient SDE reduces to the chart SDE.
  bool has_embedding() const override { return true; }
  int ambient_dim() const override { return n_; }
  Vec embed(const Vec& x) const override { return x; }
  Vec chart_of(const Vec& p) const override { return p; }
  Mat embed_jacobian(const Vec& x) const override;
  Mat tangent_projector(const Vec& p) const override;
  Vec retract(const Vec& p) const override { return p; }
  Mat ricci_sharp_ambient(const Vec& p) const override;

 private:
  int n_;
};

// Round sphere S^2(r) in R^3. Chart: stereographic projection centered at
// the north pole (0,0,r); the south pole sits at chart infinity.
class SphereModel final : public Manifold {
 public:
  explicit SphereModel(double radius);

  int dim() const override { return 2; }
  std::string name() const override;
  Mat metric(const Vec& x) const override;
  Christoffel christoffel(const Vec& x) const override;
  ChristoffelJet christoffel_jet(const Vec& x) const override;
  bool in_domain(const Vec& x) const override;
  Vec riemann(const Vec& x, const Vec& u, const Vec& v,
              const Vec& w) const override;
  Mat ricci_sharp(const Vec& x) const override;
  Mat nabla_ricci_sharp(const Vec& x, const Vec& a) const override;
  double norm_R_inf() const override;
  double ricci_lower_K() const override;
  std::optional<double> space_form_curvature() const override;
  double chart_sample_radius() const override { return 3.0 * r_; }

  bool has_embedding() const override { return true; }
  int ambient_dim() const override { return 3; }
  Vec embed(const Vec& x) const override;
  Vec chart_of(const Vec& p) const override;
  Mat embed_jacobian(const Vec& x) const override;
  Mat tangent_projector(const Vec& p) const override;
  Vec retract(const Vec& p) const override;
  Mat ricci_sharp_ambient(const Vec& p) const override;

  double radius() const { return r_; }

  // Geodesic helpers in ambient coordinates.
  Vec exp_map(const Vec& p, const Vec& w) const;
  Vec parallel_transport(const Vec& p, const Vec& q, const Vec& w) const;
  double geodesic_distance(const Vec& p, const Vec& q) const;

 private:
  double r_;
  ConformalFactor conf_;
};

// Hyperbolic plane H^2(-1/r^2) as the Poincare disk of radius r.
class HyperbolicPlane final : public Manifold {
 public:
  explicit HyperbolicPlane(double radius);

  int dim() const override { return 2; }
  std::string name() const override;
  Mat metric(const Vec& x) const override;
  Christoffel christoffel(const Vec& x) const override;
  ChristoffelJet christoffel_jet(const Vec& x) const override;
  bool in_domain(const Vec& x) const override;
  Vec riemann(const Vec& x, const Vec& u, const Vec& v,
              const Vec& w) const override;
  Mat ricci_sharp(const Vec& x) const override;
  Mat nabla_ricci_sharp(const Vec& x, const Vec& a) const override;
  double norm_R_inf() const override;
  double ricci_lower_K() const override;
  std::optional<double> space_form_curvature() const override;
  // Metric derivatives blow up toward the disk boundary; the verification
  // ball stays where the 1e-4 finite-difference step resolves them to 1e-6.
  double chart_sample_radius() const override { return 0.4 * r_; }

  double radius() const { return r_; }

 private:
  double r_;
  ConformalFactor conf_;
};

// Space-form curvature: R(u,v)w = kappa (<v,w> u - <u,w> v).
Vec space_form_riemann(double kappa, const Mat& g, const Vec& u, const Vec& v,
                       const Vec& w);

}  // namespace hessmc
