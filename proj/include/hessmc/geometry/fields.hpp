#pragma once

#include <cmath>
#include <limits>
#include <memory>
#include <string>

#include "hessmc/geometry/manifold.hpp"

namespace hessmc {

// A scalar function given in chart coordinates with analytic partials up to
// third order. Covariant objects (gradient, Hessian, second covariant
// derivative of the gradient) are assembled from these and the Christoffel
// jet; see the free functions below.
class ChartFunction {
 public:
  virtual ~ChartFunction() = default;

  virtual std::string id() const = 0;
  virtual double value(const Vec& x) const = 0;
  virtual Vec d1(const Vec& x) const;
  virtual Mat d2(const Vec& x) const;
  virtual std::array<Mat, kMaxDim> d3(const Vec& x) const;  // d3[k](i,j)

  // Number of derivative orders provided (0 = value only).
  virtual int derivative_order() const { return 3; }
  virtual bool is_zero() const { return false; }

  // Ambient evaluation for embedded models. Defaults go through the chart;
  // fields with closed ambient forms override to stay chart-free.
  virtual double value_ambient(const Manifold& M, const Vec& p) const;
  virtual Vec grad_ambient(const Manifold& M, const Vec& p) const;
  virtual Mat hess_op_ambient(const Manifold& M, const Vec& p) const;
};

using ChartFunctionPtr = std::shared_ptr<const ChartFunction>;

// Riemannian gradient, chart components: g^{-1} df.
Vec field_gradient(const Manifold& M, const ChartFunction& f, const Vec& x);

// Covariant Hessian as a symmetric bilinear form: H_ij = f_ij - G^k_ij f_k.
Mat field_hessian_form(const Manifold& M, const ChartFunction& f, const Vec& x);

// Hessian as an operator (indices raised with g^{-1}).
Mat field_hessian_op(const Manifold& M, const ChartFunction& f, const Vec& x);

// nabla^2(grad f)(a, b): the outer covariant derivative along a of the
// (1,1) Hessian, applied to b. Returns a tangent vector.
Vec field_second_gradient(const Manifold& M, const ChartFunction& f,
                          const Vec& x, const Vec& a, const Vec& b);

// ---------------------------------------------------------------------------
// Zero-order potential: bounded, Holder continuous, value-only.
class Potential {
 public:
  virtual ~Potential() = default;
  virtual std::string id() const = 0;
  virtual double value(const Vec& x) const = 0;
  virtual double bound() const = 0;
  virtual double holder_exponent() const { return 1.0; }
  virtual double holder_constant() const = 0;
  virtual bool is_zero() const { return false; }
  virtual bool is_constant() const { return false; }
  virtual double value_ambient(const Manifold& M, const Vec& p) const;
};

using PotentialPtr = std::shared_ptr<const Potential>;

// Drift potential h and zero-order potential V for one experiment, plus the
// declared bound rho_h >= sup_{|v|=1} (-1/2 Ric + Hess h)(v, v).
struct ScalarFieldBundle {
  ChartFunctionPtr h;
  PotentialPtr V;
  double rho_h_bound = 0.0;

  bool h_is_zero() const { return !h || h->is_zero(); }
  bool v_is_zero() const { return !V || V->is_zero(); }
};

enum class Smoothness { BoundedMeasurable, BC1, BC2 };

struct TestFunction {
  ChartFunctionPtr f;
  Smoothness smoothness = Smoothness::BC2;
  // Declared sup norms (quiet NaN when unknown); used by bound diagnostics.
  double sup_f = std::numeric_limits<double>::quiet_NaN();
  double sup_df = std::numeric_limits<double>::quiet_NaN();
  double sup_hess = std::numeric_limits<double>::quiet_NaN();
};

// ---------------------------------------------------------------------------
// Built-in fields.

class ZeroFunction final : public ChartFunction {
 public:
  std::string id() const override { return "zero"; }
  double value(const Vec&) const override { return 0.0; }
  Vec d1(const Vec& x) const override { return Vec::Zero(x.size()); }
  Mat d2(const Vec& x) const override {
    return Mat::Zero(x.size(), x.size());
  }
  std::array<Mat, kMaxDim> d3(const Vec& x) const override;
  bool is_zero() const override { return true; }
  double value_ambient(const Manifold&, const Vec&) const override {
    return 0.0;
  }
  Vec grad_ambient(const Manifold& M, const Vec&) const override {
    return Vec::Zero(M.ambient_dim());
  }
  Mat hess_op_ambient(const Manifold& M, const Vec&) const override {
    return Mat::Zero(M.ambient_dim(), M.ambient_dim());
  }
};

// h(x) = -|x|^2 / 2 on Euclidean space.
class NegHalfSquareNorm final : public ChartFunction {
 public:
  std::string id() const override { return "quadratic"; }
  double value(const Vec& x) const override { return -0.5 * x.squaredNorm(); }
  Vec d1(const Vec& x) const override { return -x; }
  Mat d2(const Vec& x) const override {
    return -Mat::Identity(x.size(), x.size());
  }
  std::array<Mat, kMaxDim> d3(const Vec& x) const override;
  Vec grad_ambient(const Manifold&, const Vec& p) const override { return -p; }
  Mat hess_op_ambient(const Manifold& M, const Vec& p) const override {
    return -Mat::Identity(M.ambient_dim(), M.ambient_dim());
  }
};

// Ambient height x_3 restricted to S^2(r), in the stereographic chart.
class SphereHeight final : public ChartFunction {
 public:
  explicit SphereHeight(double r) : r_(r) {}
  std::string id() const override { return "height"; }
  double value(const Vec& x) const override;
  Vec d1(const Vec& x) const override;
  Mat d2(const Vec& x) const override;
  std::array<Mat, kMaxDim> d3(const Vec& x) const override;
  double value_ambient(const Manifold&, const Vec& p) const override {
    return p[2];
  }
  Vec grad_ambient(const Manifold& M, const Vec& p) const override;
  Mat hess_op_ambient(const Manifold& M, const Vec& p) const override;

 private:
  double r_;
};

// x_1 in chart coordinates.
class FirstCoordinate final : public ChartFunction {
 public:
  std::string id() const override { return "x1"; }
  double value(const Vec& x) const override { return x[0]; }
  Vec d1(const Vec& x) const override;
  Mat d2(const Vec& x) const override {
    return Mat::Zero(x.size(), x.size());
  }
  std::array<Mat, kMaxDim> d3(const Vec& x) const override;
};

// x_1^2 in chart coordinates.
class FirstCoordinateSquared final : public ChartFunction {
 public:
  std::string id() const override { return "x1sq"; }
  double value(const Vec& x) const override { return x[0] * x[0]; }
  Vec d1(const Vec& x) const override;
  Mat d2(const Vec& x) const override;
  std::array<Mat, kMaxDim> d3(const Vec& x) const override;
};

// sin(x_1) in chart coordinates.
class SinFirstCoordinate final : public ChartFunction {
 public:
  std::string id() const override { return "sin_x1"; }
  double value(const Vec& x) const override { return std::sin(x[0]); }
  Vec d1(const Vec& x) const override;
  Mat d2(const Vec& x) const override;
  std::array<Mat, kMaxDim> d3(const Vec& x) const override;
};

class ConstantFunction final : public ChartFunction {
 public:
  explicit ConstantFunction(double c) : c_(c) {}
  std::string id() const override { return "const"; }
  double value(const Vec&) const override { return c_; }
  Vec d1(const Vec& x) const override { return Vec::Zero(x.size()); }
  Mat d2(const Vec& x) const override {
    return Mat::Zero(x.size(), x.size());
  }
  std::array<Mat, kMaxDim> d3(const Vec& x) const override;
  bool is_zero() const override { return c_ == 0.0; }
  double value_ambient(const Manifold&, const Vec&) const override {
    return c_;
  }

 private:
  double c_;
};

// a f + b g, for linearity tests and composite experiments.
class LinearCombination final : public ChartFunction {
 public:
  LinearCombination(double a, ChartFunctionPtr f, double b, ChartFunctionPtr g)
      : a_(a), f_(std::move(f)), b_(b), g_(std::move(g)) {}
  std::string id() const override;
  double value(const Vec& x) const override;
  Vec d1(const Vec& x) const override;
  Mat d2(const Vec& x) const override;
  std::array<Mat, kMaxDim> d3(const Vec& x) const override;
  int derivative_order() const override;

 private:
  double a_;
  ChartFunctionPtr f_;
  double b_;
  ChartFunctionPtr g_;
};

class ZeroPotential final : public Potential {
 public:
  std::string id() const override { return "zero"; }
  double value(const Vec&) const override { return 0.0; }
  double bound() const override { return 0.0; }
  double holder_constant() const override { return 0.0; }
  bool is_zero() const override { return true; }
  bool is_constant() const override { return true; }
  double value_ambient(const Manifold&, const Vec&) const override {
    return 0.0;
  }
};

class ConstantPotential final : public Potential {
 public:
  explicit ConstantPotential(double c) : c_(c) {}
  std::string id() const override;
  double value(const Vec&) const override { return c_; }
  double bound() const override { return std::abs(c_); }
  double holder_constant() const override { return 0.0; }
  bool is_zero() const override { return c_ == 0.0; }
  bool is_constant() const override { return true; }
  double value_ambient(const Manifold&, const Vec&) const override {
    return c_;
  }

 private:
  double c_;
};

// V(x) = eps cos(x_1), x_1 the first chart coordinate.
class CosinePotential final : public Potential {
 public:
  explicit CosinePotential(double eps) : eps_(eps) {}
  std::string id() const override;
  double value(const Vec& x) const override { return eps_ * std::cos(x[0]); }
  double bound() const override { return std::abs(eps_); }
  double holder_constant() const override { return std::abs(eps_); }

 private:
  double eps_;
};

}  // namespace hessmc
