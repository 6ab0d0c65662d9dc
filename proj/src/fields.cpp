#include "hessmc/geometry/fields.hpp"

namespace hessmc {

namespace {

std::array<Mat, kMaxDim> zero_d3(int n) {
  std::array<Mat, kMaxDim> out;
  for (int k = 0; k < n; ++k) out[k] = Mat::Zero(n, n);
  return out;
}

}  // namespace

Vec ChartFunction::d1(const Vec&) const {
  throw CapabilityError(id() + ": first derivatives not available");
}

Mat ChartFunction::d2(const Vec&) const {
  throw CapabilityError(id() + ": second derivatives not available");
}

std::array<Mat, kMaxDim> ChartFunction::d3(const Vec&) const {
  throw CapabilityError(id() + ": third derivatives not available");
}

double ChartFunction::value_ambient(const Manifold& M, const Vec& p) const {
  return value(M.chart_of(p));
}

Vec ChartFunction::grad_ambient(const Manifold& M, const Vec& p) const {
  const Vec x = M.chart_of(p);
  return M.embed_jacobian(x) * field_gradient(M, *this, x);
}

Mat ChartFunction::hess_op_ambient(const Manifold& M, const Vec& p) const {
  const Vec x = M.chart_of(p);
  const Mat J = M.embed_jacobian(x);
  const Mat pinv = (J.transpose() * J).inverse() * J.transpose();
  return J * field_hessian_op(M, *this, x) * pinv;
}

double Potential::value_ambient(const Manifold& M, const Vec& p) const {
  return value(M.chart_of(p));
}

Vec field_gradient(const Manifold& M, const ChartFunction& f, const Vec& x) {
  return M.metric(x).inverse() * f.d1(x);
}

Mat field_hessian_form(const Manifold& M, const ChartFunction& f,
                       const Vec& x) {
  const int n = M.dim();
  const Vec df = f.d1(x);
  Mat H = f.d2(x);
  const Christoffel G = M.christoffel(x);
  for (int k = 0; k < n; ++k) H -= df[k] * G.G[k];
  return H;
}

Mat field_hessian_op(const Manifold& M, const ChartFunction& f, const Vec& x) {
  return M.metric(x).inverse() * field_hessian_form(M, f, x);
}

Vec field_second_gradient(const Manifold& M, const ChartFunction& f,
                          const Vec& x, const Vec& a, const Vec& b) {
  const int n = M.dim();
  const Vec df = f.d1(x);
  const Mat d2f = f.d2(x);
  const auto d3f = f.d3(x);
  const ChristoffelJet jet = M.christoffel_jet(x);
  const Mat H = [&] {
    Mat h = d2f;
    for (int k = 0; k < n; ++k) h -= df[k] * jet.gamma.G[k];
    return h;
  }();

  // (nabla_k H)_{ij} = d_k H_{ij} - G^m_{ki} H_{mj} - G^m_{kj} H_{im}, with
  // d_k H_{ij} = f_{kij} - (d_k G^m_{ij}) f_m - G^m_{ij} f_{km}. Contract
  // with a^k b^j and raise the free index; nabla g = 0 lets the metric pass
  // through the covariant derivative.
  Vec lowered = Vec::Zero(n);
  for (int i = 0; i < n; ++i) {
    double acc = 0.0;
    for (int k = 0; k < n; ++k) {
      if (a[k] == 0.0) continue;
      for (int j = 0; j < n; ++j) {
        if (b[j] == 0.0) continue;
        double t = d3f[k](i, j);
        for (int m = 0; m < n; ++m) {
          t -= jet.d[k].G[m](i, j) * df[m] + jet.gamma.G[m](i, j) * d2f(k, m);
          t -= jet.gamma.G[m](k, i) * H(m, j) + jet.gamma.G[m](k, j) * H(i, m);
        }
        acc += a[k] * b[j] * t;
      }
    }
    lowered[i] = acc;
  }
  return M.metric(x).inverse() * lowered;
}

// ---------------------------------------------------------------------------

std::array<Mat, kMaxDim> ZeroFunction::d3(const Vec& x) const {
  return zero_d3(static_cast<int>(x.size()));
}

std::array<Mat, kMaxDim> NegHalfSquareNorm::d3(const Vec& x) const {
  return zero_d3(static_cast<int>(x.size()));
}

// Height on S^2(r) in the north-centered stereographic chart:
// h(u) = 2 r^3 / A - r with A = r^2 + |u|^2.
double SphereHeight::value(const Vec& x) const {
  const double A = r_ * r_ + x.squaredNorm();
  return 2.0 * r_ * r_ * r_ / A - r_;
}

Vec SphereHeight::d1(const Vec& x) const {
  const double A = r_ * r_ + x.squaredNorm();
  return (-4.0 * r_ * r_ * r_ / (A * A)) * x;
}

Mat SphereHeight::d2(const Vec& x) const {
  const double A = r_ * r_ + x.squaredNorm();
  const double A2 = A * A, A3 = A2 * A;
  const double c = 4.0 * r_ * r_ * r_;
  return (-c / A2) * Mat::Identity(2, 2) +
         (4.0 * c / A3) * (x * x.transpose());
}

std::array<Mat, kMaxDim> SphereHeight::d3(const Vec& x) const {
  const double A = r_ * r_ + x.squaredNorm();
  const double A3 = A * A * A, A4 = A3 * A;
  const double c = 16.0 * r_ * r_ * r_;
  std::array<Mat, kMaxDim> out;
  for (int k = 0; k < 2; ++k) {
    Mat m(2, 2);
    for (int i = 0; i < 2; ++i) {
      for (int j = 0; j < 2; ++j) {
        double v = c * ((i == j ? x[k] : 0.0) + (i == k ? x[j] : 0.0) +
                        (j == k ? x[i] : 0.0)) / A3;
        v -= 6.0 * c * x[i] * x[j] * x[k] / A4;
        m(i, j) = v;
      }
    }
    out[k] = m;
  }
  return out;
}

Vec SphereHeight::grad_ambient(const Manifold& M, const Vec& p) const {
  Vec e3 = Vec::Zero(3);
  e3[2] = 1.0;
  return M.tangent_projector(p) * e3;
}

Mat SphereHeight::hess_op_ambient(const Manifold& M, const Vec& p) const {
  // Hess(a . x) = -(a . x)/r^2 g on the sphere.
  return (-p[2] / (r_ * r_)) * M.tangent_projector(p);
}

Vec FirstCoordinate::d1(const Vec& x) const {
  Vec g = Vec::Zero(x.size());
  g[0] = 1.0;
  return g;
}

std::array<Mat, kMaxDim> FirstCoordinate::d3(const Vec& x) const {
  return zero_d3(static_cast<int>(x.size()));
}

Vec FirstCoordinateSquared::d1(const Vec& x) const {
  Vec g = Vec::Zero(x.size());
  g[0] = 2.0 * x[0];
  return g;
}

Mat FirstCoordinateSquared::d2(const Vec& x) const {
  Mat h = Mat::Zero(x.size(), x.size());
  h(0, 0) = 2.0;
  return h;
}

std::array<Mat, kMaxDim> FirstCoordinateSquared::d3(const Vec& x) const {
  return zero_d3(static_cast<int>(x.size()));
}

Vec SinFirstCoordinate::d1(const Vec& x) const {
  Vec g = Vec::Zero(x.size());
  g[0] = std::cos(x[0]);
  return g;
}

Mat SinFirstCoordinate::d2(const Vec& x) const {
  Mat h = Mat::Zero(x.size(), x.size());
  h(0, 0) = -std::sin(x[0]);
  return h;
}

std::array<Mat, kMaxDim> SinFirstCoordinate::d3(const Vec& x) const {
  auto out = zero_d3(static_cast<int>(x.size()));
  out[0](0, 0) = -std::cos(x[0]);
  return out;
}

std::array<Mat, kMaxDim> ConstantFunction::d3(const Vec& x) const {
  return zero_d3(static_cast<int>(x.size()));
}

std::string LinearCombination::id() const {
  return "lincomb(" + f_->id() + "," + g_->id() + ")";
}

double LinearCombination::value(const Vec& x) const {
  return a_ * f_->value(x) + b_ * g_->value(x);
}

Vec LinearCombination::d1(const Vec& x) const {
  return a_ * f_->d1(x) + b_ * g_->d1(x);
}

Mat LinearCombination::d2(const Vec& x) const {
  return a_ * f_->d2(x) + b_ * g_->d2(x);
}

std::array<Mat, kMaxDim> LinearCombination::d3(const Vec& x) const {
  auto lhs = f_->d3(x);
  const auto rhs = g_->d3(x);
  for (int k = 0; k < x.size(); ++k) lhs[k] = a_ * lhs[k] + b_ * rhs[k];
  return lhs;
}

int LinearCombination::derivative_order() const {
  return std::min(f_->derivative_order(), g_->derivative_order());
}

std::string ConstantPotential::id() const {
  return "const:c=" + std::to_string(c_);
}

std::string CosinePotential::id() const {
  return "cos:eps=" + std::to_string(eps_);
}

}  // namespace hessmc
