#include "hessmc/geometry/models.hpp"

#include <cmath>

namespace hessmc {

// ---------------------------------------------------------------------------
// ConformalFactor

double ConformalFactor::lambda(const Vec& x) const {
  const double A = r * r + sigma * x.squaredNorm();
  return 2.0 * r * r / A;
}

Vec ConformalFactor::d1(const Vec& x) const {
  const double A = r * r + sigma * x.squaredNorm();
  return (-2.0 * sigma / A) * x;
}

Mat ConformalFactor::d2(const Vec& x) const {
  const int n = static_cast<int>(x.size());
  const double A = r * r + sigma * x.squaredNorm();
  Mat out = (-2.0 * sigma / A) * Mat::Identity(n, n);
  out += (4.0 / (A * A)) * (x * x.transpose());
  return out;
}

std::array<Mat, kMaxDim> ConformalFactor::d3(const Vec& x) const {
  const int n = static_cast<int>(x.size());
  const double A = r * r + sigma * x.squaredNorm();
  const double A2 = A * A, A3 = A2 * A;
  std::array<Mat, kMaxDim> out;
  for (int k = 0; k < n; ++k) {
    Mat m = Mat::Zero(n, n);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        double v = 4.0 * ((i == j ? x[k] : 0.0) + (i == k ? x[j] : 0.0) +
                          (j == k ? x[i] : 0.0)) / A2;
        v -= 16.0 * sigma * x[i] * x[j] * x[k] / A3;
        m(i, j) = v;
      }
    }
    out[k] = m;
  }
  return out;
}

Mat ConformalFactor::metric(const Vec& x) const {
  const int n = static_cast<int>(x.size());
  const double lam = lambda(x);
  return (lam * lam) * Mat::Identity(n, n);
}

Christoffel ConformalFactor::christoffel(const Vec& x) const {
  const int n = static_cast<int>(x.size());
  const Vec p = d1(x);
  Christoffel out;
  out.n = n;
  // Gamma^i_{jk} = delta_ij phi_k + delta_ik phi_j - delta_jk phi_i
  for (int i = 0; i < n; ++i) {
    Mat m = Mat::Zero(n, n);
    for (int j = 0; j < n; ++j) {
      for (int k = 0; k < n; ++k) {
        m(j, k) = (i == j ? p[k] : 0.0) + (i == k ? p[j] : 0.0) -
                  (j == k ? p[i] : 0.0);
      }
    }
    out.G[i] = m;
  }
  return out;
}

ChristoffelJet ConformalFactor::christoffel_jet(const Vec& x) const {
  const int n = static_cast<int>(x.size());
  const Mat pp = d2(x);
  ChristoffelJet out;
  out.gamma = christoffel(x);
  for (int l = 0; l < n; ++l) {
    Christoffel dG;
    dG.n = n;
    for (int i = 0; i < n; ++i) {
      Mat m = Mat::Zero(n, n);
      for (int j = 0; j < n; ++j) {
        for (int k = 0; k < n; ++k) {
          m(j, k) = (i == j ? pp(k, l) : 0.0) + (i == k ? pp(j, l) : 0.0) -
                    (j == k ? pp(i, l) : 0.0);
        }
      }
      dG.G[i] = m;
    }
    out.d[l] = dG;
  }
  return out;
}

Vec space_form_riemann(double kappa, const Mat& g, const Vec& u, const Vec& v,
                       const Vec& w) {
  if (kappa == 0.0) return Vec::Zero(u.size());
  const Vec gw = g * w;
  return kappa * (v.dot(gw) * u - u.dot(gw) * v);
}

// ---------------------------------------------------------------------------
// EuclideanSpace

EuclideanSpace::EuclideanSpace(int n) : n_(n) {
  if (n < 1 || n > kMaxDim) throw UsageError("euclidean: dimension must be 1..3");
}

std::string EuclideanSpace::name() const {
  return "euclidean:" + std::to_string(n_);
}

Mat EuclideanSpace::metric(const Vec& x) const {
  return Mat::Identity(n_, n_);
}

Christoffel EuclideanSpace::christoffel(const Vec& x) const {
  Christoffel out;
  out.n = n_;
  for (int i = 0; i < n_; ++i) out.G[i] = Mat::Zero(n_, n_);
  return out;
}

ChristoffelJet EuclideanSpace::christoffel_jet(const Vec& x) const {
  ChristoffelJet out;
  out.gamma = christoffel(x);
  for (int l = 0; l < n_; ++l) out.d[l] = out.gamma;
  return out;
}

Vec EuclideanSpace::riemann(const Vec& x, const Vec& u, const Vec& v,
                            const Vec& w) const {
  return Vec::Zero(n_);
}

Mat EuclideanSpace::ricci_sharp(const Vec& x) const {
  return Mat::Zero(n_, n_);
}

Mat EuclideanSpace::nabla_ricci_sharp(const Vec& x, const Vec& a) const {
  return Mat::Zero(n_, n_);
}

Mat EuclideanSpace::embed_jacobian(const Vec& x) const {
  return Mat::Identity(n_, n_);
}

Mat EuclideanSpace::tangent_projector(const Vec& p) const {
  return Mat::Identity(n_, n_);
}

Mat EuclideanSpace::ricci_sharp_ambient(const Vec& p) const {
  return Mat::Zero(n_, n_);
}

// ---------------------------------------------------------------------------
// SphereModel

SphereModel::SphereModel(double radius) : r_(radius) {
  if (!(radius > 0.0)) throw UsageError("sphere: radius must be positive");
  conf_ = ConformalFactor{radius, +1.0};
}

std::string SphereModel::name() const {
  return "sphere:r=" + std::to_string(r_);
}

Mat SphereModel::metric(const Vec& x) const { return conf_.metric(x); }

Christoffel SphereModel::christoffel(const Vec& x) const {
  return conf_.christoffel(x);
}

ChristoffelJet SphereModel::christoffel_jet(const Vec& x) const {
  return conf_.christoffel_jet(x);
}

bool SphereModel::in_domain(const Vec& x) const {
  // Chart covers everything but the south pole; guard against the
  // numerically degenerate far field.
  return x.norm() < 1e6 * r_;
}

Vec SphereModel::riemann(const Vec& x, const Vec& u, const Vec& v,
                         const Vec& w) const {
  return space_form_riemann(1.0 / (r_ * r_), metric(x), u, v, w);
}

Mat SphereModel::ricci_sharp(const Vec& x) const {
  return (1.0 / (r_ * r_)) * Mat::Identity(2, 2);  // (n-1)/r^2 with n = 2
}

Mat SphereModel::nabla_ricci_sharp(const Vec& x, const Vec& a) const {
  return Mat::Zero(2, 2);
}

double SphereModel::norm_R_inf() const { return 1.0 / (r_ * r_); }

double SphereModel::ricci_lower_K() const {
  // Covers the catalog fields: h = 0 and the ambient height, whose Hessian
  // eigenvalues lie in [-1/r, 1/r].
  return std::max(0.0, 2.0 / r_ - 1.0 / (r_ * r_));
}

std::optional<double> SphereModel::space_form_curvature() const {
  return 1.0 / (r_ * r_);
}

Vec SphereModel::embed(const Vec& x) const {
  const double s = x.squaredNorm();
  const double A = r_ * r_ + s;
  Vec p(3);
  p[0] = 2.0 * r_ * r_ * x[0] / A;
  p[1] = 2.0 * r_ * r_ * x[1] / A;
  p[2] = r_ * (r_ * r_ - s) / A;
  return p;
}

Vec SphereModel::chart_of(const Vec& p) const {
  const double denom = r_ + p[2];
  if (std::abs(denom) < 1e-12 * r_) {
    throw UsageError("sphere chart: point at the south pole");
  }
  Vec x(2);
  x[0] = r_ * p[0] / denom;
  x[1] = r_ * p[1] / denom;
  return x;
}

Mat SphereModel::embed_jacobian(const Vec& x) const {
  const double s = x.squaredNorm();
  const double A = r_ * r_ + s;
  const double A2 = A * A;
  Mat J(3, 2);
  for (int j = 0; j < 2; ++j) {
    for (int i = 0; i < 2; ++i) {
      J(i, j) = 2.0 * r_ * r_ * ((i == j ? 1.0 : 0.0) / A -
                                 2.0 * x[i] * x[j] / A2);
    }
    J(2, j) = -4.0 * r_ * r_ * r_ * x[j] / A2;
  }
  return J;
}

Mat SphereModel::tangent_projector(const Vec& p) const {
  return Mat::Identity(3, 3) - (p * p.transpose()) / (r_ * r_);
}

Vec SphereModel::retract(const Vec& p) const { return (r_ / p.norm()) * p; }

Mat SphereModel::ricci_sharp_ambient(const Vec& p) const {
  return (1.0 / (r_ * r_)) * tangent_projector(p);
}

Vec SphereModel::exp_map(const Vec& p, const Vec& w) const {
  const double wn = w.norm();
  if (wn == 0.0) return p;
  const double theta = wn / r_;
  return std::cos(theta) * p + (std::sin(theta) * r_ / wn) * w;
}

Vec SphereModel::parallel_transport(const Vec& p, const Vec& q,
                                    const Vec& w) const {
  const Vec a = p / r_, b = q / r_;
  const double c = a.dot(b);
  // Transport along the minimizing geodesic (undefined for antipodes).
  return w - (b.dot(w) / (1.0 + c)) * (a + b);
}

double SphereModel::geodesic_distance(const Vec& p, const Vec& q) const {
  const double c = std::clamp(p.dot(q) / (r_ * r_), -1.0, 1.0);
  return r_ * std::acos(c);
}

// ---------------------------------------------------------------------------
// HyperbolicPlane

HyperbolicPlane::HyperbolicPlane(double radius) : r_(radius) {
  if (!(radius > 0.0)) throw UsageError("hyperbolic: radius must be positive");
  conf_ = ConformalFactor{radius, -1.0};
}

std::string HyperbolicPlane::name() const {
  return "hyperbolic:r=" + std::to_string(r_);
}

Mat HyperbolicPlane::metric(const Vec& x) const { return conf_.metric(x); }

Christoffel HyperbolicPlane::christoffel(const Vec& x) const {
  return conf_.christoffel(x);
}

ChristoffelJet HyperbolicPlane::christoffel_jet(const Vec& x) const {
  return conf_.christoffel_jet(x);
}

bool HyperbolicPlane::in_domain(const Vec& x) const {
  return r_ - x.norm() > 1e-6;
}

Vec HyperbolicPlane::riemann(const Vec& x, const Vec& u, const Vec& v,
                             const Vec& w) const {
  return space_form_riemann(-1.0 / (r_ * r_), metric(x), u, v, w);
}

Mat HyperbolicPlane::ricci_sharp(const Vec& x) const {
  return (-1.0 / (r_ * r_)) * Mat::Identity(2, 2);
}

Mat HyperbolicPlane::nabla_ricci_sharp(const Vec& x, const Vec& a) const {
  return Mat::Zero(2, 2);
}

double HyperbolicPlane::norm_R_inf() const { return 1.0 / (r_ * r_); }

double HyperbolicPlane::ricci_lower_K() const { return 1.0 / (r_ * r_); }

std::optional<double> HyperbolicPlane::space_form_curvature() const {
  return -1.0 / (r_ * r_);
}

}  // namespace hessmc
