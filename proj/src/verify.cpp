#include "hessmc/geometry/verify.hpp"

#include <cmath>
#include <random>

namespace hessmc {

std::vector<Vec> sample_chart_points(const Manifold& M, int count,
                                     std::uint64_t seed) {
  const int n = M.dim();
  const double radius = M.chart_sample_radius();
  std::mt19937_64 gen(seed);
  std::uniform_real_distribution<double> unif(-radius, radius);
  std::vector<Vec> points;
  points.reserve(count);
  while (static_cast<int>(points.size()) < count) {
    Vec x(n);
    for (int i = 0; i < n; ++i) x[i] = unif(gen);
    if (x.norm() <= radius && M.in_domain(x)) points.push_back(x);
  }
  return points;
}

Christoffel christoffel_from_metric_fd(const Manifold& M, const Vec& x,
                                       double fd_step) {
  const int n = M.dim();
  // dg[k] = d_k g by central differences.
  std::array<Mat, kMaxDim> dg;
  for (int k = 0; k < n; ++k) {
    Vec xp = x, xm = x;
    xp[k] += fd_step;
    xm[k] -= fd_step;
    dg[k] = (M.metric(xp) - M.metric(xm)) / (2.0 * fd_step);
  }
  const Mat ginv = M.metric(x).inverse();
  Christoffel out;
  out.n = n;
  for (int i = 0; i < n; ++i) out.G[i] = Mat::Zero(n, n);
  for (int j = 0; j < n; ++j) {
    for (int k = 0; k < n; ++k) {
      for (int i = 0; i < n; ++i) {
        double s = 0.0;
        for (int l = 0; l < n; ++l) {
          s += ginv(i, l) * (dg[j](l, k) + dg[k](l, j) - dg[l](j, k));
        }
        out.G[i](j, k) = 0.5 * s;
      }
    }
  }
  return out;
}

ConnectionReport verify_connection(const Manifold& M,
                                   const std::vector<Vec>& points,
                                   double fd_step, double tolerance) {
  const int n = M.dim();
  ConnectionReport report;
  report.tolerance = tolerance;
  for (const Vec& x : points) {
    const Christoffel exact = M.christoffel(x);
    const Christoffel approx = christoffel_from_metric_fd(M, x, fd_step);
    double dev = 0.0;
    for (int i = 0; i < n; ++i) {
      dev = std::max(dev, (exact.G[i] - approx.G[i]).cwiseAbs().maxCoeff());
    }

    // nabla_k g_ij = d_k g_ij - G^l_{ki} g_lj - G^l_{kj} g_il must vanish.
    const Mat g = M.metric(x);
    double compat = 0.0;
    for (int k = 0; k < n; ++k) {
      Vec xp = x, xm = x;
      xp[k] += fd_step;
      xm[k] -= fd_step;
      const Mat nabla_g = (M.metric(xp) - M.metric(xm)) / (2.0 * fd_step);
      for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
          double v = nabla_g(i, j);
          for (int l = 0; l < n; ++l) {
            v -= exact.G[l](k, i) * g(l, j) + exact.G[l](k, j) * g(i, l);
          }
          compat = std::max(compat, std::abs(v));
        }
      }
    }

    if (std::max(dev, compat) >
        std::max(report.max_dev_christoffel, report.max_dev_compatibility)) {
      report.worst_point = x;
    }
    report.max_dev_christoffel = std::max(report.max_dev_christoffel, dev);
    report.max_dev_compatibility = std::max(report.max_dev_compatibility, compat);
  }
  report.pass = report.max_dev_christoffel <= tolerance &&
                report.max_dev_compatibility <= tolerance;
  return report;
}

ChristoffelJet christoffel_jet_fd(const Manifold& M, const Vec& x,
                                  double fd_step) {
  const int n = M.dim();
  ChristoffelJet out;
  out.gamma = M.christoffel(x);
  for (int l = 0; l < n; ++l) {
    Vec xp = x, xm = x;
    xp[l] += fd_step;
    xm[l] -= fd_step;
    const Christoffel p = M.christoffel(xp);
    const Christoffel m = M.christoffel(xm);
    Christoffel d;
    d.n = n;
    for (int i = 0; i < n; ++i) d.G[i] = (p.G[i] - m.G[i]) / (2.0 * fd_step);
    out.d[l] = d;
  }
  return out;
}

Vec riemann_fd(const Manifold& M, const Vec& x, const Vec& u, const Vec& v,
               const Vec& w, double fd_step) {
  return riemann_from_jet(christoffel_jet_fd(M, x, fd_step), u, v, w);
}

Mat covariant_fd_nabla_ricci_sharp(const Manifold& M, const Vec& x,
                                   const Vec& a, double fd_step) {
  const int n = M.dim();
  const double anorm = a.norm();
  if (anorm == 0.0) return Mat::Zero(n, n);
  const Vec dir = a / anorm;
  const Mat plus = M.ricci_sharp(x + fd_step * dir);
  const Mat minus = M.ricci_sharp(x - fd_step * dir);
  Mat out = anorm * (plus - minus) / (2.0 * fd_step);
  const Christoffel G = M.christoffel(x);
  const Mat T = M.ricci_sharp(x);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      double corr = 0.0;
      for (int k = 0; k < n; ++k) {
        for (int m = 0; m < n; ++m) {
          corr += a[k] * (G.G[i](k, m) * T(m, j) - G.G[m](k, j) * T(i, m));
        }
      }
      out(i, j) += corr;
    }
  }
  return out;
}

}  // namespace hessmc
