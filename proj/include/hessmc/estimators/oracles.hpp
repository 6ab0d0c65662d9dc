#pragma once

#include <cmath>

namespace hessmc::oracle {

// Ornstein-Uhlenbeck dx = -x dt + dB (h = -|x|^2/2 on R):
// x_t ~ N(x0 e^{-t}, (1 - e^{-2t})/2).
inline double ou_mean(double x0, double t) { return x0 * std::exp(-t); }
inline double ou_variance(double t) { return 0.5 * (1.0 - std::exp(-2.0 * t)); }

// E sin(x_t) for the OU law (Gaussian characteristic function).
inline double ou_expectation_sin(double x0, double t) {
  return std::sin(ou_mean(x0, t)) * std::exp(-0.5 * ou_variance(t));
}

// d/dx0 E sin(x_t) = cos(x0 e^{-t}) e^{-t} e^{-(1 - e^{-2t})/4}.
inline double ou_gradient_sin(double x0, double t) {
  return std::cos(ou_mean(x0, t)) * std::exp(-t) *
         std::exp(-0.5 * ou_variance(t));
}

// d^2/dx0^2 E sin(x_t) = -sin(x0 e^{-t}) e^{-2t} e^{-(1 - e^{-2t})/4}.
inline double ou_hessian_sin(double x0, double t) {
  return -std::sin(ou_mean(x0, t)) * std::exp(-2.0 * t) *
         std::exp(-0.5 * ou_variance(t));
}

// Ambient linear functions on S^2(r) are Laplace eigenfunctions:
// (1/2) Delta f = -(1/r^2) f, so P_t f = e^{-t/r^2} f.
inline double sphere_eigen_decay(double t, double r = 1.0) {
  return std::exp(-t / (r * r));
}

// Brownian motion on R^1: E (x0 + B_t)^2 = x0^2 + t.
inline double bm_square_mean(double x0, double t) { return x0 * x0 + t; }

// Short-time expansion of E d^2(x0, x_t) on S^2(1): 2t - (2/3) t^2 + O(t^3).
inline double sphere_mean_square_distance(double t) {
  return 2.0 * t - (2.0 / 3.0) * t * t;
}

}  // namespace hessmc::oracle
