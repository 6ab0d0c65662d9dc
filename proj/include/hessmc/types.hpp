#pragma once

#include <Eigen/Dense>

#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace hessmc {

// Manifold and ambient dimensions are capped at 3, so the small dense types
// are dynamically sized but stack-allocated.
inline constexpr int kMaxDim = 3;

using Scalar = double;
using Vec = Eigen::Matrix<Scalar, Eigen::Dynamic, 1, 0, kMaxDim, 1>;
using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic, 0, kMaxDim, kMaxDim>;

// Unbounded types for statistics, prefix arrays and harness-level tables.
using VecX = Eigen::VectorXd;
using MatX = Eigen::MatrixXd;

inline constexpr const char* kVersion = "0.1.0";

// Christoffel symbols at a point: G[i](j,k) = Gamma^i_{jk}.
struct Christoffel {
  int n = 0;
  std::array<Mat, kMaxDim> G;
};

// First partials of the Christoffel symbols: d[l] holds d_l Gamma.
struct ChristoffelJet {
  Christoffel gamma;
  std::array<Christoffel, kMaxDim> d;
};

class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class CapabilityError : public UsageError {
 public:
  using UsageError::UsageError;
};

class EstimationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class VerificationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace hessmc
