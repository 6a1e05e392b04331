#pragma once

#include <Eigen/Dense>

#include "cpsg/types.hpp"

namespace cpsg {

/// Constant, linear and quadratic monomials of an N-dimensional state.
///
/// Feature order is [1, x_1..x_N, x_1 x_1, x_1 x_2, ..., x_N x_N] with the
/// quadratic pairs (j, k), j <= k, in lexicographic order.
template <int N>
class QuadraticBasis {
 public:
  static constexpr int kDim = N;
  static constexpr int kSize = 1 + N + N * (N + 1) / 2;

  using Point = Eigen::Matrix<double, N, 1>;
  using Features = Eigen::Matrix<double, kSize, 1>;
  using Jacobian = Eigen::Matrix<double, N, kSize>;

  static Features features(const Point& x) {
    Features phi;
    phi[0] = 1.0;
    for (int j = 0; j < N; ++j) phi[1 + j] = x[j];
    int idx = 1 + N;
    for (int j = 0; j < N; ++j)
      for (int k = j; k < N; ++k) phi[idx++] = x[j] * x[k];
    return phi;
  }

  /// d phi / d x laid out as N x p (column m is the gradient of feature m).
  static Jacobian jacobian(const Point& x) {
    Jacobian jac = Jacobian::Zero();
    for (int j = 0; j < N; ++j) jac(j, 1 + j) = 1.0;
    int idx = 1 + N;
    for (int j = 0; j < N; ++j) {
      for (int k = j; k < N; ++k) {
        jac(j, idx) += x[k];
        jac(k, idx) += x[j];
        ++idx;
      }
    }
    return jac;
  }

  /// grad phi(x) * w, the gradient of w^T phi at x.
  static Point gradient(const Point& x, const Features& w) {
    Point grad;
    for (int j = 0; j < N; ++j) grad[j] = w[1 + j];
    int idx = 1 + N;
    for (int j = 0; j < N; ++j) {
      for (int k = j; k < N; ++k) {
        grad[j] += w[idx] * x[k];
        grad[k] += w[idx] * x[j];
        ++idx;
      }
    }
    return grad;
  }

  /// grad phi(x)^T v, the directional derivative of every feature along v.
  static Features directional(const Point& x, const Point& v) {
    Features out;
    out[0] = 0.0;
    for (int j = 0; j < N; ++j) out[1 + j] = v[j];
    int idx = 1 + N;
    for (int j = 0; j < N; ++j)
      for (int k = j; k < N; ++k) out[idx++] = x[j] * v[k] + x[k] * v[j];
    return out;
  }
};

using Basis = QuadraticBasis<kNumStates>;
using FeatureVector = Basis::Features;

}  // namespace cpsg
