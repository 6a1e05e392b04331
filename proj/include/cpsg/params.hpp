#pragma once

#include <array>
#include <string>

#include <nlohmann/json.hpp>

#include "cpsg/types.hpp"

namespace cpsg {

/// Parameters of the open-loop drift and the control channels.
///
/// The social-layer block (logistic, rates, amplification, target weights) is
/// templated on the scalar type so the calibration can differentiate through
/// the drift. Response rates and control gains are never fitted and stay
/// plain doubles.
template <typename T>
struct BasicCpsParams {
  T kappa = T(10.0);
  T zeta = T(0.5);
  std::array<T, 3> alpha{T(1.0), T(1.0), T(1.0)};        // x1..x3 diffusion
  std::array<T, 3> eta_amp{T(0.5), T(0.5), T(0.5)};      // x1..x3 amplification
  T eta_P = T(1.0);
  T eta_R = T(1.0);
  T eta_C = T(1.0);
  T eta_L = T(1.0);

  // Target weight groups. Each group is a convex weight vector.
  std::array<T, 7> iota_fear{};    // psi^c(x6) psi^c(x4) psi^c(x8) psi(P_S) psi^c(x3) psi^c(x7) psi^c(C+)
  std::array<T, 2> iota_info{};    // psi(x5) psi(x10)
  std::array<T, 1> iota_flex{};    // psi(x7)
  std::array<T, 3> iota_health{};  // psi(x9) psi(x8) psi^c(P_S)
  std::array<T, 5> iota_risk{};    // psi^c(x8) psi(P_S) psi(x10) psi^c(x9) psi^c(C+)
  std::array<T, 4> iota_coop{};    // psi^c(x8) psi(P_S) psi^c(x4) psi(x2)
  std::array<T, 3> iota_learn{};   // psi(x6) psi(x2) psi^c(x10)

  double gamma8 = 5.0;
  double gamma9 = 5.0;
  double gamma10 = 5.0;
  double beta1 = 0.5;
  double beta8 = 0.5;
  double beta9 = 0.5;
  double beta10 = 0.3;
};

using CpsParams = BasicCpsParams<double>;

/// Parameters with uniform target weights and the documented neutral values
/// (kappa 10, zeta 0.5, unit rates, half amplification).
CpsParams neutral_params();

/// Throws ConfigError naming the first violated invariant.
void validate(const CpsParams& params);

nlohmann::json to_json(const CpsParams& params);
CpsParams params_from_json(const nlohmann::json& j);
CpsParams load_params(const std::string& path);
void save_params(const CpsParams& params, const std::string& path);

}  // namespace cpsg
