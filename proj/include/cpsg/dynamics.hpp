#pragma once

#include <array>
#include <cmath>

#include "cpsg/params.hpp"
#include "cpsg/types.hpp"

namespace cpsg {

/// Logistic threshold map psi(z) = 1 / (1 + exp(-kappa (z - zeta))).
template <typename T>
T logistic(const T& z, const T& kappa, const T& zeta) {
  using std::exp;
  return T(1.0) / (T(1.0) + exp(-kappa * (z - zeta)));
}

/// Complement 1 - psi(z).
template <typename T>
T logistic_c(const T& z, const T& kappa, const T& zeta) {
  return T(1.0) - logistic(z, kappa, zeta);
}

/// Risk-perception amplification of a social target.
template <typename T>
T amplification(const T& theta_hat, const T& theta, const T& x5,
                const T& eta) {
  const T one(1.0);
  const T mixed = x5 * (one - (one - theta) * (one - theta_hat)) +
                  (one - x5) * theta_hat * theta;
  return eta * mixed + (one - eta) * theta_hat;
}

template <typename T>
struct DriftEvaluationT {
  StateT<T> xdot;
  std::array<T, 3> targets;  // fear, information seeking, flexibility
};

using DriftEvaluation = DriftEvaluationT<double>;

namespace detail {

template <typename T>
struct Activations {
  const T& kappa;
  const T& zeta;
  T psi(const T& z) const { return logistic(z, kappa, zeta); }
  T psic(const T& z) const { return logistic_c(z, kappa, zeta); }
};

}  // namespace detail

template <typename T>
T fear_target(const StateT<T>& x, const SignalSnapshot& d,
              const BasicCpsParams<T>& p) {
  const detail::Activations<T> a{p.kappa, p.zeta};
  const auto& w = p.iota_fear;
  return w[0] * a.psic(x[kCooperation]) + w[1] * a.psic(x[kHealth]) +
         w[2] * a.psic(x[kPower]) + w[3] * a.psi(T(d.severity)) +
         w[4] * a.psic(x[kFlexibility]) + w[5] * a.psic(x[kLearning]) +
         w[6] * a.psic(T(d.positivity));
}

/// Open-loop drift f(x, d) including the uncontrolled parts of x1 and x8..x10.
template <typename T>
DriftEvaluationT<T> drift(const StateT<T>& x, const SignalSnapshot& d,
                          const BasicCpsParams<T>& p) {
  const detail::Activations<T> a{p.kappa, p.zeta};
  const T severity(d.severity);
  const T positivity(d.positivity);

  DriftEvaluationT<T> out;
  auto& dx = out.xdot;

  const T fear_hat = fear_target(x, d, p);
  const T info_hat = p.iota_info[0] * a.psi(x[kRiskPerception]) +
                     p.iota_info[1] * a.psi(x[kFakeNews]);
  const T flex_hat = p.iota_flex[0] * a.psi(x[kLearning]);
  out.targets = {fear_hat, info_hat, flex_hat};

  const T& x5 = x[kRiskPerception];
  for (int k = 0; k < 3; ++k) {
    const T gamma = amplification(out.targets[k], x[k], x5, p.eta_amp[k]);
    dx[k] = p.alpha[k] * (gamma - x[k]);
  }

  {
    const auto& w = p.iota_health;
    const T bracket = (w[0] * a.psi(x[kEms]) + w[1] * a.psi(x[kPower]) +
                       w[2] * a.psic(severity)) /
                      T(3.0);
    dx[kHealth] = p.eta_P * a.psic(x[kFear]) * (bracket - x[kHealth]);
  }
  {
    const auto& w = p.iota_risk;
    const T first = (w[0] * a.psic(x[kPower]) + w[1] * a.psi(severity) +
                     w[2] * a.psi(x[kFakeNews])) /
                    T(5.0);
    const T second =
        (w[3] * a.psic(x[kEms]) + w[4] * a.psic(positivity)) / T(5.0);
    const T gate =
        a.psi(x[kFear]) * a.psic(x[kCooperation]) * a.psic(x[kInfoSeeking]);
    dx[kRiskPerception] = p.eta_R * gate * (first + second - x5);
  }
  {
    const auto& w = p.iota_coop;
    const T bracket = (w[0] * a.psic(x[kPower]) + w[1] * a.psi(severity) +
                       w[2] * a.psic(x[kHealth]) + w[3] * a.psi(x[kInfoSeeking])) /
                      T(4.0);
    const T gate = a.psi(x[kFear]) * a.psi(x[kFlexibility]);
    dx[kCooperation] = p.eta_C * gate * (bracket - x[kCooperation]);
  }
  {
    const auto& w = p.iota_learn;
    const T bracket = (w[0] * a.psi(x[kCooperation]) +
                       w[1] * a.psi(x[kInfoSeeking]) + w[2] * a.psic(x[kFakeNews])) /
                      T(3.0);
    dx[kLearning] = p.eta_L * a.psi(x[kFlexibility]) * (bracket - x[kLearning]);
  }

  dx[kPower] = T(p.gamma8) * (T(d.d8) - x[kPower]);
  dx[kEms] = T(p.gamma9) * (T(d.d9) - x[kEms]);
  dx[kFakeNews] = T(p.gamma10) * (T(d.d10) - x[kFakeNews]);
  return out;
}

/// Control input vectors g1 = -b1 e1 - b10 e10, g2 = b8 e8, g3 = b9 e9.
struct InputVectors {
  std::array<StateVector, kNumPlayers> g;
};

InputVectors input_vectors(const CpsParams& params);

/// Outcome of one projected Euler step.
struct StepResult {
  StateVector state;
  /// Components whose pre-projection value left [0,1].
  std::array<bool, kNumStates> clamped{};
  /// A nominally forward-invariant component (x2..x7) overshot the box by
  /// more than 1e-9 and had to be clamped.
  bool invariance_violated = false;
};

/// x+ = proj(x + dt (f(x,d) + sum_j g_j u_j)).
StepResult controlled_step(const StateVector& x, const Control& u,
                           const SignalSnapshot& d, const CpsParams& params,
                           double dt);

/// One sample step of length dt integrated with `substeps` Euler sub-steps,
/// control held constant. Clamp flags are OR-ed across sub-steps.
StepResult advance(const StateVector& x, const Control& u,
                   const SignalSnapshot& d, const CpsParams& params, double dt,
                   int substeps);

}  // namespace cpsg
