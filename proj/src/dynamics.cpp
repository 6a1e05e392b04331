#include "cpsg/dynamics.hpp"

#include <algorithm>

namespace cpsg {

InputVectors input_vectors(const CpsParams& params) {
  InputVectors in;
  for (auto& g : in.g) g.setZero();
  in.g[0][kFear] = -params.beta1;
  in.g[0][kFakeNews] = -params.beta10;
  in.g[1][kPower] = params.beta8;
  in.g[2][kEms] = params.beta9;
  return in;
}

StepResult controlled_step(const StateVector& x, const Control& u,
                           const SignalSnapshot& d, const CpsParams& params,
                           double dt) {
  const DriftEvaluation f = drift(x, d, params);
  StateVector rate = f.xdot;
  rate[kFear] -= params.beta1 * u[0];
  rate[kFakeNews] -= params.beta10 * u[0];
  rate[kPower] += params.beta8 * u[1];
  rate[kEms] += params.beta9 * u[2];

  StepResult out;
  out.state = x + dt * rate;
  for (int k = 0; k < kNumStates; ++k) {
    const double v = out.state[k];
    if (v < 0.0 || v > 1.0) {
      out.clamped[k] = true;
      const bool invariant = k >= kInfoSeeking && k <= kLearning;
      if (invariant && (v < -1e-9 || v > 1.0 + 1e-9)) out.invariance_violated = true;
      out.state[k] = std::clamp(v, 0.0, 1.0);
    }
  }
  return out;
}

StepResult advance(const StateVector& x, const Control& u,
                   const SignalSnapshot& d, const CpsParams& params, double dt,
                   int substeps) {
  if (substeps < 1) throw ConfigError("substeps must be >= 1");
  const double h = dt / static_cast<double>(substeps);
  StepResult acc;
  acc.state = x;
  for (int s = 0; s < substeps; ++s) {
    const StepResult r = controlled_step(acc.state, u, d, params, h);
    acc.state = r.state;
    for (int k = 0; k < kNumStates; ++k) acc.clamped[k] = acc.clamped[k] || r.clamped[k];
    acc.invariance_violated = acc.invariance_violated || r.invariance_violated;
  }
  return acc;
}

}  // namespace cpsg
