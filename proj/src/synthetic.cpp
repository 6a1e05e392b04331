#include "cpsg/synthetic.hpp"

#include <algorithm>
#include <cmath>

#include "cpsg/game.hpp"
#include "cpsg/rng.hpp"
#include "cpsg/rollout.hpp"

namespace cpsg {
namespace {

double bump(double t, double center, double width) {
  const double z = (t - center) / width;
  return std::exp(-z * z);
}

void attach_observed(Scenario& sc, const CpsParams& params, double noise) {
  const Game game{params, make_players(params)};
  Trajectory traj = open_loop(sc, game);
  Rng rng(stream_seed(sc.seed, 0x0B5));
  for (std::size_t t = 1; t < traj.states.size(); ++t) {
    for (int k = 0; k < kNumStates; ++k)
      traj.states[t][k] = std::clamp(traj.states[t][k] + noise * rng.normal(), 0.0, 1.0);
  }
  sc.observed = std::move(traj.states);
}

}  // namespace

CpsParams reference_params() {
  CpsParams p;
  p.kappa = 8.0;
  p.zeta = 0.45;
  p.alpha = {0.12, 0.35, 0.3};
  p.eta_amp = {0.85, 0.4, 0.4};
  p.eta_P = 0.4;
  p.eta_R = 0.8;
  p.eta_C = 0.5;
  p.eta_L = 0.4;
  p.iota_fear = {0.12, 0.10, 0.18, 0.25, 0.10, 0.10, 0.15};
  p.iota_info = {0.6, 0.4};
  p.iota_flex = {1.0};
  p.iota_health = {0.40, 0.35, 0.25};
  p.iota_risk = {0.25, 0.30, 0.20, 0.15, 0.10};
  p.iota_coop = {0.25, 0.30, 0.20, 0.25};
  p.iota_learn = {0.40, 0.35, 0.25};
  return p;
}

Scenario make_harvey_synth(const CpsParams& params, double noise) {
  Scenario sc;
  sc.name = "harvey_synth";
  sc.dt = 1.0;
  sc.horizon = 17;
  sc.window_len = 6;
  sc.substeps = 10;
  sc.seed = 42;
  const int n = sc.horizon + 1;
  for (int t = 0; t < n; ++t) {
    sc.signals.severity.push_back(0.15 + 0.75 * bump(t, 4.0, 4.0));
    sc.signals.positivity.push_back(0.2 + 0.5 * t / (n - 1.0));
    sc.signals.d8.push_back(0.95 - 0.30 * bump(t, 7.0, 4.0));
    sc.signals.d9.push_back(0.60 - 0.15 * bump(t, 6.0, 5.0) + 0.15 * t / (n - 1.0));
    sc.signals.d10.push_back(0.20 + 0.40 * bump(t, 5.0, 5.0));
  }
  sc.x0 << 0.62, 0.55, 0.40, 0.65, 0.30, 0.35, 0.30, sc.signals.d8[0], sc.signals.d9[0],
      sc.signals.d10[0];
  attach_observed(sc, params, noise);
  return sc;
}

Scenario make_irma_synth(const CpsParams& params, double noise) {
  Scenario sc;
  sc.name = "irma_synth";
  sc.dt = 1.0;
  sc.horizon = 12;
  sc.window_len = 6;
  sc.substeps = 10;
  sc.seed = 42;
  const int n = sc.horizon + 1;
  for (int t = 0; t < n; ++t) {
    sc.signals.severity.push_back(0.25 + 0.70 * bump(t, 3.0, 3.5));
    sc.signals.positivity.push_back(0.15 + 0.45 * t / (n - 1.0));
    const double drop = (t == 10 || t == 11) ? 0.45 : 0.0;
    sc.signals.d8.push_back(0.92 - 0.15 * bump(t, 4.0, 3.0) - drop);
    sc.signals.d9.push_back(0.55 - 0.20 * bump(t, 5.0, 4.0));
    sc.signals.d10.push_back(0.30 + 0.45 * bump(t, 3.0, 4.0));
  }
  sc.x0 << 0.90, 0.65, 0.35, 0.55, 0.40, 0.30, 0.25, sc.signals.d8[0], sc.signals.d9[0],
      sc.signals.d10[0];
  attach_observed(sc, params, noise);
  return sc;
}

Scenario make_calibration_probe(const CpsParams& params) {
  Scenario sc;
  sc.name = "calibration_probe";
  sc.dt = 1.0;
  sc.horizon = 17;
  sc.window_len = 1;
  sc.substeps = 1;
  sc.seed = 42;
  const int n = sc.horizon + 1;
  for (int t = 0; t < n; ++t) {
    sc.signals.severity.push_back(0.1 + 0.8 * bump(t, 5.0, 4.0));
    sc.signals.positivity.push_back(0.8 - 0.6 * bump(t, 8.0, 5.0));
    sc.signals.d8.push_back(0.7);
    sc.signals.d9.push_back(0.55);
    sc.signals.d10.push_back(0.35);
  }
  sc.x0 << 0.62, 0.55, 0.40, 0.65, 0.30, 0.35, 0.30, 0.7, 0.55, 0.35;
  attach_observed(sc, params, 0.0);
  return sc;
}

}  // namespace cpsg
