#include "cpsg/rollout.hpp"

namespace cpsg {

Control saturate_controls(const Control& raw, const Players& players) {
  Control u;
  for (int i = 0; i < kNumPlayers; ++i)
    u[i] = players[i].active ? saturate(raw[i], players[i].u_max) : 0.0;
  return u;
}

Trajectory rollout(const Scenario& scenario, const Game& game, const ControlLaw& law) {
  Trajectory traj;
  traj.dt = scenario.dt;
  const auto steps = static_cast<std::size_t>(scenario.horizon);
  traj.states.reserve(steps + 1);
  traj.raw.reserve(steps);
  traj.controls.reserve(steps);
  traj.clamped.reserve(steps);

  StateVector x = scenario.x0;
  traj.states.push_back(x);
  for (int t = 0; t < scenario.horizon; ++t) {
    const Control raw = law(x, t);
    const Control u = saturate_controls(raw, game.players);
    const StepResult r =
        advance(x, u, snapshot_at(scenario, t), game.params, scenario.dt, scenario.substeps);
    x = r.state;
    traj.raw.push_back(raw);
    traj.controls.push_back(u);
    traj.clamped.push_back(r.clamped);
    if (r.invariance_violated) ++traj.invariance_violations;
    traj.states.push_back(x);
  }
  return traj;
}

Trajectory open_loop(const Scenario& scenario, const Game& game) {
  return rollout(scenario, game, [](const StateVector&, int) { return Control::Zero().eval(); });
}

std::array<double, kNumPlayers> player_costs(const Trajectory& traj, const Players& players) {
  std::array<double, kNumPlayers> j{};
  for (int t = 0; t < traj.steps(); ++t) {
    for (int i = 0; i < kNumPlayers; ++i) {
      if (players[i].active) j[i] += running_cost(players[i], traj.states[t], traj.controls[t]) * traj.dt;
    }
  }
  return j;
}

}  // namespace cpsg
