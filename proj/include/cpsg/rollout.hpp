#pragma once

#include <array>
#include <functional>
#include <vector>

#include "cpsg/game.hpp"
#include "cpsg/scenario.hpp"

namespace cpsg {

/// State-feedback law returning the unsaturated control at (x, step).
using ControlLaw = std::function<Control(const StateVector& x, int step)>;

/// A closed-loop run over a scenario horizon.
struct Trajectory {
  double dt = 1.0;
  std::vector<StateVector> states;  // horizon + 1
  std::vector<Control> raw;         // horizon, before saturation
  std::vector<Control> controls;    // horizon, as applied
  std::vector<std::array<bool, kNumStates>> clamped;  // horizon
  int invariance_violations = 0;

  int steps() const { return static_cast<int>(controls.size()); }
};

/// Saturates each active player's raw control to [0, u_max]; inactive
/// players get 0.
Control saturate_controls(const Control& raw, const Players& players);

/// Simulates the scenario horizon under `law`.
Trajectory rollout(const Scenario& scenario, const Game& game, const ControlLaw& law);

/// u = 0 everywhere.
Trajectory open_loop(const Scenario& scenario, const Game& game);

/// J_i = sum_t running_cost_i(x_t, u_t) dt; zero for inactive players.
std::array<double, kNumPlayers> player_costs(const Trajectory& traj, const Players& players);

}  // namespace cpsg
