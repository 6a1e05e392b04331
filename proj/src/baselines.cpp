#include "cpsg/baselines.hpp"

#include <algorithm>
#include <limits>

#include "parallel.hpp"

namespace cpsg {
namespace {

Eigen::Vector3d grid_point(const std::vector<double>& grid, int k) {
  const int n = static_cast<int>(grid.size());
  return {grid[k / (n * n)], grid[(k / n) % n], grid[k % n]};
}

template <typename Loop>
TuneResult tune(const Scenario& scenario, const Game& game, std::vector<double> grid, Loop&& loop) {
  if (grid.empty()) throw ConfigError("gain grid must be nonempty");
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  const int n = static_cast<int>(grid.size());
  const int total = n * n * n;

  std::vector<double> costs(total);
  loop(total, [&](int k) {
    const Trajectory traj = rollout(scenario, game, proportional_controller(grid_point(grid, k)));
    const auto j = player_costs(traj, game.players);
    costs[k] = j[0] + j[1] + j[2];
  });

  // grid is sorted, so index order is lexicographic order of K
  TuneResult best;
  best.total_cost = std::numeric_limits<double>::infinity();
  for (int k = 0; k < total; ++k) {
    if (costs[k] < best.total_cost) {
      best.total_cost = costs[k];
      best.gains = grid_point(grid, k);
    }
  }
  best.evaluated = total;
  return best;
}

}  // namespace

ControlLaw constant_max_controller(const Players& players) {
  Control u;
  for (int i = 0; i < kNumPlayers; ++i) u[i] = players[i].active ? players[i].u_max : 0.0;
  return [u](const StateVector&, int) { return u; };
}

ControlLaw proportional_controller(const Eigen::Vector3d& gains) {
  if ((gains.array() < 0.0).any()) throw ConfigError("proportional gains must be >= 0");
  return [gains](const StateVector& x, int) {
    return Control(gains[0] * x[kFear], gains[1] * (1.0 - x[kPower]), gains[2] * (1.0 - x[kEms]));
  };
}

std::vector<double> default_gain_grid() {
  std::vector<double> g;
  for (int k = 0; k <= 8; ++k) g.push_back(0.25 * k);
  return g;
}

TuneResult tune_proportional(const Scenario& scenario, const Game& game,
                             const std::vector<double>& grid) {
  return tune(scenario, game, grid, [](int n, auto&& body) { detail::parallel_for(n, body); });
}

TuneResult tune_proportional_serial(const Scenario& scenario, const Game& game,
                                    const std::vector<double>& grid) {
  return tune(scenario, game, grid, [](int n, auto&& body) { detail::serial_for(n, body); });
}

TrainingTrace centralized_ac(const Scenario& scenario, const Game& game,
                             const LearnerConfig& config) {
  LearnerState learner = make_learner(config, scenario.seed);
  return run_centralized_loop(scenario, game, learner);
}

}  // namespace cpsg
