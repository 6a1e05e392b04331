#pragma once

#include <vector>

#include "cpsg/actor_critic.hpp"
#include "cpsg/rollout.hpp"

namespace cpsg {

/// u_j = u_max_j for every active player.
ControlLaw constant_max_controller(const Players& players);

/// u = (K1 x1, K2 (1 - x8), K3 (1 - x9)); saturation happens in the rollout.
/// Throws ConfigError on a negative gain.
ControlLaw proportional_controller(const Eigen::Vector3d& gains);

/// {0, 0.25, ..., 2.0}
std::vector<double> default_gain_grid();

struct TuneResult {
  Eigen::Vector3d gains = Eigen::Vector3d::Zero();
  double total_cost = 0.0;
  int evaluated = 0;
};

/// Exhaustive search over grid^3 for the gains minimizing sum_i J_i. Ties go
/// to the lexicographically smallest gain vector. Rollouts run in parallel.
TuneResult tune_proportional(const Scenario& scenario, const Game& game,
                             const std::vector<double>& grid);

/// Single-threaded reference for `tune_proportional`.
TuneResult tune_proportional_serial(const Scenario& scenario, const Game& game,
                                    const std::vector<double>& grid);

/// Centralized actor-critic: one critic on sum_i Q_i + R_ii u_i^2, three
/// actors tracking it.
TrainingTrace centralized_ac(const Scenario& scenario, const Game& game,
                             const LearnerConfig& config);

}  // namespace cpsg
