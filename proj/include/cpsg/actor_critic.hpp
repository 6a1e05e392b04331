#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include <nlohmann/json.hpp>

#include "cpsg/basis.hpp"
#include "cpsg/game.hpp"
#include "cpsg/rollout.hpp"
#include "cpsg/scenario.hpp"

namespace cpsg {

using PlayerWeights = std::array<FeatureVector, kNumPlayers>;

struct Sinusoid {
  double amplitude = 0.0;
  double frequency = 0.0;  // rad per unit time
  double phase = 0.0;
};

/// Three sinusoids per player.
using ExplorationBank = std::array<std::array<Sinusoid, 3>, kNumPlayers>;

/// Learning hyperparameters. Defaults are the Harvey settings.
struct LearnerConfig {
  std::array<double, kNumPlayers> alpha_c{0.5, 0.5, 0.5};
  std::array<double, kNumPlayers> alpha_a{0.1, 0.1, 0.1};
  double t_explore = 12.0;
  double n_bar = 0.3;
  double base_frequency = 0.5;
};

void validate(const LearnerConfig& config);
nlohmann::json to_json(const LearnerConfig& config);
LearnerConfig learner_config_from_json(const nlohmann::json& j);

/// Frequencies base * {1, sqrt 2, pi} * {1, 1.3, 1.7}[player], equal
/// amplitudes n_bar / 3, phases drawn from `seed`.
ExplorationBank make_exploration_bank(double n_bar, double base_frequency, std::uint64_t seed);

/// Probing signal of player `player` (0-based) at time t; zero for t > t_explore.
double exploration_signal(int player, double t, double t_explore, const ExplorationBank& bank);

/// Critic and actor weights of the three players plus their schedule.
struct LearnerState {
  PlayerWeights critic;
  PlayerWeights actor;
  LearnerConfig config;
  ExplorationBank bank;
};

/// Zero-initialized learner (admissible: every actor outputs 0).
LearnerState make_learner(const LearnerConfig& config, std::uint64_t seed);

/// Actor policy -(1 / 2 R_ii) g_i^T grad phi(x) W_a, saturated to [0, u_max].
PolicyValue actor_control(const FeatureVector& w_actor, const StateVector& x,
                          const PlayerSpec& spec);

struct BellmanResidual {
  double eps = 0.0;
  FeatureVector sigma;
};

/// eps = Q_i + sum_j R_ij u_j^2 + W_c^T sigma with sigma = grad phi^T (f + sum g_j u_j).
BellmanResidual bellman_residual(const FeatureVector& w_critic, const StateVector& x,
                                 const Control& u, const PlayerSpec& spec,
                                 const StateVector& drift_val, const InputVectors& inputs);

/// Euler step of the normalized-gradient critic law.
FeatureVector critic_step(const FeatureVector& w_critic, double eps, const FeatureVector& sigma,
                          double alpha_c, double dt);

/// Euler step of the actor tracking law. Throws ConfigError if alpha_a dt >= 1.
FeatureVector actor_step(const FeatureVector& w_actor, const FeatureVector& w_critic,
                         double alpha_a, double dt);

/// Per-step record of a learning run.
struct TrainingTrace {
  Trajectory path;
  std::vector<int> window;
  std::vector<Control> actor_controls;  // actor output before exploration, unsaturated
  std::vector<std::array<double, kNumPlayers>> residuals;
  std::vector<FeatureVector> regressors;
  std::vector<std::array<double, kNumPlayers>> critic_norms;
  std::vector<std::array<double, kNumPlayers>> actor_norms;
  std::vector<std::array<double, kNumPlayers>> running_cost;  // cumulative J_i after step t
  PlayerWeights final_critic;
  PlayerWeights final_actor;
};

/// Online actor-critic game loop over the scenario horizon. `learner` is
/// updated in place so a later call warm-starts from its weights.
TrainingTrace run_game_loop(const Scenario& scenario, const Game& game, LearnerState& learner);

/// Same loop with one critic on the summed cost; every actor tracks it.
TrainingTrace run_centralized_loop(const Scenario& scenario, const Game& game,
                                   LearnerState& learner);

/// Frozen actor policy (no learning, no exploration).
ControlLaw actor_policy(const PlayerWeights& actor, const Players& players);

/// factor x horizon rollout with frozen weights; drivers past the data are held
/// at their last sample.
Trajectory extended_rollout(const PlayerWeights& actor, const Scenario& scenario, const Game& game,
                            int factor = 2);

nlohmann::json weights_to_json(const PlayerWeights& w);
PlayerWeights weights_from_json(const nlohmann::json& j);

}  // namespace cpsg
