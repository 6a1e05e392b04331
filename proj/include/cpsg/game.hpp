#pragma once

#include <array>
#include <vector>

#include <nlohmann/json.hpp>

#include "cpsg/dynamics.hpp"
#include "cpsg/types.hpp"

namespace cpsg {

/// One quadratic state-penalty term: weight * x_k^2, or weight * (1 - x_k)^2
/// when `deficit` is set.
struct PenaltyTerm {
  int state = 0;
  double weight = 0.0;
  bool deficit = false;
};

/// One agency's cost and input channel.
struct PlayerSpec {
  int id = 1;  // 1 communication, 2 power, 3 EMS
  std::vector<PenaltyTerm> q;
  Eigen::Vector3d r_row = Eigen::Vector3d::Zero();
  StateVector g = StateVector::Zero();
  double u_max = 1.0;
  /// Inactive players apply no control and contribute no cost.
  bool active = true;

  int index() const { return id - 1; }
  double r_own() const { return r_row[index()]; }
};

using Players = std::array<PlayerSpec, kNumPlayers>;

/// Everything a rollout needs besides the scenario.
struct Game {
  CpsParams params;
  Players players;
};

/// Default cost weights.
struct CostWeights {
  double q1_1 = 1.0, q1_10 = 0.5;
  double q2_1 = 0.5, q2_8 = 1.0;
  double q3_1 = 0.5, q3_4 = 0.5, q3_9 = 1.0;
  Eigen::Matrix3d r = Eigen::Matrix3d::Identity();
  Eigen::Vector3d u_max = Eigen::Vector3d::Ones();
};

nlohmann::json to_json(const CostWeights& w);
/// Missing keys keep their defaults; r is the diagonal {r1, r2, r3}.
CostWeights cost_weights_from_json(const nlohmann::json& j);

Players make_players(const CpsParams& params, const CostWeights& weights = {});

/// Refreshes each player's input vector after a change in the control gains.
void refresh_inputs(Game& game);

void validate(const PlayerSpec& spec);

double state_penalty(const PlayerSpec& spec, const StateVector& x);

/// Q_i(x) + sum_j R_ij u_j^2.
double running_cost(const PlayerSpec& spec, const StateVector& x,
                    const Control& u);

double hamiltonian(const PlayerSpec& spec, const StateVector& x,
                   const StateVector& grad_v, const Control& u,
                   const StateVector& drift_val, const InputVectors& inputs);

enum class Saturation { kNone, kLower, kUpper };

struct PolicyValue {
  double raw = 0.0;
  double applied = 0.0;
  Saturation saturation = Saturation::kNone;
};

double saturate(double raw, double u_max, Saturation* which = nullptr);

/// u_i = clamp(-(1 / 2 R_ii) g_i^T grad V_i, 0, u_max).
PolicyValue nash_policy(const PlayerSpec& spec, const StateVector& grad_v);

}  // namespace cpsg
