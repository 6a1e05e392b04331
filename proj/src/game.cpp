#include "cpsg/game.hpp"

#include <algorithm>
#include <string>

namespace cpsg {

nlohmann::json to_json(const CostWeights& w) {
  return {{"q1_1", w.q1_1}, {"q1_10", w.q1_10}, {"q2_1", w.q2_1}, {"q2_8", w.q2_8},
          {"q3_1", w.q3_1}, {"q3_4", w.q3_4},   {"q3_9", w.q3_9},
          {"r", {w.r(0, 0), w.r(1, 1), w.r(2, 2)}},
          {"u_max", {w.u_max[0], w.u_max[1], w.u_max[2]}}};
}

CostWeights cost_weights_from_json(const nlohmann::json& j) {
  CostWeights w;
  try {
    for (auto [key, dst] : {std::pair{"q1_1", &w.q1_1}, {"q1_10", &w.q1_10}, {"q2_1", &w.q2_1},
                            {"q2_8", &w.q2_8}, {"q3_1", &w.q3_1}, {"q3_4", &w.q3_4},
                            {"q3_9", &w.q3_9}})
      *dst = j.value(key, *dst);
    if (j.contains("r")) {
      const auto r = j.at("r").get<std::vector<double>>();
      if (r.size() != 3) throw ConfigError("cost weights: r must have 3 entries");
      w.r = Eigen::Vector3d(r[0], r[1], r[2]).asDiagonal();
    }
    if (j.contains("u_max")) {
      const auto u = j.at("u_max").get<std::vector<double>>();
      if (u.size() != 3) throw ConfigError("cost weights: u_max must have 3 entries");
      w.u_max = Eigen::Vector3d(u[0], u[1], u[2]);
    }
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("cost weights: ") + e.what());
  }
  return w;
}

Players make_players(const CpsParams& params, const CostWeights& w) {
  const InputVectors in = input_vectors(params);
  Players players;
  players[0].q = {{kFear, w.q1_1, false}, {kFakeNews, w.q1_10, false}};
  players[1].q = {{kFear, w.q2_1, false}, {kPower, w.q2_8, true}};
  players[2].q = {{kFear, w.q3_1, false}, {kHealth, w.q3_4, true}, {kEms, w.q3_9, true}};
  for (int i = 0; i < kNumPlayers; ++i) {
    players[i].id = i + 1;
    players[i].r_row = w.r.row(i).transpose();
    players[i].g = in.g[i];
    players[i].u_max = w.u_max[i];
    validate(players[i]);
  }
  return players;
}

void refresh_inputs(Game& game) {
  const InputVectors in = input_vectors(game.params);
  for (int i = 0; i < kNumPlayers; ++i) game.players[i].g = in.g[i];
}

void validate(const PlayerSpec& spec) {
  const std::string who = "player " + std::to_string(spec.id);
  if (spec.id < 1 || spec.id > kNumPlayers) throw ConfigError(who + ": id must be 1, 2 or 3");
  if (!(spec.r_own() > 0.0)) throw ConfigError(who + ": R_ii must be > 0");
  for (int j = 0; j < kNumPlayers; ++j)
    if (!(spec.r_row[j] >= 0.0)) throw ConfigError(who + ": R_ij must be >= 0");
  if (!(spec.u_max > 0.0)) throw ConfigError(who + ": u_max must be > 0");
  for (const auto& term : spec.q) {
    if (!(term.weight >= 0.0)) throw ConfigError(who + ": q weights must be >= 0");
    if (term.state < 0 || term.state >= kNumStates) throw ConfigError(who + ": bad q index");
  }
}

double state_penalty(const PlayerSpec& spec, const StateVector& x) {
  double q = 0.0;
  for (const auto& term : spec.q) {
    const double v = term.deficit ? 1.0 - x[term.state] : x[term.state];
    q += term.weight * v * v;
  }
  return q;
}

double running_cost(const PlayerSpec& spec, const StateVector& x, const Control& u) {
  return state_penalty(spec, x) + spec.r_row.dot(u.cwiseAbs2());
}

double hamiltonian(const PlayerSpec& spec, const StateVector& x, const StateVector& grad_v,
                   const Control& u, const StateVector& drift_val, const InputVectors& inputs) {
  StateVector xdot = drift_val;
  for (int j = 0; j < kNumPlayers; ++j) xdot += inputs.g[j] * u[j];
  return running_cost(spec, x, u) + grad_v.dot(xdot);
}

double saturate(double raw, double u_max, Saturation* which) {
  Saturation s = Saturation::kNone;
  double v = raw;
  if (raw < 0.0) {
    s = Saturation::kLower;
    v = 0.0;
  } else if (raw > u_max) {
    s = Saturation::kUpper;
    v = u_max;
  }
  if (which) *which = s;
  return v;
}

PolicyValue nash_policy(const PlayerSpec& spec, const StateVector& grad_v) {
  PolicyValue out;
  out.raw = -spec.g.dot(grad_v) / (2.0 * spec.r_own());
  out.applied = saturate(out.raw, spec.u_max, &out.saturation);
  return out;
}

}  // namespace cpsg
