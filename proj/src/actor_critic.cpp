#include "cpsg/actor_critic.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "cpsg/rng.hpp"

namespace cpsg {
namespace {

enum class LoopMode { kNash, kCentralized };

double actor_raw(const FeatureVector& w_actor, const StateVector& x, const PlayerSpec& spec) {
  const StateVector grad = Basis::gradient(x, w_actor);
  return -spec.g.dot(grad) / (2.0 * spec.r_own());
}

std::array<double, kNumPlayers> norms(const PlayerWeights& w) {
  return {w[0].norm(), w[1].norm(), w[2].norm()};
}

TrainingTrace run_loop(const Scenario& scenario, const Game& game, LearnerState& learner,
                       LoopMode mode) {
  validate(learner.config);
  const auto& cfg = learner.config;
  const InputVectors inputs = input_vectors(game.params);
  const double dt = scenario.dt;

  TrainingTrace trace;
  Trajectory& path = trace.path;
  path.dt = dt;
  path.states.push_back(scenario.x0);

  StateVector x = scenario.x0;
  std::array<double, kNumPlayers> cost{};
  for (int t = 0; t < scenario.horizon; ++t) {
    const SignalSnapshot snap = snapshot_at(scenario, t);
    const StateVector f = drift(x, snap, game.params).xdot;
    const double time = t * dt;

    Control actor_u = Control::Zero();
    Control raw = Control::Zero();
    for (int i = 0; i < kNumPlayers; ++i) {
      if (!game.players[i].active) continue;
      actor_u[i] = actor_raw(learner.actor[i], x, game.players[i]);
      raw[i] = actor_u[i] + exploration_signal(i, time, cfg.t_explore, learner.bank);
    }
    const Control u = saturate_controls(raw, game.players);

    std::array<double, kNumPlayers> eps{};
    FeatureVector sigma = FeatureVector::Zero();
    if (mode == LoopMode::kNash) {
      for (int i = 0; i < kNumPlayers; ++i) {
        const PlayerSpec& spec = game.players[i];
        if (!spec.active) continue;
        const BellmanResidual br = bellman_residual(learner.critic[i], x, u, spec, f, inputs);
        sigma = br.sigma;
        eps[i] = br.eps;
        learner.critic[i] = critic_step(learner.critic[i], br.eps, br.sigma, cfg.alpha_c[i], dt);
        learner.actor[i] = actor_step(learner.actor[i], learner.critic[i], cfg.alpha_a[i], dt);
      }
    } else {
      StateVector xdot = f;
      double cost_sum = 0.0;
      for (int j = 0; j < kNumPlayers; ++j) {
        if (!game.players[j].active) continue;
        xdot += inputs.g[j] * u[j];
        cost_sum += state_penalty(game.players[j], x) + game.players[j].r_own() * u[j] * u[j];
      }
      sigma = Basis::directional(x, xdot);
      const double e = cost_sum + learner.critic[0].dot(sigma);
      const FeatureVector central = critic_step(learner.critic[0], e, sigma, cfg.alpha_c[0], dt);
      for (int i = 0; i < kNumPlayers; ++i) {
        learner.critic[i] = central;
        if (!game.players[i].active) continue;
        eps[i] = e;
        learner.actor[i] = actor_step(learner.actor[i], central, cfg.alpha_a[i], dt);
      }
    }

    for (int i = 0; i < kNumPlayers; ++i) {
      if (game.players[i].active) cost[i] += running_cost(game.players[i], x, u) * dt;
    }

    const StepResult r = advance(x, u, snap, game.params, dt, scenario.substeps);
    x = r.state;

    path.raw.push_back(raw);
    path.controls.push_back(u);
    path.clamped.push_back(r.clamped);
    if (r.invariance_violated) ++path.invariance_violations;
    path.states.push_back(x);
    trace.window.push_back(window_index(t, scenario.window_len));
    trace.actor_controls.push_back(actor_u);
    trace.residuals.push_back(eps);
    trace.regressors.push_back(sigma);
    trace.critic_norms.push_back(norms(learner.critic));
    trace.actor_norms.push_back(norms(learner.actor));
    trace.running_cost.push_back(cost);
  }
  trace.final_critic = learner.critic;
  trace.final_actor = learner.actor;
  return trace;
}

}  // namespace

void validate(const LearnerConfig& c) {
  for (int i = 0; i < kNumPlayers; ++i) {
    const std::string who = "player " + std::to_string(i + 1);
    if (!(c.alpha_c[i] >= 0.0) || !(c.alpha_a[i] >= 0.0))
      throw ConfigError(who + ": learning rates must be >= 0");
    if (c.alpha_a[i] > 0.0 && !(c.alpha_c[i] > c.alpha_a[i]))
      throw ConfigError(who + ": alpha_c must exceed alpha_a (two-timescale separation)");
  }
  if (!(c.n_bar >= 0.0)) throw ConfigError("n_bar must be >= 0");
  if (!(c.t_explore >= 0.0)) throw ConfigError("t_explore must be >= 0");
  if (!(c.base_frequency > 0.0)) throw ConfigError("base_frequency must be > 0");
}

nlohmann::json to_json(const LearnerConfig& c) {
  return {{"alpha_c", c.alpha_c},         {"alpha_a", c.alpha_a}, {"t_explore", c.t_explore},
          {"n_bar", c.n_bar},             {"base_frequency", c.base_frequency}};
}

LearnerConfig learner_config_from_json(const nlohmann::json& j) {
  LearnerConfig c;
  auto per_player = [&](const char* key, std::array<double, kNumPlayers>& dst) {
    if (!j.contains(key)) return;
    const auto& v = j.at(key);
    if (v.is_number()) {
      dst.fill(v.get<double>());
    } else if (v.is_array() && v.size() == kNumPlayers) {
      for (int i = 0; i < kNumPlayers; ++i) dst[i] = v[i].get<double>();
    } else {
      throw ConfigError(std::string(key) + " must be a number or an array of 3");
    }
  };
  try {
    per_player("alpha_c", c.alpha_c);
    per_player("alpha_a", c.alpha_a);
    c.t_explore = j.value("t_explore", c.t_explore);
    c.n_bar = j.value("n_bar", c.n_bar);
    c.base_frequency = j.value("base_frequency", c.base_frequency);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("hyperparameters: ") + e.what());
  }
  validate(c);
  return c;
}

ExplorationBank make_exploration_bank(double n_bar, double base_frequency, std::uint64_t seed) {
  static constexpr std::array<double, 3> kRatios{1.0, std::numbers::sqrt2, std::numbers::pi};
  static constexpr std::array<double, kNumPlayers> kPlayerScale{1.0, 1.3, 1.7};
  Rng rng(stream_seed(seed, 0xE7B1));
  ExplorationBank bank;
  for (int i = 0; i < kNumPlayers; ++i) {
    for (int m = 0; m < 3; ++m) {
      bank[i][m].amplitude = n_bar / 3.0;
      bank[i][m].frequency = base_frequency * kRatios[m] * kPlayerScale[i];
      bank[i][m].phase = 2.0 * std::numbers::pi * rng.uniform();
    }
  }
  return bank;
}

double exploration_signal(int player, double t, double t_explore, const ExplorationBank& bank) {
  if (t > t_explore) return 0.0;
  double n = 0.0;
  for (const auto& s : bank[player]) n += s.amplitude * std::sin(s.frequency * t + s.phase);
  return n;
}

LearnerState make_learner(const LearnerConfig& config, std::uint64_t seed) {
  validate(config);
  LearnerState s;
  for (auto& w : s.critic) w.setZero();
  for (auto& w : s.actor) w.setZero();
  s.config = config;
  s.bank = make_exploration_bank(config.n_bar, config.base_frequency, seed);
  return s;
}

PolicyValue actor_control(const FeatureVector& w_actor, const StateVector& x,
                          const PlayerSpec& spec) {
  PolicyValue out;
  out.raw = actor_raw(w_actor, x, spec);
  out.applied = saturate(out.raw, spec.u_max, &out.saturation);
  return out;
}

BellmanResidual bellman_residual(const FeatureVector& w_critic, const StateVector& x,
                                 const Control& u, const PlayerSpec& spec,
                                 const StateVector& drift_val, const InputVectors& inputs) {
  StateVector xdot = drift_val;
  for (int j = 0; j < kNumPlayers; ++j) xdot += inputs.g[j] * u[j];
  BellmanResidual out;
  out.sigma = Basis::directional(x, xdot);
  out.eps = running_cost(spec, x, u) + w_critic.dot(out.sigma);
  return out;
}

FeatureVector critic_step(const FeatureVector& w_critic, double eps, const FeatureVector& sigma,
                          double alpha_c, double dt) {
  const double norm = sigma.squaredNorm() + 1.0;
  return w_critic - (dt * alpha_c * eps / (norm * norm)) * sigma;
}

FeatureVector actor_step(const FeatureVector& w_actor, const FeatureVector& w_critic,
                         double alpha_a, double dt) {
  if (alpha_a * dt >= 1.0) throw ConfigError("actor step requires alpha_a * dt < 1");
  return w_actor - (dt * alpha_a) * (w_actor - w_critic);
}

TrainingTrace run_game_loop(const Scenario& scenario, const Game& game, LearnerState& learner) {
  return run_loop(scenario, game, learner, LoopMode::kNash);
}

TrainingTrace run_centralized_loop(const Scenario& scenario, const Game& game,
                                   LearnerState& learner) {
  return run_loop(scenario, game, learner, LoopMode::kCentralized);
}

ControlLaw actor_policy(const PlayerWeights& actor, const Players& players) {
  return [actor, players](const StateVector& x, int) {
    Control raw = Control::Zero();
    for (int i = 0; i < kNumPlayers; ++i)
      if (players[i].active) raw[i] = actor_raw(actor[i], x, players[i]);
    return raw;
  };
}

Trajectory extended_rollout(const PlayerWeights& actor, const Scenario& scenario, const Game& game,
                            int factor) {
  return rollout(extended(scenario, factor), game, actor_policy(actor, game.players));
}

nlohmann::json weights_to_json(const PlayerWeights& w) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& v : w) arr.push_back(std::vector<double>(v.data(), v.data() + v.size()));
  return arr;
}

PlayerWeights weights_from_json(const nlohmann::json& j) {
  if (!j.is_array() || j.size() != kNumPlayers)
    throw ConfigError("weights must be an array of 3 vectors");
  PlayerWeights w;
  for (int i = 0; i < kNumPlayers; ++i) {
    const auto v = j[i].get<std::vector<double>>();
    if (v.size() != static_cast<std::size_t>(Basis::kSize))
      throw ConfigError("weight vector " + std::to_string(i + 1) + " must have 66 entries");
    w[i] = Eigen::Map<const FeatureVector>(v.data());
  }
  return w;
}

}  // namespace cpsg
