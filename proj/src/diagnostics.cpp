#include "cpsg/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <map>

#include <Eigen/Eigenvalues>

#include "cpsg/rng.hpp"
#include "parallel.hpp"

namespace cpsg {
namespace {

using Loop = std::function<void(int, const std::function<void(int)>&)>;

const Loop kParallel = [](int n, const std::function<void(int)>& body) {
  detail::parallel_for(n, body);
};
const Loop kSerial = [](int n, const std::function<void(int)>& body) {
  detail::serial_for(n, body);
};

double state_mean(const std::vector<StateVector>& states, int k, bool deficit) {
  double s = 0.0;
  for (const auto& x : states) s += deficit ? 1.0 - x[k] : x[k];
  return s / static_cast<double>(states.size());
}

FeatureVector random_direction(Rng& rng) {
  FeatureVector d;
  for (int k = 0; k < d.size(); ++k) d[k] = rng.normal();
  return d / d.norm();
}

DeviationReport run_deviation(const PlayerWeights& actor, const Scenario& scenario,
                              const Game& game, const DeviationOptions& opt, const Loop& loop) {
  if (opt.n_perturb < 1) throw ConfigError("n_perturb must be >= 1");
  if (opt.scales.empty()) throw ConfigError("at least one deviation scale is required");
  for (double s : opt.scales)
    if (!(s > 0.0)) throw ConfigError("deviation scales must be > 0");

  const auto base = player_costs(rollout(scenario, game, actor_policy(actor, game.players)),
                                 game.players);
  const int n_scales = static_cast<int>(opt.scales.size());
  const int per_player = n_scales * opt.n_perturb;
  std::vector<double> cost(kNumPlayers * per_player, std::numeric_limits<double>::quiet_NaN());

  loop(kNumPlayers * per_player, [&](int job) {
    const int i = job / per_player;
    const int s = (job / opt.n_perturb) % n_scales;
    const int k = job % opt.n_perturb;
    if (!opt.players[i] || !game.players[i].active) return;
    Rng rng(stream_seed(opt.seed, 0xDE5 + i, s, k));
    PlayerWeights w = actor;
    w[i] += opt.scales[s] * actor[i].norm() * random_direction(rng);
    cost[job] = player_costs(rollout(scenario, game, actor_policy(w, game.players)),
                             game.players)[i];
  });

  DeviationReport rep;
  rep.n_perturb = opt.n_perturb;
  rep.scales = opt.scales;
  for (int i = 0; i < kNumPlayers; ++i) {
    if (!opt.players[i] || !game.players[i].active) continue;
    for (int s = 0; s < n_scales; ++s) {
      DeviationEntry e;
      e.player = i + 1;
      e.scale = opt.scales[s];
      e.base_cost = base[i];
      e.best_cost = std::numeric_limits<double>::infinity();
      for (int k = 0; k < opt.n_perturb; ++k)
        e.best_cost = std::min(e.best_cost, cost[(i * n_scales + s) * opt.n_perturb + k]);
      e.improvement = e.base_cost - e.best_cost;
      if (e.base_cost != 0.0)
        e.exploitability_pct = std::max(0.0, e.improvement / std::abs(e.base_cost)) * 100.0;
      rep.entries.push_back(e);
    }
  }
  return rep;
}

std::vector<SensitivityRow> run_sweep(const SweepConfig& base,
                                      const std::vector<std::string>& perturbations,
                                      const Loop& loop) {
  std::vector<SweepConfig> configs;
  std::vector<std::string> labels;
  for (const auto& text : perturbations) {
    const Perturbation p = parse_perturbation(text);
    configs.push_back(apply_perturbation(base, p));
    labels.push_back(p.name.empty() ? "default" : p.text);
  }
  std::vector<SensitivityRow> rows(configs.size());
  loop(static_cast<int>(configs.size()),
       [&](int k) { rows[k] = sensitivity_row(configs[k], labels[k]); });
  return rows;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t");
  return s.substr(b, e - b + 1);
}

}  // namespace

double mean_fear(const std::vector<StateVector>& states) {
  return state_mean(states, kFear, false);
}

std::optional<double> fear_reduction(double mean, double reference) {
  if (reference == 0.0) return std::nullopt;
  return 100.0 * (1.0 - mean / reference);
}

double trajectory_rmse(const std::vector<StateVector>& a, const std::vector<StateVector>& b) {
  if (a.size() != b.size() || a.empty())
    throw ConfigError("rmse: trajectories must be nonempty and of equal length");
  double s = 0.0;
  for (std::size_t t = 0; t < a.size(); ++t) s += (a[t] - b[t]).squaredNorm();
  return std::sqrt(s / static_cast<double>(a.size() * kNumStates));
}

MetricsReport compute_metrics(const Trajectory& traj, const Players& players,
                              const Trajectory* reference,
                              const std::vector<StateVector>* observed) {
  if (traj.states.empty()) throw ConfigError("metrics: empty trajectory");
  if (reference && reference->states.size() != traj.states.size())
    throw ConfigError("metrics: reference trajectory length differs");
  MetricsReport m;
  m.mean_fear = mean_fear(traj.states);
  m.power_deficit = state_mean(traj.states, kPower, true);
  m.health_deficit = state_mean(traj.states, kHealth, true);
  m.ems_deficit = state_mean(traj.states, kEms, true);
  for (const auto& u : traj.controls) m.effort += u.squaredNorm() * traj.dt;
  m.per_player_cost = player_costs(traj, players);
  m.total_cost = m.per_player_cost[0] + m.per_player_cost[1] + m.per_player_cost[2];
  if (reference) m.fear_reduction_pct = fear_reduction(m.mean_fear, mean_fear(reference->states));
  if (observed) m.rmse = trajectory_rmse(traj.states, *observed);
  return m;
}

const DeviationEntry* DeviationReport::find(int player, double scale) const {
  for (const auto& e : entries)
    if (e.player == player && std::abs(e.scale - scale) < 1e-12) return &e;
  return nullptr;
}

DeviationReport deviation_test(const PlayerWeights& actor, const Scenario& scenario,
                               const Game& game, const DeviationOptions& options) {
  return run_deviation(actor, scenario, game, options, kParallel);
}

DeviationReport deviation_test_serial(const PlayerWeights& actor, const Scenario& scenario,
                                      const Game& game, const DeviationOptions& options) {
  return run_deviation(actor, scenario, game, options, kSerial);
}

int effective_rank(const Eigen::VectorXd& eigenvalues, double rel_tol) {
  const double top = eigenvalues.maxCoeff();
  if (!(top > 0.0)) return 0;
  return static_cast<int>((eigenvalues.array() > rel_tol * top).count());
}

PeDiagnostics pe_diagnostics(const std::vector<FeatureVector>& regressors, int window) {
  if (regressors.empty()) throw ConfigError("pe: empty regressor trace");
  if (window < 1) throw ConfigError("pe: window must be >= 1");
  const int n = static_cast<int>(regressors.size());
  std::vector<FeatureVector> bar(n);
  for (int t = 0; t < n; ++t) bar[t] = regressors[t] / (regressors[t].squaredNorm() + 1.0);

  PeDiagnostics out;
  out.window = window;
  Eigen::Matrix<double, Basis::kSize, Basis::kSize> sum;
  sum.setZero();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
  for (int t = 0; t < n; ++t) {
    sum.noalias() += bar[t] * bar[t].transpose();
    solver.compute(sum / (t + 1.0), Eigen::EigenvaluesOnly);
    const Eigen::VectorXd ev = solver.eigenvalues();
    out.min_eig.push_back(ev.minCoeff());
    out.max_eig.push_back(ev.maxCoeff());
    out.effective_rank.push_back(effective_rank(ev));

    const int from = std::max(0, t + 1 - window);
    Eigen::MatrixXd wc = Eigen::MatrixXd::Zero(Basis::kSize, Basis::kSize);
    for (int k = from; k <= t; ++k) wc.noalias() += bar[k] * bar[k].transpose();
    solver.compute(wc / static_cast<double>(t + 1 - from), Eigen::EigenvaluesOnly);
    out.window_min_eig.push_back(solver.eigenvalues().minCoeff());
    out.window_rank.push_back(effective_rank(solver.eigenvalues()));
  }
  return out;
}

SaturationStats saturation_stats(const Trajectory& traj, const Players& players) {
  SaturationStats s;
  s.steps = traj.steps();
  if (s.steps == 0) return s;
  const double n = s.steps;
  for (int t = 0; t < s.steps; ++t) {
    for (int i = 0; i < kNumPlayers; ++i) {
      if (!players[i].active) continue;
      const double r = traj.raw[t][i];
      if (r < 0.0) s.lower[i] += 1.0 / n;
      else if (r > players[i].u_max) s.upper[i] += 1.0 / n;
      else if (r == 0.0) s.exact_zero[i] += 1.0 / n;
    }
    for (int k = 0; k < kNumStates; ++k)
      if (traj.clamped[t][k]) s.state_clamp[k] += 1.0 / n;
  }
  return s;
}

Perturbation parse_perturbation(const std::string& text) {
  Perturbation p;
  p.text = trim(text);
  if (p.text.empty() || p.text == "default") return p;
  const auto pos = p.text.find_first_of("*=");
  if (pos == std::string::npos)
    throw ConfigError("perturbation '" + p.text + "': expected name*factor or name=value");
  p.name = trim(p.text.substr(0, pos));
  p.multiply = p.text[pos] == '*';
  const std::string num = trim(p.text.substr(pos + 1));
  std::size_t used = 0;
  try {
    p.value = std::stod(num, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != num.size() || !std::isfinite(p.value))
    throw ConfigError("perturbation '" + p.text + "': bad number '" + num + "'");
  const auto names = perturbation_names();
  if (std::find(names.begin(), names.end(), p.name) == names.end())
    throw ConfigError("perturbation '" + p.text + "': unknown parameter '" + p.name + "'");
  return p;
}

std::vector<std::string> perturbation_names() {
  return {"beta1",  "beta8",  "beta9",  "beta10", "gamma8",    "gamma9",     "gamma10",
          "kappa",  "zeta",   "q1_1",   "q1_10",  "q2_1",      "q2_8",       "q3_1",
          "q3_4",   "q3_9",   "r1",     "r2",     "r3",        "u_max1",     "u_max2",
          "u_max3", "alpha_c", "alpha_a", "t_explore", "n_bar", "base_frequency", "window_len"};
}

SweepConfig apply_perturbation(const SweepConfig& config, const Perturbation& p) {
  SweepConfig c = config;
  if (p.name.empty()) return c;
  auto apply = [&](double& v) { v = p.multiply ? v * p.value : p.value; };

  std::map<std::string, double*> scalars{
      {"beta1", &c.params.beta1},      {"beta8", &c.params.beta8},
      {"beta9", &c.params.beta9},      {"beta10", &c.params.beta10},
      {"gamma8", &c.params.gamma8},    {"gamma9", &c.params.gamma9},
      {"gamma10", &c.params.gamma10},  {"kappa", &c.params.kappa},
      {"zeta", &c.params.zeta},        {"q1_1", &c.weights.q1_1},
      {"q1_10", &c.weights.q1_10},     {"q2_1", &c.weights.q2_1},
      {"q2_8", &c.weights.q2_8},       {"q3_1", &c.weights.q3_1},
      {"q3_4", &c.weights.q3_4},       {"q3_9", &c.weights.q3_9},
      {"r1", &c.weights.r(0, 0)},      {"r2", &c.weights.r(1, 1)},
      {"r3", &c.weights.r(2, 2)},      {"u_max1", &c.weights.u_max[0]},
      {"u_max2", &c.weights.u_max[1]}, {"u_max3", &c.weights.u_max[2]},
      {"t_explore", &c.learner.t_explore}, {"n_bar", &c.learner.n_bar},
      {"base_frequency", &c.learner.base_frequency}};

  if (auto it = scalars.find(p.name); it != scalars.end()) {
    apply(*it->second);
  } else if (p.name == "alpha_c") {
    for (double& a : c.learner.alpha_c) apply(a);
  } else if (p.name == "alpha_a") {
    for (double& a : c.learner.alpha_a) apply(a);
  } else if (p.name == "window_len") {
    double w = c.scenario.window_len;
    apply(w);
    if (!(w >= 1.0) || w != std::floor(w))
      throw ConfigError("perturbation '" + p.text + "': window_len must be a positive integer");
    c.scenario.window_len = static_cast<int>(w);
  } else {
    throw ConfigError("perturbation '" + p.text + "': unknown parameter '" + p.name + "'");
  }
  validate(c.params);
  validate(c.learner);
  validate(c.scenario);
  return c;
}

SensitivityRow sensitivity_row(const SweepConfig& config, const std::string& label) {
  const Game game{config.params, make_players(config.params, config.weights)};
  const Trajectory ref = open_loop(config.scenario, game);
  LearnerState learner = make_learner(config.learner, config.scenario.seed);
  const TrainingTrace trace = run_game_loop(config.scenario, game, learner);
  const MetricsReport m = compute_metrics(trace.path, game.players, &ref);

  DeviationOptions dev = config.deviation;
  dev.players = {true, false, false};
  dev.scales = {config.deviation.scales.front()};
  const DeviationReport d = deviation_test_serial(trace.final_actor, config.scenario, game, dev);

  SensitivityRow row;
  row.label = label;
  row.fear_reduction_pct = m.fear_reduction_pct;
  row.power_deficit = m.power_deficit;
  row.ems_deficit = m.ems_deficit;
  if (!d.entries.empty()) row.exploitability_p1 = d.entries.front().exploitability_pct;
  return row;
}

std::vector<SensitivityRow> sensitivity_sweep(const SweepConfig& base,
                                              const std::vector<std::string>& perturbations) {
  return run_sweep(base, perturbations, kParallel);
}

std::vector<SensitivityRow> sensitivity_sweep_serial(const SweepConfig& base,
                                                     const std::vector<std::string>& perturbations) {
  return run_sweep(base, perturbations, kSerial);
}

}  // namespace cpsg
