#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "cpsg/actor_critic.hpp"
#include "cpsg/rollout.hpp"

namespace cpsg {

struct MetricsReport {
  double mean_fear = 0.0;
  std::optional<double> fear_reduction_pct;  // absent when the reference mean fear is 0
  double power_deficit = 0.0;                // mean of 1 - x8
  double health_deficit = 0.0;               // mean of 1 - x4
  double ems_deficit = 0.0;                  // mean of 1 - x9
  double effort = 0.0;                       // sum_t sum_i u_i^2 dt
  std::array<double, kNumPlayers> per_player_cost{};
  double total_cost = 0.0;
  std::optional<double> rmse;
};

double mean_fear(const std::vector<StateVector>& states);

/// 100 (1 - mean / reference); empty if reference is 0.
std::optional<double> fear_reduction(double mean, double reference);

/// State means run over all horizon + 1 samples. `reference` and `observed`
/// must match the trajectory length when given.
MetricsReport compute_metrics(const Trajectory& traj, const Players& players,
                              const Trajectory* reference = nullptr,
                              const std::vector<StateVector>* observed = nullptr);

/// Root-mean-square difference over all samples and states.
double trajectory_rmse(const std::vector<StateVector>& a, const std::vector<StateVector>& b);

struct DeviationOptions {
  int n_perturb = 50;
  std::vector<double> scales{0.05, 0.10, 0.20};
  std::uint64_t seed = 42;
  std::array<bool, kNumPlayers> players{true, true, true};
};

struct DeviationEntry {
  int player = 1;
  double scale = 0.0;
  double base_cost = 0.0;
  double best_cost = 0.0;   // min over the sampled deviations
  double improvement = 0.0; // base_cost - best_cost, may be negative
  std::optional<double> exploitability_pct;  // floored at 0; absent if base_cost is 0
};

struct DeviationReport {
  int n_perturb = 0;
  std::vector<double> scales;
  std::vector<DeviationEntry> entries;  // player-major, then scale

  const DeviationEntry* find(int player, double scale) const;
};

/// Unilateral-deviation test of frozen actor weights. Player i's weights are
/// moved by scale * |W_a_i| along isotropic random unit directions while the
/// other players keep theirs; rollouts carry no exploration. Rollouts run in
/// parallel.
DeviationReport deviation_test(const PlayerWeights& actor, const Scenario& scenario,
                               const Game& game, const DeviationOptions& options = {});

DeviationReport deviation_test_serial(const PlayerWeights& actor, const Scenario& scenario,
                                      const Game& game, const DeviationOptions& options = {});

inline constexpr double kRankTolerance = 1e-10;

struct PeDiagnostics {
  int window = 0;
  double rank_tolerance = kRankTolerance;
  std::vector<double> min_eig;         // running covariance
  std::vector<double> max_eig;
  std::vector<int> effective_rank;
  std::vector<double> window_min_eig;  // last `window` samples
  std::vector<int> window_rank;
};

/// Excitation diagnostics of the normalized regressors sigma / (|sigma|^2 + 1).
/// Throws ConfigError on an empty trace or a non-positive window.
PeDiagnostics pe_diagnostics(const std::vector<FeatureVector>& regressors, int window);

int effective_rank(const Eigen::VectorXd& eigenvalues, double rel_tol = kRankTolerance);

struct SaturationStats {
  int steps = 0;
  std::array<double, kNumPlayers> lower{};       // u_raw < 0
  std::array<double, kNumPlayers> upper{};       // u_raw > u_max
  std::array<double, kNumPlayers> exact_zero{};  // u_raw == 0
  std::array<double, kNumStates> state_clamp{};
};

SaturationStats saturation_stats(const Trajectory& traj, const Players& players);

/// One sensitivity-sweep change: "beta1*2" scales, "window_len=3" sets.
/// An empty text or "default" is the identity.
struct Perturbation {
  std::string text;
  std::string name;
  bool multiply = true;
  double value = 1.0;
};

Perturbation parse_perturbation(const std::string& text);

/// Everything a sensitivity row needs.
struct SweepConfig {
  Scenario scenario;
  CpsParams params;
  CostWeights weights;
  LearnerConfig learner;
  DeviationOptions deviation;  // only player 1 at the first scale is used
};

/// Applies `p` to a copy of `config`. Throws ConfigError on an unknown name.
SweepConfig apply_perturbation(const SweepConfig& config, const Perturbation& p);

std::vector<std::string> perturbation_names();

struct SensitivityRow {
  std::string label;
  std::optional<double> fear_reduction_pct;
  double power_deficit = 0.0;
  double ems_deficit = 0.0;
  std::optional<double> exploitability_p1;
};

/// Trains and scores one configuration.
SensitivityRow sensitivity_row(const SweepConfig& config, const std::string& label);

/// One row per perturbation, computed in parallel.
std::vector<SensitivityRow> sensitivity_sweep(const SweepConfig& base,
                                              const std::vector<std::string>& perturbations);

std::vector<SensitivityRow> sensitivity_sweep_serial(const SweepConfig& base,
                                                     const std::vector<std::string>& perturbations);

}  // namespace cpsg
