#include <cmath>

#include <gtest/gtest.h>

#include "cpsg/actor_critic.hpp"
#include "cpsg/diagnostics.hpp"
#include "cpsg/synthetic.hpp"
#include "support.hpp"

using namespace cpsg;
using testing_support::Gen;

namespace {

struct Fixture {
  CpsParams params = reference_params();
  Scenario scenario = make_harvey_synth(params);
  Game game{params, make_players(params)};
};

FeatureVector random_weights(Gen& g, double scale = 1.0) {
  FeatureVector w;
  for (int k = 0; k < w.size(); ++k) w[k] = scale * g.normal();
  return w;
}

}  // namespace

TEST(ActorControl, ZeroWeightsGiveZero) {
  Fixture f;
  for (int i = 0; i < 3; ++i)
    EXPECT_EQ(actor_control(FeatureVector::Zero(), StateVector::Constant(0.5), f.game.players[i]).applied, 0.0);
}

TEST(ActorControl, EqualsNashPolicyOfCriticGradient) {
  Fixture f;
  Gen g(31);
  for (int n = 0; n < 50; ++n) {
    const FeatureVector w = random_weights(g);
    const StateVector x = g.state();
    for (int i = 0; i < 3; ++i) {
      const auto a = actor_control(w, x, f.game.players[i]);
      const auto b = nash_policy(f.game.players[i], Basis::gradient(x, w));
      EXPECT_DOUBLE_EQ(a.raw, b.raw);
      EXPECT_DOUBLE_EQ(a.applied, b.applied);
    }
  }
}

TEST(CriticStep, NormalizedStepIsBounded) {
  Gen g(32);
  const double bound = 3.0 * std::sqrt(3.0) / 16.0;
  double worst = 0.0;
  for (int n = 0; n < 2000; ++n) {
    const FeatureVector sigma = random_weights(g, std::pow(10.0, g.uniform(-3.0, 2.0)));
    const FeatureVector w = critic_step(FeatureVector::Zero(), 1.0, sigma, 1.0, 1.0);
    worst = std::max(worst, w.norm());
  }
  EXPECT_LE(worst, bound + 1e-15);
  EXPECT_GT(worst, 0.9 * bound);
}

TEST(CriticStep, ZeroResidualOrRateIsNoOp) {
  Gen g(33);
  const FeatureVector w = random_weights(g), s = random_weights(g);
  EXPECT_TRUE(critic_step(w, 0.0, s, 0.5, 1.0) == w);
  EXPECT_TRUE(critic_step(w, 1.3, s, 0.0, 1.0) == w);
}

TEST(ActorStep, TracksCriticAndRejectsLargeRate) {
  Gen g(34);
  const FeatureVector wa = random_weights(g), wc = random_weights(g);
  const FeatureVector next = actor_step(wa, wc, 0.1, 1.0);
  EXPECT_LT((next - wc).norm(), (wa - wc).norm());
  EXPECT_LT((next - (0.9 * wa + 0.1 * wc)).norm(), 1e-12);
  EXPECT_THROW(actor_step(wa, wc, 1.0, 1.0), ConfigError);
}

TEST(BellmanResidual, MatchesDefinition) {
  Fixture f;
  Gen g(35);
  const FeatureVector w = random_weights(g);
  const StateVector x = g.state();
  const Control u(0.2, 0.5, 0.1);
  const InputVectors in = input_vectors(f.params);
  const StateVector fx = drift(x, g.snapshot(), f.params).xdot;
  const StateVector xdot = fx + in.g[0] * u[0] + in.g[1] * u[1] + in.g[2] * u[2];
  for (int i = 0; i < 3; ++i) {
    const auto br = bellman_residual(w, x, u, f.game.players[i], fx, in);
    EXPECT_LT((br.sigma - Basis::jacobian(x).transpose() * xdot).norm(), 1e-12);
    EXPECT_NEAR(br.eps, running_cost(f.game.players[i], x, u) + w.dot(br.sigma), 1e-12);
  }
}

TEST(LearnerConfig, ValidationAndJson) {
  LearnerConfig c;
  EXPECT_NO_THROW(validate(c));
  c.alpha_a[1] = 0.6;
  EXPECT_THROW(validate(c), ConfigError);
  c = LearnerConfig{};
  c.n_bar = -1.0;
  EXPECT_THROW(validate(c), ConfigError);

  LearnerConfig d = learner_config_from_json({{"alpha_c", 0.8}, {"alpha_a", {0.1, 0.2, 0.3}}});
  EXPECT_EQ(d.alpha_c[2], 0.8);
  EXPECT_EQ(d.alpha_a[1], 0.2);
  EXPECT_EQ(d.t_explore, 12.0);
  const LearnerConfig e = learner_config_from_json(to_json(d));
  EXPECT_EQ(e.alpha_a, d.alpha_a);
  EXPECT_EQ(e.base_frequency, d.base_frequency);
  EXPECT_THROW(learner_config_from_json({{"alpha_c", {1.0, 2.0}}}), ConfigError);
}

TEST(Exploration, BoundedAndSwitchedOff) {
  const ExplorationBank bank = make_exploration_bank(0.3, 0.5, 42);
  for (int i = 0; i < 3; ++i) {
    for (double t = 0.0; t <= 12.0; t += 0.25) EXPECT_LE(std::abs(exploration_signal(i, t, 12.0, bank)), 0.3 + 1e-15);
    EXPECT_EQ(exploration_signal(i, 12.5, 12.0, bank), 0.0);
    EXPECT_EQ(exploration_signal(i, 30.0, 12.0, bank), 0.0);
  }
  const ExplorationBank again = make_exploration_bank(0.3, 0.5, 42);
  const ExplorationBank other = make_exploration_bank(0.3, 0.5, 43);
  EXPECT_EQ(again[1][2].phase, bank[1][2].phase);
  EXPECT_NE(other[1][2].phase, bank[1][2].phase);
}

TEST(GameLoop, ZeroLearningEqualsOpenLoop) {
  Fixture f;
  LearnerConfig c;
  c.alpha_c = {0, 0, 0};
  c.alpha_a = {0, 0, 0};
  c.n_bar = 0.0;
  LearnerState learner = make_learner(c, f.scenario.seed);
  const TrainingTrace tr = run_game_loop(f.scenario, f.game, learner);
  const Trajectory ol = open_loop(f.scenario, f.game);
  ASSERT_EQ(tr.path.states.size(), ol.states.size());
  for (std::size_t t = 0; t < ol.states.size(); ++t) EXPECT_TRUE(tr.path.states[t] == ol.states[t]);
}

TEST(GameLoop, DeterministicAndWellFormed) {
  Fixture f;
  LearnerState a = make_learner({}, f.scenario.seed), b = make_learner({}, f.scenario.seed);
  const TrainingTrace ta = run_game_loop(f.scenario, f.game, a);
  const TrainingTrace tb = run_game_loop(f.scenario, f.game, b);
  ASSERT_EQ(ta.path.steps(), 17);
  EXPECT_EQ(ta.path.states.size(), 18u);
  for (int t = 0; t < 17; ++t) {
    EXPECT_TRUE(ta.path.states[t + 1] == tb.path.states[t + 1]);
    EXPECT_EQ(ta.residuals[t], tb.residuals[t]);
    EXPECT_EQ(ta.window[t], t / 6);
    for (int i = 0; i < 3; ++i) {
      EXPECT_GE(ta.path.controls[t][i], 0.0);
      EXPECT_LE(ta.path.controls[t][i], 1.0);
    }
  }
  EXPECT_TRUE(ta.final_actor[0] == tb.final_actor[0]);
}

TEST(GameLoop, GoldenHarveyRun) {
  Fixture f;
  LearnerState learner = make_learner({}, f.scenario.seed);
  const TrainingTrace tr = run_game_loop(f.scenario, f.game, learner);
  const Trajectory ol = open_loop(f.scenario, f.game);
  const MetricsReport m = compute_metrics(tr.path, f.game.players, &ol);
  ASSERT_TRUE(m.fear_reduction_pct.has_value());
  EXPECT_NEAR(*m.fear_reduction_pct, 49.082038161801265, 1e-9);
  EXPECT_NEAR(m.total_cost, 12.754576810717055, 1e-9);
  EXPECT_EQ(tr.path.invariance_violations, 0);
}

TEST(GameLoop, WarmStartsFromLearnerState) {
  Fixture f;
  LearnerState learner = make_learner({}, f.scenario.seed);
  const TrainingTrace first = run_game_loop(f.scenario, f.game, learner);
  EXPECT_TRUE(learner.actor[0] == first.final_actor[0]);
  const TrainingTrace second = run_game_loop(f.scenario, f.game, learner);
  EXPECT_FALSE(second.path.controls[0] == first.path.controls[0]);
}

TEST(CentralizedLoop, SinglePlayerCoincidesWithGame) {
  Fixture f;
  f.game.players[0].active = false;
  f.game.players[2].active = false;
  LearnerState a = make_learner({}, f.scenario.seed), b = make_learner({}, f.scenario.seed);
  const TrainingTrace nzs = run_game_loop(f.scenario, f.game, a);
  const TrainingTrace cen = run_centralized_loop(f.scenario, f.game, b);
  for (int t = 0; t <= nzs.path.steps(); ++t) EXPECT_TRUE(nzs.path.states[t] == cen.path.states[t]);
  for (int t = 0; t < nzs.path.steps(); ++t) EXPECT_EQ(nzs.residuals[t][1], cen.residuals[t][1]);
  EXPECT_TRUE(nzs.final_critic[1] == cen.final_critic[1]);
  EXPECT_TRUE(nzs.final_actor[1] == cen.final_actor[1]);
}

TEST(ExtendedRollout, DoublesHorizonAndStaysInBox) {
  Fixture f;
  LearnerState learner = make_learner({}, f.scenario.seed);
  const TrainingTrace tr = run_game_loop(f.scenario, f.game, learner);
  const Trajectory ext = extended_rollout(tr.final_actor, f.scenario, f.game, 2);
  EXPECT_EQ(ext.steps(), 34);
  for (const auto& x : ext.states) EXPECT_TRUE((x.array() >= 0).all() && (x.array() <= 1).all());
}

TEST(Weights, JsonRoundTrip) {
  Gen g(36);
  PlayerWeights w{random_weights(g), random_weights(g), random_weights(g)};
  const PlayerWeights b = weights_from_json(weights_to_json(w));
  for (int i = 0; i < 3; ++i) EXPECT_TRUE(b[i] == w[i]);
  EXPECT_THROW(weights_from_json(nlohmann::json::array({1, 2})), ConfigError);
}
