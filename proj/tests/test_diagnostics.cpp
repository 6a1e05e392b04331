#include <omp.h>

#include <gtest/gtest.h>

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

Trajectory constant_fear(double fear, int steps) {
  Trajectory t;
  for (int k = 0; k <= steps; ++k) {
    StateVector x = StateVector::Constant(0.5);
    x[kFear] = fear;
    t.states.push_back(x);
  }
  t.controls.assign(steps, Control::Zero());
  t.raw = t.controls;
  t.clamped.assign(steps, {});
  return t;
}

const TrainingTrace& trained() {
  static const TrainingTrace tr = [] {
    Fixture f;
    LearnerState l = make_learner({}, f.scenario.seed);
    return run_game_loop(f.scenario, f.game, l);
  }();
  return tr;
}

}  // namespace

TEST(Metrics, IdenticalToReferenceIsZeroReduction) {
  Fixture f;
  const Trajectory ol = open_loop(f.scenario, f.game);
  const MetricsReport m = compute_metrics(ol, f.game.players, &ol);
  EXPECT_EQ(*m.fear_reduction_pct, 0.0);
  EXPECT_EQ(m.effort, 0.0);
}

TEST(Metrics, ReductionExample) {
  const Players pl = make_players(reference_params());
  const Trajectory ref = constant_fear(0.523, 5), ctl = constant_fear(0.158, 5);
  const MetricsReport m = compute_metrics(ctl, pl, &ref);
  EXPECT_NEAR(*m.fear_reduction_pct, 69.79, 0.01);
}

TEST(Metrics, ZeroReferenceFearIsAbsent) {
  const Players pl = make_players(reference_params());
  const Trajectory ref = constant_fear(0.0, 3), ctl = constant_fear(0.2, 3);
  EXPECT_FALSE(compute_metrics(ctl, pl, &ref).fear_reduction_pct.has_value());
  const Trajectory longer = constant_fear(0.1, 4);
  EXPECT_THROW(compute_metrics(ctl, pl, &longer), ConfigError);
}

TEST(Metrics, DeficitsEffortAndCosts) {
  Fixture f;
  const Trajectory t = trained().path;
  const MetricsReport m = compute_metrics(t, f.game.players);
  for (double d : {m.power_deficit, m.health_deficit, m.ems_deficit}) {
    EXPECT_GE(d, 0.0);
    EXPECT_LE(d, 1.0);
  }
  double effort = 0.0;
  for (const auto& u : t.controls) effort += u.squaredNorm();
  EXPECT_NEAR(m.effort, effort, 1e-12);
  const auto j = trained().running_cost.back();
  for (int i = 0; i < 3; ++i) EXPECT_NEAR(m.per_player_cost[i], j[i], 1e-12);
  EXPECT_NEAR(m.total_cost, j[0] + j[1] + j[2], 1e-12);
}

TEST(Rmse, Basic) {
  std::vector<StateVector> a(3, StateVector::Zero()), b(3, StateVector::Constant(0.1));
  EXPECT_NEAR(trajectory_rmse(a, b), 0.1, 1e-15);
  EXPECT_THROW(trajectory_rmse(a, {}), ConfigError);
}

TEST(Deviation, DeterministicAndParallelMatchesSerial) {
  Fixture f;
  omp_set_num_threads(4);
  DeviationOptions opt;
  opt.n_perturb = 12;
  const auto a = deviation_test(trained().final_actor, f.scenario, f.game, opt);
  const auto b = deviation_test(trained().final_actor, f.scenario, f.game, opt);
  const auto s = deviation_test_serial(trained().final_actor, f.scenario, f.game, opt);
  ASSERT_EQ(a.entries.size(), 9u);
  for (std::size_t k = 0; k < a.entries.size(); ++k) {
    EXPECT_EQ(a.entries[k].best_cost, b.entries[k].best_cost);
    EXPECT_EQ(a.entries[k].best_cost, s.entries[k].best_cost);
    EXPECT_GE(*a.entries[k].exploitability_pct, 0.0);
  }
  ASSERT_NE(a.find(2, 0.10), nullptr);
  EXPECT_EQ(a.find(2, 0.10)->player, 2);
}

TEST(Deviation, ZeroWeightsHaveNoProfitableDeviation) {
  // |W_a| = 0 gives zero-size perturbations, so nothing beats the incumbent
  Fixture f;
  const auto r = deviation_test(PlayerWeights{}, f.scenario, f.game, {});
  for (const auto& e : r.entries) EXPECT_EQ(*e.exploitability_pct, 0.0);
}

TEST(Deviation, RejectsBadOptions) {
  Fixture f;
  DeviationOptions opt;
  opt.scales = {};
  EXPECT_THROW(deviation_test(PlayerWeights{}, f.scenario, f.game, opt), ConfigError);
  opt = {};
  opt.n_perturb = 0;
  EXPECT_THROW(deviation_test(PlayerWeights{}, f.scenario, f.game, opt), ConfigError);
}

TEST(Pe, RepeatedRegressorIsRankOne) {
  FeatureVector s = FeatureVector::Zero();
  s[3] = 2.0;
  s[10] = -1.0;
  const auto pe = pe_diagnostics(std::vector<FeatureVector>(8, s), 4);
  EXPECT_EQ(pe.effective_rank.back(), 1);
  EXPECT_NEAR(pe.min_eig.back(), 0.0, 1e-15);
}

TEST(Pe, OrthogonalRegressorsGiveExactRank) {
  std::vector<FeatureVector> trace;
  for (int k = 0; k < 9; ++k) {
    FeatureVector s = FeatureVector::Zero();
    s[k * 7] = 0.8;
    trace.push_back(s);
  }
  const auto pe = pe_diagnostics(trace, 3);
  for (int t = 0; t < 9; ++t) {
    EXPECT_EQ(pe.effective_rank[t], t + 1);
    EXPECT_EQ(pe.window_rank[t], std::min(t + 1, 3));
  }
}

TEST(Pe, RankMonotoneAndCovariancePsd) {
  const auto pe = pe_diagnostics(trained().regressors, 12);
  for (std::size_t t = 1; t < pe.effective_rank.size(); ++t)
    EXPECT_GE(pe.effective_rank[t], pe.effective_rank[t - 1]);
  for (double v : pe.min_eig) EXPECT_GE(v, -1e-12);
  EXPECT_LE(pe.effective_rank.back(), 17);
  EXPECT_THROW(pe_diagnostics({}, 3), ConfigError);
  EXPECT_THROW(pe_diagnostics(trained().regressors, 0), ConfigError);
}

TEST(Saturation, BoundaryBookkeeping) {
  Fixture f;
  Trajectory t = constant_fear(0.3, 4);
  t.raw = {Control(0.0, -0.5, 1.5), Control(0.2, 0.0, 0.5), Control(-1, 2, 0), Control(0.5, 0.5, 0.5)};
  t.clamped[1][kFear] = true;
  t.clamped[2][kFakeNews] = true;
  t.clamped[3][kFakeNews] = true;
  const auto s = saturation_stats(t, f.game.players);
  EXPECT_EQ(s.steps, 4);
  EXPECT_DOUBLE_EQ(s.exact_zero[0], 0.25);
  EXPECT_DOUBLE_EQ(s.lower[0], 0.25);
  EXPECT_DOUBLE_EQ(s.lower[1], 0.25);
  EXPECT_DOUBLE_EQ(s.upper[1], 0.25);
  EXPECT_DOUBLE_EQ(s.exact_zero[1], 0.25);
  EXPECT_DOUBLE_EQ(s.upper[2], 0.25);
  EXPECT_DOUBLE_EQ(s.state_clamp[kFear], 0.25);
  EXPECT_DOUBLE_EQ(s.state_clamp[kFakeNews], 0.5);
  EXPECT_EQ(s.state_clamp[kPower], 0.0);
}

TEST(Saturation, InteriorTrajectoryIsAllZero) {
  Fixture f;
  Trajectory t = constant_fear(0.3, 5);
  t.raw.assign(5, Control(0.3, 0.3, 0.3));
  const auto s = saturation_stats(t, f.game.players);
  for (int i = 0; i < 3; ++i) EXPECT_EQ(s.lower[i] + s.upper[i] + s.exact_zero[i], 0.0);
  for (double v : s.state_clamp) EXPECT_EQ(v, 0.0);
}

TEST(Perturbation, Parsing) {
  const auto a = parse_perturbation("beta1*2");
  EXPECT_EQ(a.name, "beta1");
  EXPECT_TRUE(a.multiply);
  EXPECT_EQ(a.value, 2.0);
  const auto b = parse_perturbation(" window_len = 3 ");
  EXPECT_EQ(b.name, "window_len");
  EXPECT_FALSE(b.multiply);
  EXPECT_TRUE(parse_perturbation("default").name.empty());
  EXPECT_THROW(parse_perturbation("betaX*2"), ConfigError);
  EXPECT_THROW(parse_perturbation("beta1*two"), ConfigError);
  EXPECT_THROW(parse_perturbation("beta1"), ConfigError);
}

TEST(Perturbation, Apply) {
  Fixture f;
  const SweepConfig base{f.scenario, f.params, {}, {}, {}};
  EXPECT_EQ(apply_perturbation(base, parse_perturbation("beta1*2")).params.beta1, 2 * f.params.beta1);
  EXPECT_EQ(apply_perturbation(base, parse_perturbation("q3_9*5")).weights.q3_9, 5.0);
  EXPECT_EQ(apply_perturbation(base, parse_perturbation("window_len=3")).scenario.window_len, 3);
  EXPECT_THROW(apply_perturbation(base, parse_perturbation("window_len=2.5")), ConfigError);
  EXPECT_THROW(apply_perturbation(base, parse_perturbation("alpha_a=0.9")), ConfigError);
}

TEST(Sensitivity, IdentityRowMatchesDefaultAndParallelMatchesSerial) {
  Fixture f;
  omp_set_num_threads(4);
  SweepConfig base{f.scenario, f.params, {}, {}, {}};
  base.deviation.n_perturb = 10;
  const std::vector<std::string> ps{"default", "beta1*1", "beta1*2", "beta1*0.5"};
  const auto par = sensitivity_sweep(base, ps);
  const auto ser = sensitivity_sweep_serial(base, ps);
  ASSERT_EQ(par.size(), 4u);
  for (std::size_t k = 0; k < ps.size(); ++k) {
    EXPECT_EQ(par[k].fear_reduction_pct, ser[k].fear_reduction_pct);
    EXPECT_EQ(par[k].exploitability_p1, ser[k].exploitability_p1);
  }
  EXPECT_EQ(par[0].fear_reduction_pct, par[1].fear_reduction_pct);
  EXPECT_EQ(par[0].label, "default");
  EXPECT_GT(*par[2].fear_reduction_pct, *par[0].fear_reduction_pct);
  EXPECT_LT(*par[3].fear_reduction_pct, *par[0].fear_reduction_pct);
}
