#include <sstream>

#include <gtest/gtest.h>

#include "cpsg/report.hpp"
#include "cpsg/synthetic.hpp"

using namespace cpsg;

namespace {

struct Fixture {
  CpsParams params = reference_params();
  Scenario scenario = make_harvey_synth(params);
  Game game{params, make_players(params)};
  TrainingTrace trace;
  Fixture() {
    LearnerState l = make_learner({}, scenario.seed);
    trace = run_game_loop(scenario, game, l);
  }
};

}  // namespace

TEST(Fnv, KnownVectors) {
  EXPECT_EQ(fnv1a(""), 0xcbf29ce484222325ULL);
  EXPECT_EQ(fnv1a("a"), 0xaf63dc4c8601ec8cULL);
  EXPECT_EQ(hex64(0xabcULL), "0000000000000abc");
}

TEST(FormatDouble, RoundTrips) {
  for (double v : {0.1, 1.0 / 3.0, 1e-300, -2.5e17}) EXPECT_EQ(std::stod(format_double(v)), v);
}

TEST(TraceCsv, HeaderAndRoundTrip) {
  Fixture f;
  TraceTable t = trace_table(f.trace, f.scenario.window_len);
  t.meta["run"] = "nzs";
  std::ostringstream os;
  write_trace_csv(os, t);
  const std::string text = os.str();
  EXPECT_NE(text.find("t,window,x1,x2,x3,x4,x5,x6,x7,x8,x9,x10,u1_raw,u2_raw,u3_raw,u1,u2,u3,"
                      "eps1,eps2,eps3,Wc1,Wc2,Wc3,Wa1,Wa2,Wa3,J1,J2,J3\n"),
            std::string::npos);
  std::istringstream is(text);
  const TraceTable back = read_trace_csv(is);
  EXPECT_EQ(back.run(), "nzs");
  ASSERT_EQ(back.states.size(), 18u);
  ASSERT_EQ(back.steps(), 17);
  for (std::size_t k = 0; k < t.states.size(); ++k) EXPECT_TRUE(back.states[k] == t.states[k]);
  for (int k = 0; k < 17; ++k) {
    EXPECT_TRUE(back.raw[k] == t.raw[k]);
    EXPECT_EQ(back.eps[k], t.eps[k]);
    EXPECT_EQ(back.cost[k], t.cost[k]);
    EXPECT_EQ(back.window[k], t.window[k]);
  }
  std::ostringstream again;
  write_trace_csv(again, back);
  EXPECT_EQ(again.str(), text);
}

TEST(TraceCsv, RejectsMalformedInput) {
  std::istringstream bad_header("a,b,c\n1,2,3\n");
  EXPECT_THROW(read_trace_csv(bad_header), ConfigError);
  std::istringstream empty("");
  EXPECT_THROW(read_trace_csv(empty), ConfigError);
}

TEST(TableMetrics, AgreesWithComputeMetrics) {
  Fixture f;
  const Trajectory ol = open_loop(f.scenario, f.game);
  const TraceTable t = trace_table(f.trace, f.scenario.window_len);
  const TraceTable r = trace_table(ol, f.game.players, f.scenario.window_len);
  const MetricsReport a = table_metrics(t, &r);
  const MetricsReport b = compute_metrics(f.trace.path, f.game.players, &ol);
  EXPECT_NEAR(a.mean_fear, b.mean_fear, 1e-15);
  EXPECT_NEAR(*a.fear_reduction_pct, *b.fear_reduction_pct, 1e-12);
  EXPECT_NEAR(a.effort, b.effort, 1e-12);
  EXPECT_NEAR(a.total_cost, b.total_cost, 1e-12);
  EXPECT_NEAR(table_metrics(r).total_cost, compute_metrics(ol, f.game.players).total_cost, 1e-12);
}

TEST(Regressors, CsvRoundTrip) {
  Fixture f;
  std::ostringstream os;
  write_regressors_csv(os, f.trace.regressors);
  std::istringstream is(os.str());
  const auto back = read_regressors_csv(is);
  ASSERT_EQ(back.size(), f.trace.regressors.size());
  for (std::size_t k = 0; k < back.size(); ++k) EXPECT_TRUE(back[k] == f.trace.regressors[k]);
}

TEST(Json, DeviationAndSensitivityRoundTrip) {
  DeviationReport d;
  d.n_perturb = 5;
  d.scales = {0.05, 0.1};
  d.entries.push_back({1, 0.05, 2.0, 1.9, 0.1, 5.0});
  d.entries.push_back({2, 0.05, 0.0, 0.1, -0.1, std::nullopt});
  const DeviationReport b = deviation_from_json(to_json(d));
  ASSERT_EQ(b.entries.size(), 2u);
  EXPECT_EQ(*b.entries[0].exploitability_pct, 5.0);
  EXPECT_FALSE(b.entries[1].exploitability_pct.has_value());

  SensitivityRow r{"beta1*2", 80.5, 0.087, 0.496, std::nullopt};
  const SensitivityRow rb = sensitivity_row_from_json(to_json(r));
  EXPECT_EQ(rb.label, "beta1*2");
  EXPECT_EQ(*rb.fear_reduction_pct, 80.5);
  EXPECT_FALSE(rb.exploitability_p1.has_value());
}

TEST(Markdown, TableShapes) {
  DeviationReport d;
  d.n_perturb = 50;
  d.scales = {0.05, 0.10, 0.20};
  for (int p = 1; p <= 3; ++p)
    for (double s : d.scales) d.entries.push_back({p, s, 1.0, 0.99, 0.01, 1.0});
  const std::string md = deviation_markdown(d);
  EXPECT_NE(md.find("| Player | 5% | 10% | 20% |"), std::string::npos);
  for (const char* p : {"| P1 |", "| P2 |", "| P3 |"}) EXPECT_NE(md.find(p), std::string::npos);

  MetricsReport m;
  m.fear_reduction_pct = 12.5;
  const std::string cmp = comparison_markdown({{"nzs", m}});
  EXPECT_NE(cmp.find("| nzs | 12.5 |"), std::string::npos);
  EXPECT_EQ(comparison_csv({{"nzs", m}}).substr(0, 7), "method,");
}

TEST(Svg, WellFormed) {
  const std::string svg = svg_line_plot("t", {{"a", {0.0, 1.0, 0.5}}, {"b", {2.0, 2.0}}});
  EXPECT_EQ(svg.rfind("<svg", 0), 0u);
  EXPECT_NE(svg.find("</svg>"), std::string::npos);
  EXPECT_NE(svg.find("polyline"), std::string::npos);
}
