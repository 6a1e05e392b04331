#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "cpsg/baselines.hpp"
#include "cpsg/calibration.hpp"
#include "cpsg/diagnostics.hpp"
#include "cpsg/report.hpp"
#include "cpsg/synthetic.hpp"

namespace fs = std::filesystem;
using namespace cpsg;

namespace {

constexpr const char* kVersion = "1.0.0";

const std::vector<std::string> kDefaultSweep{
    "default",  "q1_1*2",    "q1_1*0.5", "q3_9*5", "beta1*2",
    "beta1*0.5", "beta9*2", "window_len=3", "window_len=12"};

// Bookkeeping shared by every subcommand: inputs, outputs and the manifest.
class Run {
 public:
  Run(std::string command, std::string out_dir)
      : command_(std::move(command)), out_dir_(std::move(out_dir)) {
    fs::create_directories(out_dir_);
  }

  void input(const std::string& path) { inputs_[path] = file_hash(path); }

  std::string path(const std::string& name) const { return (fs::path(out_dir_) / name).string(); }

  // Relative --out names land under the output directory.
  std::string resolve(const std::string& name) const {
    return fs::path(name).is_absolute() ? name : path(name);
  }

  void text(const std::string& name, const std::string& body) {
    write_text(resolve(name), body);
    outputs_.push_back(name);
  }
  void json(const std::string& name, const nlohmann::json& j) {
    write_json(resolve(name), j);
    outputs_.push_back(name);
  }
  void trace(const std::string& name, TraceTable t) {
    t.meta["config_hash"] = config_hash_;
    if (seed_) t.meta["seed"] = std::to_string(*seed_);
    save_trace_csv(resolve(name), t);
    outputs_.push_back(name);
  }

  void set_config(const nlohmann::json& config) {
    config_ = config;
    config_hash_ = hex64(fnv1a(config.dump()));
  }
  void set_seed(std::uint64_t seed) { seed_ = seed; }
  void set_manifest_name(std::string name) { manifest_ = std::move(name); }
  const std::string& config_hash() const { return config_hash_; }

  void finish() {
    nlohmann::json out = nlohmann::json::object();
    for (const auto& name : outputs_) out[name] = file_hash(resolve(name));
    nlohmann::json m{{"command", command_},     {"version", kVersion},
                     {"config", config_},       {"config_hash", config_hash_},
                     {"inputs", inputs_},       {"outputs", out},
                     {"seed", seed_ ? nlohmann::json(*seed_) : nlohmann::json(nullptr)}};
    write_json(path("manifest_" + (manifest_.empty() ? command_ : manifest_) + ".json"), m);
  }

 private:
  std::string command_;
  std::string manifest_;
  std::string out_dir_;
  std::map<std::string, std::string> inputs_;
  std::vector<std::string> outputs_;
  nlohmann::json config_ = nlohmann::json::object();
  std::string config_hash_ = hex64(fnv1a("{}"));
  std::optional<std::uint64_t> seed_;
};

std::uint64_t seed_override(std::uint64_t seed) {
  const char* env = std::getenv("CPSG_SEED");
  if (!env || !*env) return seed;
  char* end = nullptr;
  const unsigned long long v = std::strtoull(env, &end, 10);
  if (*end != '\0') throw ConfigError(std::string("CPSG_SEED is not an integer: ") + env);
  return v;
}

Scenario read_scenario(Run& run, const std::string& path) {
  run.input(path);
  Scenario sc = load_scenario(path);
  sc.seed = seed_override(sc.seed);
  run.set_seed(sc.seed);
  return sc;
}

CpsParams read_params(Run& run, const std::string& path) {
  if (path.empty()) return reference_params();
  run.input(path);
  return load_params(path);
}

struct Hyper {
  LearnerConfig learner;
  CostWeights weights;
  nlohmann::json raw = nlohmann::json::object();
};

Hyper read_hyper(Run& run, const std::string& path) {
  Hyper h;
  if (path.empty()) return h;
  run.input(path);
  h.raw = read_json(path);
  h.learner = learner_config_from_json(h.raw);
  if (h.raw.contains("cost_weights")) h.weights = cost_weights_from_json(h.raw.at("cost_weights"));
  return h;
}

nlohmann::json hyper_json(const Hyper& h) {
  return {{"learner", to_json(h.learner)}, {"cost_weights", to_json(h.weights)}};
}

PlayerWeights read_actor(Run& run, const std::string& path) {
  run.input(path);
  const nlohmann::json j = read_json(path);
  return weights_from_json(j.contains("actor") ? j.at("actor") : j);
}

TraceTable labeled(TraceTable t, const std::string& run, const Scenario& sc) {
  t.meta["run"] = run;
  t.meta["label"] = run;
  t.meta["scenario"] = sc.name;
  return t;
}

std::string md_section(const std::string& title, const std::string& body) {
  return "## " + title + "\n\n" + body + "\n";
}

int window_steps(const LearnerConfig& c, double dt) {
  return std::max(1, static_cast<int>(std::lround(c.t_explore / dt)));
}

// calibrate ------------------------------------------------------------------

struct CalibrateArgs {
  std::string scenario, out = "params.json";
  double lambda = 0.01;
  int max_iters = 500;
};

int cmd_calibrate(const CalibrateArgs& a, Run& run) {
  const Scenario sc = read_scenario(run, a.scenario);
  if (!sc.observed) throw ScenarioError(a.scenario + ": calibration needs an observed block");
  FitOptions opt;
  opt.lambda = a.lambda;
  opt.max_iters = a.max_iters;
  run.set_config({{"command", "calibrate"},
                  {"scenario", to_json(sc)},
                  {"lambda", a.lambda},
                  {"max_iters", a.max_iters}});
  const FitResult fit_result = fit(calibration_data(sc), opt);
  nlohmann::json rep = to_json(fit_result.report);
  rep["openloop_rmse"] = openloop_rmse(fit_result.params, sc);
  rep["lambda"] = a.lambda;
  run.json(a.out, to_json(fit_result.params));
  run.json("fit_report.json", rep);
  if (!fit_result.report.warning.empty()) std::cerr << "warning: " << fit_result.report.warning << "\n";
  std::cout << "loss " << format_double(fit_result.report.final_loss) << " after "
            << fit_result.report.iterations << " iterations, open-loop rmse "
            << format_double(rep["openloop_rmse"].get<double>()) << "\n";
  return 0;
}

// simulate -------------------------------------------------------------------

struct SimulateArgs {
  std::string scenario, params, weights;
  bool openloop = false;
};

int cmd_simulate(const SimulateArgs& a, Run& run) {
  const Scenario sc = read_scenario(run, a.scenario);
  const CpsParams params = read_params(run, a.params);
  const Game game{params, make_players(params)};
  const bool policy = !a.openloop && !a.weights.empty();
  PlayerWeights w{};
  if (policy) w = read_actor(run, a.weights);
  run.set_config({{"command", "simulate"},
                  {"scenario", to_json(sc)},
                  {"params", to_json(params)},
                  {"policy", policy ? weights_to_json(w) : nlohmann::json(nullptr)}});

  const Trajectory ol = open_loop(sc, game);
  const Trajectory traj = policy ? rollout(sc, game, actor_policy(w, game.players)) : ol;
  const std::string name = policy ? "policy" : "openloop";
  TraceTable t = labeled(trace_table(traj, game.players, sc.window_len), name, sc);
  const MetricsReport m =
      compute_metrics(traj, game.players, &ol, sc.observed ? &*sc.observed : nullptr);
  if (m.rmse) t.meta["rmse"] = format_double(*m.rmse);
  run.trace(name + ".csv", t);
  if (sc.observed) run.trace("observed.csv", labeled(observed_table(*sc.observed, sc.dt), "observed", sc));
  run.json(name + "_metrics.json", to_json(m));
  run.text(name + "_summary.md", md_section("Metrics", metrics_markdown({{name, m}})));
  if (m.rmse) std::cout << "rmse " << format_double(*m.rmse) << "\n";
  return 0;
}

// train ----------------------------------------------------------------------

struct TrainArgs {
  std::string scenario, params, hyper;
  int extend = 2;
};

int cmd_train(const TrainArgs& a, Run& run) {
  const Scenario sc = read_scenario(run, a.scenario);
  const CpsParams params = read_params(run, a.params);
  const Hyper h = read_hyper(run, a.hyper);
  if (a.extend < 0) throw ConfigError("--extend must be >= 0");
  const Game game{params, make_players(params, h.weights)};
  run.set_config({{"command", "train"},
                  {"scenario", to_json(sc)},
                  {"params", to_json(params)},
                  {"hyper", hyper_json(h)},
                  {"extend", a.extend}});

  LearnerState learner = make_learner(h.learner, sc.seed);
  const TrainingTrace trace = run_game_loop(sc, game, learner);
  const Trajectory ol = open_loop(sc, game);
  const MetricsReport m = compute_metrics(trace.path, game.players, &ol);
  const MetricsReport mo =
      compute_metrics(ol, game.players, &ol, sc.observed ? &*sc.observed : nullptr);
  const PeDiagnostics pe = pe_diagnostics(trace.regressors, window_steps(h.learner, sc.dt));
  const SaturationStats sat = saturation_stats(trace.path, game.players);

  run.trace("trace.csv", labeled(trace_table(trace, sc.window_len), "nzs", sc));
  TraceTable olt = labeled(trace_table(ol, game.players, sc.window_len), "openloop", sc);
  if (mo.rmse) olt.meta["rmse"] = format_double(*mo.rmse);
  run.trace("openloop.csv", olt);
  {
    std::ostringstream os;
    write_regressors_csv(os, trace.regressors);
    run.text("regressors.csv", os.str());
  }
  run.json("weights.json", {{"critic", weights_to_json(trace.final_critic)},
                            {"actor", weights_to_json(trace.final_actor)}});
  run.json("metrics.json", {{"nzs", to_json(m)},
                            {"openloop", to_json(mo)},
                            {"saturation", to_json(sat)},
                            {"invariance_violations", trace.path.invariance_violations}});
  run.json("pe.json", to_json(pe));

  std::string md = md_section("Metrics", metrics_markdown({{"openloop", mo}, {"nzs", m}}));
  md += md_section("Saturation and projection", saturation_markdown(sat));
  md += md_section("Excitation", pe_markdown(pe));
  if (a.extend > 0) {
    const Trajectory ext = extended_rollout(trace.final_actor, sc, game, a.extend);
    run.trace("extended.csv",
              labeled(trace_table(ext, game.players, sc.window_len), "extended", sc));
  }
  run.text("summary.md", md);
  std::cout << "fear reduction " << (m.fear_reduction_pct ? format_double(*m.fear_reduction_pct) : "n/a")
            << "% total cost " << format_double(m.total_cost) << "\n";
  return 0;
}

// baseline -------------------------------------------------------------------

struct BaselineArgs {
  std::string scenario, params, hyper, method;
  std::vector<double> grid;
};

int cmd_baseline(const BaselineArgs& a, Run& run) {
  const Scenario sc = read_scenario(run, a.scenario);
  const CpsParams params = read_params(run, a.params);
  const Hyper h = read_hyper(run, a.hyper);
  const Game game{params, make_players(params, h.weights)};
  run.set_manifest_name("baseline_" + a.method);
  const std::vector<double> grid = a.grid.empty() ? default_gain_grid() : a.grid;
  run.set_config({{"command", "baseline"},
                  {"method", a.method},
                  {"scenario", to_json(sc)},
                  {"params", to_json(params)},
                  {"hyper", hyper_json(h)},
                  {"grid", grid}});

  const Trajectory ol = open_loop(sc, game);
  TraceTable t;
  nlohmann::json extra = nlohmann::json::object();
  if (a.method == "constmax") {
    t = trace_table(rollout(sc, game, constant_max_controller(game.players)), game.players,
                    sc.window_len);
  } else if (a.method == "proportional") {
    const TuneResult best = tune_proportional(sc, game, grid);
    extra["tune"] = to_json(best);
    t = trace_table(rollout(sc, game, proportional_controller(best.gains)), game.players,
                    sc.window_len);
  } else {
    t = trace_table(centralized_ac(sc, game, h.learner), sc.window_len);
  }
  t = labeled(std::move(t), a.method, sc);
  const MetricsReport m = table_metrics(t, nullptr);
  MetricsReport mr = m;
  mr.fear_reduction_pct = fear_reduction(m.mean_fear, mean_fear(ol.states));
  extra["metrics"] = to_json(mr);
  run.trace("baseline_" + a.method + ".csv", t);
  run.json("baseline_" + a.method + ".json", extra);
  std::cout << a.method << " effort " << format_double(mr.effort) << " total cost "
            << format_double(mr.total_cost) << "\n";
  return 0;
}

// deviate --------------------------------------------------------------------

struct DeviateArgs {
  std::string scenario, params, hyper, weights;
  int n = 50;
  std::vector<double> scales{0.05, 0.10, 0.20};
};

int cmd_deviate(const DeviateArgs& a, Run& run) {
  const Scenario sc = read_scenario(run, a.scenario);
  const CpsParams params = read_params(run, a.params);
  const Hyper h = read_hyper(run, a.hyper);
  const PlayerWeights actor = read_actor(run, a.weights);
  const Game game{params, make_players(params, h.weights)};
  DeviationOptions opt;
  opt.n_perturb = a.n;
  opt.scales = a.scales;
  opt.seed = sc.seed;
  run.set_config({{"command", "deviate"},
                  {"scenario", to_json(sc)},
                  {"params", to_json(params)},
                  {"hyper", hyper_json(h)},
                  {"weights", weights_to_json(actor)},
                  {"n", a.n},
                  {"scales", a.scales}});
  const DeviationReport d = deviation_test(actor, sc, game, opt);
  run.json("deviation.json", to_json(d));
  run.text("deviation.md", md_section("Unilateral deviation", deviation_markdown(d)));
  std::cout << deviation_markdown(d);
  return 0;
}

// pe-diag --------------------------------------------------------------------

int cmd_pe(const std::string& trace, int window, Run& run) {
  run.input(trace);
  std::ifstream in(trace);
  if (!in) throw ConfigError("cannot open trace file: " + trace);
  const PeDiagnostics pe = pe_diagnostics(read_regressors_csv(in), window);
  run.set_config({{"command", "pe-diag"}, {"window", window}});
  run.json("pe.json", to_json(pe));
  run.text("pe.md", md_section("Excitation", pe_markdown(pe)));
  run.text("fig6_pe.csv", pe_figure_csv(pe));
  std::cout << "effective rank " << pe.effective_rank.back() << " min eigenvalue "
            << format_double(pe.min_eig.back()) << "\n";
  return 0;
}

// sensitivity ----------------------------------------------------------------

struct SensitivityArgs {
  std::string scenario, params, hyper;
  std::vector<std::string> perturb = kDefaultSweep;
  int n = 50;
};

int cmd_sensitivity(const SensitivityArgs& a, Run& run) {
  const Scenario sc = read_scenario(run, a.scenario);
  const Hyper h = read_hyper(run, a.hyper);
  SweepConfig base{sc, read_params(run, a.params), h.weights, h.learner, {}};
  base.deviation.n_perturb = a.n;
  base.deviation.seed = sc.seed;
  run.set_config({{"command", "sensitivity"},
                  {"scenario", to_json(sc)},
                  {"params", to_json(base.params)},
                  {"hyper", hyper_json(h)},
                  {"perturb", a.perturb},
                  {"n", a.n}});
  const auto rows = sensitivity_sweep(base, a.perturb);
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& r : rows) arr.push_back(to_json(r));
  run.json("sensitivity.json", {{"kind", "sensitivity"}, {"rows", arr}});
  run.text("sensitivity.md", md_section("Sensitivity", sensitivity_markdown(rows)));
  std::cout << sensitivity_markdown(rows);
  return 0;
}

// report ---------------------------------------------------------------------

std::string first_data_line(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open file: " + path);
  std::string line;
  while (std::getline(in, line))
    if (!line.empty() && line[0] != '#') return line;
  return "";
}

int cmd_report(const std::vector<std::string>& files, int pe_window, bool svg, Run& run) {
  std::vector<TraceTable> traces;
  std::vector<PeDiagnostics> pes;
  std::vector<DeviationReport> deviations;
  std::vector<SensitivityRow> sensitivity;
  for (const auto& f : files) {
    run.input(f);
    if (fs::path(f).extension() == ".csv") {
      const std::string head = first_data_line(f);
      if (head.rfind("t,window,x1", 0) == 0) {
        traces.push_back(load_trace_csv(f));
      } else if (head.rfind("t,s1", 0) == 0) {
        std::ifstream in(f);
        pes.push_back(pe_diagnostics(read_regressors_csv(in), pe_window));
      } else {
        throw ConfigError(f + ": not a trace or regressor csv");
      }
      continue;
    }
    const nlohmann::json j = read_json(f);
    const std::string kind = j.value("kind", "");
    if (kind == "deviation") {
      deviations.push_back(deviation_from_json(j));
    } else if (kind == "sensitivity") {
      for (const auto& r : j.at("rows")) sensitivity.push_back(sensitivity_row_from_json(r));
    } else {
      throw ConfigError(f + ": unrecognized report input (kind '" + kind + "')");
    }
  }
  run.set_config({{"command", "report"}, {"files", files}, {"pe_window", pe_window}});

  // unique labels, first-seen order
  std::map<std::string, int> seen;
  for (auto& t : traces) {
    const std::string base = t.label().empty() ? "run" : t.label();
    const int k = seen[base]++;
    t.meta["label"] = k == 0 ? base : base + "#" + std::to_string(k + 1);
  }

  const TraceTable* reference = nullptr;
  for (const auto& t : traces)
    if (t.run() == "openloop") {
      reference = &t;
      break;
    }

  LabeledMetrics runs;
  std::vector<const TraceTable*> main_panel, extended_panel, stepped;
  nlohmann::json metrics_json = nlohmann::json::object();
  for (const auto& t : traces) {
    (t.run() == "extended" ? extended_panel : main_panel).push_back(&t);
    if (t.steps() == 0) continue;
    stepped.push_back(&t);
    if (t.run() == "extended") continue;
    const bool same = reference && reference->states.size() == t.states.size();
    const MetricsReport m = table_metrics(t, same ? reference : nullptr);
    runs.emplace_back(t.label(), m);
    metrics_json[t.label()] = to_json(m);
  }

  std::string md = "# Run report\n\n";
  if (!runs.empty()) {
    md += md_section("Performance", metrics_markdown(runs));
    md += md_section("Controller comparison", comparison_markdown(runs));
    run.text("comparison.csv", comparison_csv(runs));
  }
  if (!sensitivity.empty()) md += md_section("Sensitivity", sensitivity_markdown(sensitivity));
  for (const auto& d : deviations) md += md_section("Unilateral deviation", deviation_markdown(d));
  for (const auto& pe : pes) md += md_section("Excitation", pe_markdown(pe));

  run.text("report.md", md);
  run.json("report.json", {{"metrics", metrics_json}});
  if (!main_panel.empty()) run.text("fig1_states.csv", states_figure_csv(main_panel));
  if (!extended_panel.empty()) run.text("fig2_extended.csv", states_figure_csv(extended_panel));
  if (!stepped.empty()) {
    run.text("fig3_controls.csv", controls_figure_csv(stepped));
    run.text("fig4_residuals.csv", residuals_figure_csv(stepped));
    run.text("fig5_weights.csv", weights_figure_csv(stepped));
  }
  if (!pes.empty()) run.text("fig6_pe.csv", pe_figure_csv(pes.front()));

  if (svg) {
    std::vector<Series> fear;
    for (const TraceTable* t : main_panel) {
      Series s{t->label(), {}};
      for (const auto& x : t->states) s.y.push_back(x[kFear]);
      fear.push_back(s);
    }
    if (!fear.empty()) run.text("fig1_fear.svg", svg_line_plot("Fear x1", fear));
    for (const TraceTable* t : stepped) {
      if (t->run() != "nzs" && t->run() != "centralized") continue;
      std::vector<Series> u(3), eps(3), w(6);
      for (int i = 0; i < 3; ++i) {
        u[i].name = "u" + std::to_string(i + 1);
        eps[i].name = "eps" + std::to_string(i + 1);
        w[i].name = "Wc" + std::to_string(i + 1);
        w[i + 3].name = "Wa" + std::to_string(i + 1);
        for (int s = 0; s < t->steps(); ++s) {
          u[i].y.push_back(t->controls[s][i]);
          eps[i].y.push_back(t->eps[s][i]);
          w[i].y.push_back(t->wc_norm[s][i]);
          w[i + 3].y.push_back(t->wa_norm[s][i]);
        }
      }
      const std::string tag = t->label();
      run.text("fig3_controls_" + tag + ".svg", svg_line_plot("Controls " + tag, u));
      run.text("fig4_residuals_" + tag + ".svg", svg_line_plot("Bellman residuals " + tag, eps));
      run.text("fig5_weights_" + tag + ".svg", svg_line_plot("Weight norms " + tag, w));
    }
    if (!pes.empty())
      run.text("fig6_pe.svg", svg_line_plot("Minimum eigenvalue",
                                             {{"running", pes.front().min_eig},
                                              {"windowed", pes.front().window_min_eig}}));
  }
  std::cout << md;
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Disaster-response CPS simulator and three-player actor-critic game learner"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);
  app.failure_message(CLI::FailureMessage::help);
  std::string out_dir = "out";
  app.add_option("--out-dir", out_dir, "Directory for all outputs")->capture_default_str();

  CalibrateArgs ca;
  auto* cal = app.add_subcommand("calibrate", "Fit dynamics parameters to observed data");
  cal->add_option("scenario", ca.scenario, "Scenario JSON with an observed block")->required()->check(CLI::ExistingFile);
  cal->add_option("--lambda", ca.lambda, "Tikhonov weight")->capture_default_str()->check(CLI::NonNegativeNumber);
  cal->add_option("--out", ca.out, "Fitted parameter file")->capture_default_str();
  cal->add_option("--max-iters", ca.max_iters, "Iteration cap")->capture_default_str()->check(CLI::PositiveNumber);

  SimulateArgs sa;
  auto* sim = app.add_subcommand("simulate", "Roll out the dynamics open loop or under frozen weights");
  sim->add_option("scenario", sa.scenario)->required()->check(CLI::ExistingFile);
  sim->add_option("--params", sa.params, "Parameter JSON")->required()->check(CLI::ExistingFile);
  sim->add_flag("--openloop", sa.openloop, "Zero control");
  sim->add_option("--weights", sa.weights, "Trained weights JSON")->check(CLI::ExistingFile);

  TrainArgs ta;
  auto* train = app.add_subcommand("train", "Run the online actor-critic game");
  train->add_option("scenario", ta.scenario)->required()->check(CLI::ExistingFile);
  train->add_option("--params", ta.params, "Parameter JSON")->required()->check(CLI::ExistingFile);
  train->add_option("--hyper", ta.hyper, "Hyperparameter JSON")->check(CLI::ExistingFile);
  train->add_option("--extend", ta.extend, "Horizon multiple for the frozen-policy continuation (0 = none)")
      ->capture_default_str();

  BaselineArgs ba;
  auto* base = app.add_subcommand("baseline", "Run a comparison controller");
  base->add_option("scenario", ba.scenario)->required()->check(CLI::ExistingFile);
  base->add_option("--method", ba.method)->required()->check(
      CLI::IsMember({"constmax", "proportional", "centralized"}));
  base->add_option("--params", ba.params, "Parameter JSON (default: bundled reference)")
      ->check(CLI::ExistingFile);
  base->add_option("--hyper", ba.hyper, "Hyperparameter JSON")->check(CLI::ExistingFile);
  base->add_option("--grid", ba.grid, "Gain grid values for the proportional search")->delimiter(',');

  DeviateArgs da;
  auto* dev = app.add_subcommand("deviate", "Unilateral deviation test of trained weights");
  dev->add_option("scenario", da.scenario)->required()->check(CLI::ExistingFile);
  dev->add_option("--weights", da.weights)->required()->check(CLI::ExistingFile);
  dev->add_option("--n", da.n, "Perturbations per player and scale")->capture_default_str()->check(CLI::PositiveNumber);
  dev->add_option("--scales", da.scales, "Relative perturbation sizes")->delimiter(',')->capture_default_str();
  dev->add_option("--params", da.params, "Parameter JSON (default: bundled reference)")
      ->check(CLI::ExistingFile);
  dev->add_option("--hyper", da.hyper, "Hyperparameter JSON")->check(CLI::ExistingFile);

  std::string pe_trace;
  int pe_window = 12;
  auto* pe = app.add_subcommand("pe-diag", "Excitation diagnostics of a regressor trace");
  pe->add_option("--trace", pe_trace, "Regressor CSV written by train")->required()->check(CLI::ExistingFile);
  pe->add_option("--window", pe_window, "Sliding window in steps")->capture_default_str()->check(CLI::PositiveNumber);

  SensitivityArgs sens;
  auto* sw = app.add_subcommand("sensitivity", "Retrain under parameter perturbations");
  sw->add_option("scenario", sens.scenario)->required()->check(CLI::ExistingFile);
  sw->add_option("--params", sens.params, "Parameter JSON")->required()->check(CLI::ExistingFile);
  sw->add_option("--hyper", sens.hyper, "Hyperparameter JSON")->check(CLI::ExistingFile);
  sw->add_option("--perturb", sens.perturb, "e.g. beta1*2, window_len=3")->delimiter(',')->capture_default_str();
  sw->add_option("--n", sens.n, "Deviation samples for the player 1 column")->capture_default_str()->check(CLI::PositiveNumber);

  std::vector<std::string> report_files;
  int report_window = 12;
  bool report_svg = false;
  auto* rep = app.add_subcommand("report", "Merge run outputs into tables and figure data");
  rep->add_option("--traces", report_files, "Trace CSVs, regressor CSVs, deviation or sensitivity JSON")
      ->required()->check(CLI::ExistingFile);
  rep->add_option("--pe-window", report_window, "Window for regressor inputs")->capture_default_str();
  rep->add_flag("--svg", report_svg, "Also write SVG line plots");

  CLI11_PARSE(app, argc, argv);

  try {
    auto* sub = app.get_subcommands().front();
    Run run(sub->get_name(), out_dir);
    int rc = 0;
    if (sub == cal) rc = cmd_calibrate(ca, run);
    else if (sub == sim) rc = cmd_simulate(sa, run);
    else if (sub == train) rc = cmd_train(ta, run);
    else if (sub == base) rc = cmd_baseline(ba, run);
    else if (sub == dev) rc = cmd_deviate(da, run);
    else if (sub == pe) rc = cmd_pe(pe_trace, pe_window, run);
    else if (sub == sw) rc = cmd_sensitivity(sens, run);
    else rc = cmd_report(report_files, report_window, report_svg, run);
    run.finish();
    return rc;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
