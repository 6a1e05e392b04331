#include "cpsg/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <iterator>
#include <limits>
#include <sstream>

namespace cpsg {
namespace {

constexpr int kStateCols = kNumStates;

std::vector<std::string> trace_header() {
  std::vector<std::string> h{"t", "window"};
  for (int k = 1; k <= kNumStates; ++k) h.push_back("x" + std::to_string(k));
  for (int i = 1; i <= 3; ++i) h.push_back("u" + std::to_string(i) + "_raw");
  for (const char* p : {"u", "eps", "Wc", "Wa", "J"})
    for (int i = 1; i <= 3; ++i) h.push_back(p + std::to_string(i));
  return h;
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream ss(line);
  while (std::getline(ss, cur, sep)) out.push_back(cur);
  if (!line.empty() && line.back() == sep) out.emplace_back();
  return out;
}

double parse_double(const std::string& s, const std::string& where) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != s.size()) throw ConfigError(where + ": bad number '" + s + "'");
  return v;
}

void append_row(std::string& out, const std::vector<double>& values) {
  for (std::size_t k = 0; k < values.size(); ++k) {
    if (k) out += ',';
    out += format_double(values[k]);
  }
  out += '\n';
}

std::string opt_cell(const std::optional<double>& v, int digits) {
  if (!v) return "n/a";
  std::ostringstream os;
  os << std::fixed << std::setprecision(digits) << *v;
  return os.str();
}

std::string cell(double v, int digits) { return opt_cell(v, digits); }

nlohmann::json opt_json(const std::optional<double>& v) {
  return v ? nlohmann::json(*v) : nlohmann::json(nullptr);
}

std::optional<double> opt_from(const nlohmann::json& j, const char* key) {
  if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
  return j.at(key).get<double>();
}

double state_mean(const std::vector<StateVector>& s, int k, bool deficit) {
  double sum = 0.0;
  for (const auto& x : s) sum += deficit ? 1.0 - x[k] : x[k];
  return sum / static_cast<double>(s.size());
}

}  // namespace

double TraceTable::dt() const {
  auto it = meta.find("dt");
  return it == meta.end() ? 1.0 : parse_double(it->second, "trace metadata dt");
}

std::string TraceTable::run() const {
  auto it = meta.find("run");
  return it == meta.end() ? "" : it->second;
}

std::string TraceTable::label() const {
  auto it = meta.find("label");
  return it == meta.end() ? run() : it->second;
}

TraceTable trace_table(const TrainingTrace& trace, int window_len) {
  TraceTable t = trace_table(trace.path, Players{}, window_len);
  t.window = trace.window;
  t.eps = trace.residuals;
  t.wc_norm = trace.critic_norms;
  t.wa_norm = trace.actor_norms;
  t.cost = trace.running_cost;
  return t;
}

TraceTable trace_table(const Trajectory& traj, const Players& players, int window_len) {
  TraceTable t;
  t.meta["dt"] = format_double(traj.dt);
  t.states = traj.states;
  Triple cum{};
  for (int s = 0; s < traj.steps(); ++s) {
    t.window.push_back(window_index(s, window_len));
    t.raw.push_back(traj.raw[s]);
    t.controls.push_back(traj.controls[s]);
    t.eps.push_back({});
    t.wc_norm.push_back({});
    t.wa_norm.push_back({});
    for (int i = 0; i < kNumPlayers; ++i)
      if (players[i].active && !players[i].q.empty())
        cum[i] += running_cost(players[i], traj.states[s], traj.controls[s]) * traj.dt;
    t.cost.push_back(cum);
  }
  return t;
}

TraceTable observed_table(const std::vector<StateVector>& observed, double dt) {
  TraceTable t;
  t.meta["dt"] = format_double(dt);
  t.meta["run"] = "observed";
  t.states = observed;
  return t;
}

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_trace_csv(std::ostream& os, const TraceTable& t) {
  for (const auto& [k, v] : t.meta) os << "# " << k << '=' << v << '\n';
  const auto header = trace_header();
  for (std::size_t k = 0; k < header.size(); ++k) os << (k ? "," : "") << header[k];
  os << '\n';
  const int steps = t.steps();
  for (std::size_t s = 0; s < t.states.size(); ++s) {
    std::string row = std::to_string(s);
    const bool step = static_cast<int>(s) < steps;
    row += ',';
    if (step) row += std::to_string(t.window[s]);
    for (int k = 0; k < kStateCols; ++k) row += ',' + format_double(t.states[s][k]);
    auto put3 = [&](const double* v) {
      for (int i = 0; i < 3; ++i) {
        row += ',';
        if (step) row += format_double(v[i]);
      }
    };
    static const double kZero[3] = {0, 0, 0};
    put3(step ? t.raw[s].data() : kZero);
    put3(step ? t.controls[s].data() : kZero);
    put3(step ? t.eps[s].data() : kZero);
    put3(step ? t.wc_norm[s].data() : kZero);
    put3(step ? t.wa_norm[s].data() : kZero);
    put3(step ? t.cost[s].data() : kZero);
    os << row << '\n';
  }
}

TraceTable read_trace_csv(std::istream& is) {
  TraceTable t;
  const auto header = trace_header();
  std::string line;
  bool have_header = false;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line.rfind("# ", 0) == 0) {
      const auto eq = line.find('=');
      if (eq != std::string::npos) t.meta[line.substr(2, eq - 2)] = line.substr(eq + 1);
      continue;
    }
    const auto cells = split(line, ',');
    if (!have_header) {
      if (cells != header) throw ConfigError("trace csv: unexpected header '" + line + "'");
      have_header = true;
      continue;
    }
    const std::string where = "trace csv line " + std::to_string(lineno);
    if (cells.size() != header.size()) throw ConfigError(where + ": wrong column count");
    StateVector x;
    for (int k = 0; k < kNumStates; ++k) x[k] = parse_double(cells[2 + k], where);
    t.states.push_back(x);
    if (cells[1].empty()) continue;
    if (t.controls.size() + 1 != t.states.size())
      throw ConfigError(where + ": step row after a state-only row");
    t.window.push_back(static_cast<int>(parse_double(cells[1], where)));
    auto get3 = [&](int col) {
      return Triple{parse_double(cells[col], where), parse_double(cells[col + 1], where),
                    parse_double(cells[col + 2], where)};
    };
    const int base = 2 + kNumStates;
    const Triple r = get3(base), u = get3(base + 3);
    t.raw.emplace_back(r[0], r[1], r[2]);
    t.controls.emplace_back(u[0], u[1], u[2]);
    t.eps.push_back(get3(base + 6));
    t.wc_norm.push_back(get3(base + 9));
    t.wa_norm.push_back(get3(base + 12));
    t.cost.push_back(get3(base + 15));
  }
  if (!have_header) throw ConfigError("trace csv: missing header");
  if (t.states.empty()) throw ConfigError("trace csv: no rows");
  if (!t.controls.empty() && t.controls.size() + 1 != t.states.size())
    throw ConfigError("trace csv: expected exactly one final state-only row");
  return t;
}

void save_trace_csv(const std::string& path, const TraceTable& table) {
  std::ostringstream os;
  write_trace_csv(os, table);
  write_text(path, os.str());
}

TraceTable load_trace_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open trace file: " + path);
  try {
    return read_trace_csv(in);
  } catch (const ConfigError& e) {
    throw ConfigError(path + ": " + e.what());
  }
}

void write_regressors_csv(std::ostream& os, const std::vector<FeatureVector>& regressors) {
  os << 't';
  for (int k = 1; k <= Basis::kSize; ++k) os << ",s" << k;
  os << '\n';
  for (std::size_t t = 0; t < regressors.size(); ++t) {
    os << t;
    for (int k = 0; k < Basis::kSize; ++k) os << ',' << format_double(regressors[t][k]);
    os << '\n';
  }
}

std::vector<FeatureVector> read_regressors_csv(std::istream& is) {
  std::vector<FeatureVector> out;
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    if (line[0] == 't') continue;
    const auto cells = split(line, ',');
    const std::string where = "regressor csv line " + std::to_string(lineno);
    if (cells.size() != Basis::kSize + 1) throw ConfigError(where + ": expected 67 columns");
    FeatureVector s;
    for (int k = 0; k < Basis::kSize; ++k) s[k] = parse_double(cells[k + 1], where);
    out.push_back(s);
  }
  return out;
}

MetricsReport table_metrics(const TraceTable& t, const TraceTable* reference) {
  if (t.states.empty()) throw ConfigError("metrics: empty trace");
  MetricsReport m;
  m.mean_fear = mean_fear(t.states);
  m.power_deficit = state_mean(t.states, kPower, true);
  m.health_deficit = state_mean(t.states, kHealth, true);
  m.ems_deficit = state_mean(t.states, kEms, true);
  const double dt = t.dt();
  for (const auto& u : t.controls) m.effort += u.squaredNorm() * dt;
  if (!t.cost.empty()) m.per_player_cost = t.cost.back();
  m.total_cost = m.per_player_cost[0] + m.per_player_cost[1] + m.per_player_cost[2];
  if (reference) {
    if (reference->states.size() != t.states.size())
      throw ConfigError("metrics: reference trace length differs");
    m.fear_reduction_pct = fear_reduction(m.mean_fear, mean_fear(reference->states));
  }
  if (auto it = t.meta.find("rmse"); it != t.meta.end())
    m.rmse = parse_double(it->second, "trace metadata rmse");
  return m;
}

nlohmann::json to_json(const MetricsReport& m) {
  return {{"mean_fear", m.mean_fear},
          {"fear_reduction_pct", opt_json(m.fear_reduction_pct)},
          {"power_deficit", m.power_deficit},
          {"health_deficit", m.health_deficit},
          {"ems_deficit", m.ems_deficit},
          {"effort", m.effort},
          {"per_player_cost", m.per_player_cost},
          {"total_cost", m.total_cost},
          {"rmse", opt_json(m.rmse)}};
}

nlohmann::json to_json(const DeviationReport& d) {
  nlohmann::json entries = nlohmann::json::array();
  for (const auto& e : d.entries)
    entries.push_back({{"player", e.player},
                       {"scale", e.scale},
                       {"base_cost", e.base_cost},
                       {"best_cost", e.best_cost},
                       {"improvement", e.improvement},
                       {"exploitability_pct", opt_json(e.exploitability_pct)}});
  return {{"kind", "deviation"}, {"n_perturb", d.n_perturb}, {"scales", d.scales},
          {"entries", entries}};
}

DeviationReport deviation_from_json(const nlohmann::json& j) {
  DeviationReport d;
  d.n_perturb = j.at("n_perturb").get<int>();
  d.scales = j.at("scales").get<std::vector<double>>();
  for (const auto& e : j.at("entries")) {
    DeviationEntry x;
    x.player = e.at("player").get<int>();
    x.scale = e.at("scale").get<double>();
    x.base_cost = e.at("base_cost").get<double>();
    x.best_cost = e.at("best_cost").get<double>();
    x.improvement = e.at("improvement").get<double>();
    x.exploitability_pct = opt_from(e, "exploitability_pct");
    d.entries.push_back(x);
  }
  return d;
}

nlohmann::json to_json(const PeDiagnostics& pe) {
  return {{"kind", "pe"},
          {"window", pe.window},
          {"rank_tolerance", pe.rank_tolerance},
          {"min_eig", pe.min_eig},
          {"max_eig", pe.max_eig},
          {"effective_rank", pe.effective_rank},
          {"window_min_eig", pe.window_min_eig},
          {"window_rank", pe.window_rank}};
}

nlohmann::json to_json(const SaturationStats& s) {
  return {{"steps", s.steps},
          {"lower", s.lower},
          {"upper", s.upper},
          {"exact_zero", s.exact_zero},
          {"state_clamp", s.state_clamp}};
}

nlohmann::json to_json(const SensitivityRow& r) {
  return {{"label", r.label},
          {"fear_reduction_pct", opt_json(r.fear_reduction_pct)},
          {"power_deficit", r.power_deficit},
          {"ems_deficit", r.ems_deficit},
          {"exploitability_p1", opt_json(r.exploitability_p1)}};
}

SensitivityRow sensitivity_row_from_json(const nlohmann::json& j) {
  SensitivityRow r;
  r.label = j.at("label").get<std::string>();
  r.fear_reduction_pct = opt_from(j, "fear_reduction_pct");
  r.power_deficit = j.at("power_deficit").get<double>();
  r.ems_deficit = j.at("ems_deficit").get<double>();
  r.exploitability_p1 = opt_from(j, "exploitability_p1");
  return r;
}

nlohmann::json to_json(const TuneResult& r) {
  return {{"gains", {r.gains[0], r.gains[1], r.gains[2]}},
          {"total_cost", r.total_cost},
          {"evaluated", r.evaluated}};
}

std::string metrics_markdown(const LabeledMetrics& runs) {
  std::string s = "| Metric |";
  for (const auto& [label, m] : runs) s += " " + label + " |";
  s += "\n|---|";
  for (std::size_t k = 0; k < runs.size(); ++k) s += "---:|";
  s += '\n';
  auto row = [&](const char* name, auto get) {
    s += std::string("| ") + name + " |";
    for (const auto& [label, m] : runs) s += " " + get(m) + " |";
    s += '\n';
  };
  row("Mean fear (x1)", [](const MetricsReport& m) { return cell(m.mean_fear, 3); });
  row("Fear reduction %", [](const MetricsReport& m) { return opt_cell(m.fear_reduction_pct, 1); });
  row("Power deficit", [](const MetricsReport& m) { return cell(m.power_deficit, 3); });
  row("Health deficit", [](const MetricsReport& m) { return cell(m.health_deficit, 3); });
  row("EMS deficit", [](const MetricsReport& m) { return cell(m.ems_deficit, 3); });
  row("Control effort", [](const MetricsReport& m) { return cell(m.effort, 3); });
  for (int i = 0; i < kNumPlayers; ++i) {
    const std::string name = "J" + std::to_string(i + 1);
    row(name.c_str(), [i](const MetricsReport& m) { return cell(m.per_player_cost[i], 3); });
  }
  row("Total cost", [](const MetricsReport& m) { return cell(m.total_cost, 3); });
  row("RMSE", [](const MetricsReport& m) { return opt_cell(m.rmse, 4); });
  return s;
}

std::string comparison_markdown(const LabeledMetrics& runs) {
  std::string s =
      "| Method | Fear reduction % | Power deficit | EMS deficit | Effort | Total cost |\n"
      "|---|---:|---:|---:|---:|---:|\n";
  for (const auto& [label, m] : runs)
    s += "| " + label + " | " + opt_cell(m.fear_reduction_pct, 1) + " | " +
         cell(m.power_deficit, 3) + " | " + cell(m.ems_deficit, 3) + " | " + cell(m.effort, 3) +
         " | " + cell(m.total_cost, 3) + " |\n";
  return s;
}

std::string comparison_csv(const LabeledMetrics& runs) {
  std::string s = "method,fear_reduction_pct,power_deficit,ems_deficit,effort,total_cost\n";
  for (const auto& [label, m] : runs)
    s += label + "," + (m.fear_reduction_pct ? format_double(*m.fear_reduction_pct) : "") + "," +
         format_double(m.power_deficit) + "," + format_double(m.ems_deficit) + "," +
         format_double(m.effort) + "," + format_double(m.total_cost) + "\n";
  return s;
}

std::string deviation_markdown(const DeviationReport& d) {
  std::string s = "| Player |";
  for (double sc : d.scales) s += " " + cell(sc * 100.0, 0) + "% |";
  const double first = d.scales.empty() ? 0.0 : d.scales.front();
  s += " dJ at " + cell(first * 100.0, 0) + "% |\n|---|";
  for (std::size_t k = 0; k <= d.scales.size(); ++k) s += "---:|";
  s += '\n';
  for (int p = 1; p <= kNumPlayers; ++p) {
    if (!d.find(p, first)) continue;
    s += "| P" + std::to_string(p) + " |";
    for (double sc : d.scales) {
      const DeviationEntry* e = d.find(p, sc);
      s += " " + (e ? opt_cell(e->exploitability_pct, 2) : std::string("n/a")) + " |";
    }
    s += " " + cell(d.find(p, first)->improvement, 5) + " |\n";
  }
  s += "\nExploitability in percent of the unperturbed cost, " + std::to_string(d.n_perturb) +
       " random deviations per cell, floored at 0.\n";
  return s;
}

std::string sensitivity_markdown(const std::vector<SensitivityRow>& rows) {
  std::string s =
      "| Configuration | Fear reduction % | Power deficit | EMS deficit | P1 exploitability % |\n"
      "|---|---:|---:|---:|---:|\n";
  for (const auto& r : rows)
    s += "| " + r.label + " | " + opt_cell(r.fear_reduction_pct, 1) + " | " +
         cell(r.power_deficit, 3) + " | " + cell(r.ems_deficit, 3) + " | " +
         opt_cell(r.exploitability_p1, 2) + " |\n";
  return s;
}

std::string pe_markdown(const PeDiagnostics& pe) {
  std::ostringstream os;
  os << "Rank tolerance " << std::scientific << std::setprecision(0) << pe.rank_tolerance
     << " relative; window " << pe.window << " steps.\n\n";
  os << "| t | min eig | window min eig | effective rank | window rank |\n|---:|---:|---:|---:|---:|\n";
  os << std::setprecision(3);
  for (std::size_t t = 0; t < pe.min_eig.size(); ++t)
    os << "| " << t << " | " << pe.min_eig[t] << " | " << pe.window_min_eig[t] << " | "
       << pe.effective_rank[t] << " | " << pe.window_rank[t] << " |\n";
  return os.str();
}

std::string saturation_markdown(const SaturationStats& s) {
  std::string out = "| Player | lower % | upper % | exact zero % |\n|---|---:|---:|---:|\n";
  for (int i = 0; i < kNumPlayers; ++i)
    out += "| P" + std::to_string(i + 1) + " | " + cell(100 * s.lower[i], 1) + " | " +
           cell(100 * s.upper[i], 1) + " | " + cell(100 * s.exact_zero[i], 1) + " |\n";
  out += "\n| State | projection % |\n|---|---:|\n";
  for (int k = 0; k < kNumStates; ++k)
    out += "| x" + std::to_string(k + 1) + " | " + cell(100 * s.state_clamp[k], 1) + " |\n";
  return out;
}

std::string states_figure_csv(const std::vector<const TraceTable*>& tables) {
  std::string s = "run,t";
  for (int k = 1; k <= kNumStates; ++k) s += ",x" + std::to_string(k);
  s += '\n';
  for (const TraceTable* t : tables) {
    const double dt = t->dt();
    for (std::size_t i = 0; i < t->states.size(); ++i) {
      s += t->label() + ',';
      std::vector<double> v{static_cast<double>(i) * dt};
      for (int k = 0; k < kNumStates; ++k) v.push_back(t->states[i][k]);
      append_row(s, v);
    }
  }
  return s;
}

std::string controls_figure_csv(const std::vector<const TraceTable*>& tables) {
  std::string s = "run,t,u1_raw,u2_raw,u3_raw,u1,u2,u3\n";
  for (const TraceTable* t : tables) {
    for (int i = 0; i < t->steps(); ++i) {
      s += t->label() + ',';
      append_row(s, {i * t->dt(), t->raw[i][0], t->raw[i][1], t->raw[i][2], t->controls[i][0],
                     t->controls[i][1], t->controls[i][2]});
    }
  }
  return s;
}

std::string residuals_figure_csv(const std::vector<const TraceTable*>& tables) {
  std::string s = "run,t,eps1,eps2,eps3\n";
  for (const TraceTable* t : tables) {
    for (int i = 0; i < t->steps(); ++i) {
      s += t->label() + ',';
      append_row(s, {i * t->dt(), t->eps[i][0], t->eps[i][1], t->eps[i][2]});
    }
  }
  return s;
}

std::string weights_figure_csv(const std::vector<const TraceTable*>& tables) {
  std::string s = "run,t,Wc1,Wc2,Wc3,Wa1,Wa2,Wa3\n";
  for (const TraceTable* t : tables) {
    for (int i = 0; i < t->steps(); ++i) {
      s += t->label() + ',';
      append_row(s, {i * t->dt(), t->wc_norm[i][0], t->wc_norm[i][1], t->wc_norm[i][2],
                     t->wa_norm[i][0], t->wa_norm[i][1], t->wa_norm[i][2]});
    }
  }
  return s;
}

std::string pe_figure_csv(const PeDiagnostics& pe) {
  std::string s = "t,min_eig,window_min_eig,effective_rank,window_rank\n";
  for (std::size_t t = 0; t < pe.min_eig.size(); ++t)
    append_row(s, {static_cast<double>(t), pe.min_eig[t], pe.window_min_eig[t],
                   static_cast<double>(pe.effective_rank[t]),
                   static_cast<double>(pe.window_rank[t])});
  return s;
}

std::string svg_line_plot(const std::string& title, const std::vector<Series>& series, double dx) {
  static const char* kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd",
                                  "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};
  const double w = 640, h = 360, left = 50, right = 130, top = 30, bottom = 30;
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  std::size_t n = 1;
  for (const auto& s : series) {
    for (double v : s.y) {
      if (!std::isfinite(v)) continue;
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
    n = std::max(n, s.y.size());
  }
  if (!(hi > lo)) {
    lo = std::isfinite(lo) ? lo - 0.5 : 0.0;
    hi = lo + 1.0;
  }
  const double span_x = std::max<double>(1, n - 1) * dx;
  auto px = [&](double x) { return left + (w - left - right) * x / span_x; };
  auto py = [&](double y) { return h - bottom - (h - top - bottom) * (y - lo) / (hi - lo); };

  std::ostringstream os;
  os << std::setprecision(6);
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w << "\" height=\"" << h
     << "\" font-family=\"sans-serif\" font-size=\"11\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  os << "<text x=\"" << left << "\" y=\"18\" font-size=\"13\">" << title << "</text>\n";
  os << "<rect x=\"" << left << "\" y=\"" << top << "\" width=\"" << w - left - right
     << "\" height=\"" << h - top - bottom << "\" fill=\"none\" stroke=\"#999\"/>\n";
  os << "<text x=\"4\" y=\"" << top + 10 << "\">" << hi << "</text>\n";
  os << "<text x=\"4\" y=\"" << h - bottom << "\">" << lo << "</text>\n";
  for (std::size_t k = 0; k < series.size(); ++k) {
    const char* color = kColors[k % 10];
    os << "<polyline fill=\"none\" stroke=\"" << color << "\" points=\"";
    for (std::size_t i = 0; i < series[k].y.size(); ++i)
      if (std::isfinite(series[k].y[i])) os << px(i * dx) << ',' << py(series[k].y[i]) << ' ';
    os << "\"/>\n";
    os << "<text x=\"" << w - right + 8 << "\" y=\"" << top + 14 * (k + 1) << "\" fill=\""
       << color << "\">" << series[k].name << "</text>\n";
  }
  os << "</svg>\n";
  return os.str();
}

std::uint64_t fnv1a(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string hex64(std::uint64_t h) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string file_hash(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open file: " + path);
  const std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return hex64(fnv1a(bytes));
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write file: " + path);
  out << text;
  if (!out) throw ConfigError("write failed: " + path);
}

void write_json(const std::string& path, const nlohmann::json& j) {
  write_text(path, j.dump(2) + "\n");
}

nlohmann::json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open file: " + path);
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(path + ": " + e.what());
  }
}

}  // namespace cpsg
