#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "cpsg/baselines.hpp"
#include "cpsg/calibration.hpp"
#include "cpsg/diagnostics.hpp"

namespace cpsg {

using Triple = std::array<double, kNumPlayers>;

/// Flat per-step record shared by every run kind; this is what trace CSVs hold.
/// `states` has one more entry than the per-step vectors. Observed-data tables
/// carry states only.
struct TraceTable {
  std::map<std::string, std::string> meta;  // run, label, dt, seed, ...
  std::vector<StateVector> states;
  std::vector<int> window;
  std::vector<Control> raw;
  std::vector<Control> controls;
  std::vector<Triple> eps;
  std::vector<Triple> wc_norm;
  std::vector<Triple> wa_norm;
  std::vector<Triple> cost;  // cumulative J_i after each step

  double dt() const;
  int steps() const { return static_cast<int>(controls.size()); }
  std::string run() const;
  std::string label() const;
};

TraceTable trace_table(const TrainingTrace& trace, int window_len);
/// Rollout without learning: residuals and weight norms are zero.
TraceTable trace_table(const Trajectory& traj, const Players& players, int window_len);
TraceTable observed_table(const std::vector<StateVector>& observed, double dt);

/// Columns t, window, x1..x10, u1_raw..u3_raw, u1..u3, eps1..eps3, Wc1..Wc3,
/// Wa1..Wa3, J1..J3, one row per state sample; the last row carries the final
/// state only. Metadata goes first as "# key=value" lines.
void write_trace_csv(std::ostream& os, const TraceTable& table);
TraceTable read_trace_csv(std::istream& is);
void save_trace_csv(const std::string& path, const TraceTable& table);
TraceTable load_trace_csv(const std::string& path);

/// Columns t, s1..s66.
void write_regressors_csv(std::ostream& os, const std::vector<FeatureVector>& regressors);
std::vector<FeatureVector> read_regressors_csv(std::istream& is);

/// Metrics from a stored trace; J_i come from the cumulative cost columns and
/// rmse from the "rmse" metadata entry when present.
MetricsReport table_metrics(const TraceTable& table, const TraceTable* reference = nullptr);

nlohmann::json to_json(const MetricsReport& m);
nlohmann::json to_json(const DeviationReport& d);
DeviationReport deviation_from_json(const nlohmann::json& j);
nlohmann::json to_json(const PeDiagnostics& pe);
nlohmann::json to_json(const SaturationStats& s);
nlohmann::json to_json(const SensitivityRow& r);
SensitivityRow sensitivity_row_from_json(const nlohmann::json& j);
nlohmann::json to_json(const TuneResult& r);

using LabeledMetrics = std::vector<std::pair<std::string, MetricsReport>>;

/// Metric rows, one column per run.
std::string metrics_markdown(const LabeledMetrics& runs);
/// method, fear reduction %, power deficit, EMS deficit, effort, sum J.
std::string comparison_markdown(const LabeledMetrics& runs);
std::string comparison_csv(const LabeledMetrics& runs);
/// Players by scale, exploitability % plus absolute improvement at the first scale.
std::string deviation_markdown(const DeviationReport& d);
std::string sensitivity_markdown(const std::vector<SensitivityRow>& rows);
std::string pe_markdown(const PeDiagnostics& pe);
std::string saturation_markdown(const SaturationStats& s);

/// Long-format figure tables with a leading `run` column.
std::string states_figure_csv(const std::vector<const TraceTable*>& tables);
std::string controls_figure_csv(const std::vector<const TraceTable*>& tables);
std::string residuals_figure_csv(const std::vector<const TraceTable*>& tables);
std::string weights_figure_csv(const std::vector<const TraceTable*>& tables);
std::string pe_figure_csv(const PeDiagnostics& pe);

struct Series {
  std::string name;
  std::vector<double> y;
};

/// Minimal SVG line plot; x is the sample index times dx.
std::string svg_line_plot(const std::string& title, const std::vector<Series>& series,
                          double dx = 1.0);

/// %.17g
std::string format_double(double v);

std::uint64_t fnv1a(const std::string& bytes);
std::string hex64(std::uint64_t h);
/// FNV-1a of the file contents as 16 hex digits. Throws on a missing file.
std::string file_hash(const std::string& path);

void write_text(const std::string& path, const std::string& text);
/// 2-space indented dump with sorted keys.
void write_json(const std::string& path, const nlohmann::json& j);
nlohmann::json read_json(const std::string& path);

}  // namespace cpsg
