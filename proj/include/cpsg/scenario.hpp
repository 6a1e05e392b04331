#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "cpsg/types.hpp"

namespace cpsg {

/// Per-step samples of the five exogenous drivers, all in [0,1].
struct ExogenousSignals {
  std::vector<double> severity;    // P_S
  std::vector<double> positivity;  // C_plus
  std::vector<double> d8;
  std::vector<double> d9;
  std::vector<double> d10;

  std::size_t length() const { return severity.size(); }
};

struct Scenario {
  std::string name;
  double dt = 1.0;
  int horizon = 1;
  int window_len = 1;
  /// Euler sub-steps per sample step. Must be >= 1.
  int substeps = 1;
  std::uint64_t seed = 0;
  StateVector x0 = StateVector::Zero();
  ExogenousSignals signals;
  std::optional<std::vector<StateVector>> observed;
  /// From this step on the drivers are held at this step's sample instead of
  /// the window snapshot. Set by `extended`; not serialized.
  std::optional<int> hold_from;
};

int window_index(int t, int window_len);

/// Signal samples at the first step of t's window.
SignalSnapshot frozen_signals(const ExogenousSignals& s, int t, int window_len);

/// Snapshot the dynamics see at step t of `scenario`.
SignalSnapshot snapshot_at(const Scenario& scenario, int t);

/// Throws ScenarioError naming the offending field (and index).
void validate(const Scenario& scenario);

Scenario scenario_from_json(const nlohmann::json& j);
nlohmann::json to_json(const Scenario& scenario);

Scenario load_scenario(const std::string& path);
void save_scenario(const Scenario& scenario, const std::string& path);

/// Reads an observed trajectory from CSV: optional header, ten columns per row.
std::vector<StateVector> load_observed_csv(const std::string& path);

/// Copy of `scenario` whose signals are padded with their last sample so the
/// horizon becomes `factor` times the original.
Scenario extended(const Scenario& scenario, int factor);

}  // namespace cpsg
