#include "cpsg/scenario.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace cpsg {
namespace {

struct NamedSeries {
  const char* name;
  const std::vector<double>* values;
};

std::array<NamedSeries, 5> named(const ExogenousSignals& s) {
  return {{{"P_S", &s.severity},
           {"C_plus", &s.positivity},
           {"d8", &s.d8},
           {"d9", &s.d9},
           {"d10", &s.d10}}};
}

void check_unit(double v, const std::string& where) {
  if (!(v >= 0.0 && v <= 1.0)) {
    std::ostringstream os;
    os << where << " = " << v << " is outside [0,1]";
    throw ScenarioError(os.str());
  }
}

StateVector read_state(const nlohmann::json& arr, const std::string& where) {
  if (!arr.is_array() || arr.size() != kNumStates)
    throw ScenarioError(where + " must be an array of 10 numbers");
  StateVector x;
  for (int k = 0; k < kNumStates; ++k) {
    if (!arr[k].is_number())
      throw ScenarioError(where + "[" + std::to_string(k) + "] is not a number");
    x[k] = arr[k].get<double>();
  }
  return x;
}

std::vector<double> read_series(const nlohmann::json& sig, const char* key) {
  if (!sig.contains(key)) throw ScenarioError(std::string("missing field signals.") + key);
  const auto& arr = sig.at(key);
  if (!arr.is_array()) throw ScenarioError(std::string("signals.") + key + " must be an array");
  std::vector<double> out;
  out.reserve(arr.size());
  for (std::size_t i = 0; i < arr.size(); ++i) {
    if (!arr[i].is_number()) {
      throw ScenarioError(std::string("signals.") + key + "[" + std::to_string(i) +
                          "] is not a number");
    }
    out.push_back(arr[i].get<double>());
  }
  return out;
}

const nlohmann::json& require(const nlohmann::json& j, const char* key) {
  if (!j.contains(key)) throw ScenarioError(std::string("missing field ") + key);
  return j.at(key);
}

}  // namespace

int window_index(int t, int window_len) { return t / window_len; }

SignalSnapshot frozen_signals(const ExogenousSignals& s, int t, int window_len) {
  if (t < 0 || static_cast<std::size_t>(t) >= s.length()) {
    throw ScenarioError("signal index " + std::to_string(t) + " out of range (length " +
                        std::to_string(s.length()) + ")");
  }
  const std::size_t start =
      static_cast<std::size_t>(window_index(t, window_len)) * static_cast<std::size_t>(window_len);
  return {s.severity[start], s.positivity[start], s.d8[start], s.d9[start], s.d10[start]};
}

SignalSnapshot snapshot_at(const Scenario& scenario, int t) {
  if (scenario.hold_from && t >= *scenario.hold_from)
    return frozen_signals(scenario.signals, *scenario.hold_from, 1);
  return frozen_signals(scenario.signals, t, scenario.window_len);
}

void validate(const Scenario& sc) {
  if (sc.horizon < 1) throw ScenarioError("horizon must be >= 1");
  if (sc.window_len < 1) throw ScenarioError("window_len must be >= 1");
  if (sc.substeps < 1) throw ScenarioError("substeps must be >= 1");
  if (!(sc.dt > 0.0) || !std::isfinite(sc.dt)) throw ScenarioError("dt must be > 0");
  for (int k = 0; k < kNumStates; ++k) check_unit(sc.x0[k], "x0[" + std::to_string(k) + "]");

  const std::size_t needed = static_cast<std::size_t>(sc.horizon) + 1;
  const std::size_t len = sc.signals.length();
  for (const auto& [name, values] : named(sc.signals)) {
    if (values->size() != len) {
      throw ScenarioError(std::string("signals.") + name + " has length " +
                          std::to_string(values->size()) + ", expected " +
                          std::to_string(len));
    }
    if (values->size() < needed) {
      throw ScenarioError(std::string("signals.") + name + " has length " +
                          std::to_string(values->size()) + ", need at least horizon+1 = " +
                          std::to_string(needed));
    }
    for (std::size_t i = 0; i < values->size(); ++i)
      check_unit((*values)[i], std::string("signals.") + name + "[" + std::to_string(i) + "]");
  }

  if (sc.observed) {
    if (sc.observed->size() != needed) {
      throw ScenarioError("observed has length " + std::to_string(sc.observed->size()) +
                          ", expected horizon+1 = " + std::to_string(needed));
    }
    for (std::size_t i = 0; i < sc.observed->size(); ++i) {
      for (int k = 0; k < kNumStates; ++k) {
        check_unit((*sc.observed)[i][k],
                   "observed[" + std::to_string(i) + "][" + std::to_string(k) + "]");
      }
    }
  }
}

Scenario scenario_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw ScenarioError("scenario must be a JSON object");
  Scenario sc;
  try {
    sc.name = require(j, "name").get<std::string>();
    sc.dt = require(j, "dt").get<double>();
    sc.horizon = require(j, "horizon").get<int>();
    sc.window_len = require(j, "window_len").get<int>();
    sc.seed = require(j, "seed").get<std::uint64_t>();
    sc.substeps = j.value("substeps", 1);
    sc.x0 = read_state(require(j, "x0"), "x0");
    const auto& sig = require(j, "signals");
    sc.signals.severity = read_series(sig, "P_S");
    sc.signals.positivity = read_series(sig, "C_plus");
    sc.signals.d8 = read_series(sig, "d8");
    sc.signals.d9 = read_series(sig, "d9");
    sc.signals.d10 = read_series(sig, "d10");
    if (j.contains("observed") && !j.at("observed").is_null()) {
      const auto& obs = j.at("observed");
      if (!obs.is_array()) throw ScenarioError("observed must be an array");
      std::vector<StateVector> rows;
      rows.reserve(obs.size());
      for (std::size_t i = 0; i < obs.size(); ++i)
        rows.push_back(read_state(obs[i], "observed[" + std::to_string(i) + "]"));
      sc.observed = std::move(rows);
    }
  } catch (const nlohmann::json::exception& e) {
    throw ScenarioError(std::string("scenario: ") + e.what());
  }
  validate(sc);
  return sc;
}

nlohmann::json to_json(const Scenario& sc) {
  auto state_json = [](const StateVector& x) {
    nlohmann::json arr = nlohmann::json::array();
    for (int k = 0; k < kNumStates; ++k) arr.push_back(x[k]);
    return arr;
  };
  nlohmann::json j;
  j["name"] = sc.name;
  j["dt"] = sc.dt;
  j["horizon"] = sc.horizon;
  j["window_len"] = sc.window_len;
  j["substeps"] = sc.substeps;
  j["seed"] = sc.seed;
  j["x0"] = state_json(sc.x0);
  j["signals"] = {{"P_S", sc.signals.severity},
                  {"C_plus", sc.signals.positivity},
                  {"d8", sc.signals.d8},
                  {"d9", sc.signals.d9},
                  {"d10", sc.signals.d10}};
  if (sc.observed) {
    nlohmann::json obs = nlohmann::json::array();
    for (const auto& x : *sc.observed) obs.push_back(state_json(x));
    j["observed"] = std::move(obs);
  }
  return j;
}

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ScenarioError("cannot open scenario file: " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::parse_error& e) {
    throw ScenarioError(path + ": " + e.what());
  }
  return scenario_from_json(j);
}

void save_scenario(const Scenario& scenario, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ScenarioError("cannot write scenario file: " + path);
  out << to_json(scenario).dump(2) << "\n";
}

std::vector<StateVector> load_observed_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ScenarioError("cannot open observed CSV: " + path);
  std::vector<StateVector> rows;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::vector<double> values;
    std::stringstream ss(line);
    std::string cell;
    bool numeric = true;
    while (std::getline(ss, cell, ',')) {
      try {
        std::size_t used = 0;
        values.push_back(std::stod(cell, &used));
      } catch (const std::exception&) {
        numeric = false;
        break;
      }
    }
    if (!numeric) {
      if (line_no == 1) continue;  // header
      throw ScenarioError(path + ":" + std::to_string(line_no) + ": non-numeric cell");
    }
    if (values.size() != kNumStates) {
      throw ScenarioError(path + ":" + std::to_string(line_no) + ": expected 10 columns, got " +
                          std::to_string(values.size()));
    }
    rows.push_back(Eigen::Map<const StateVector>(values.data()));
  }
  return rows;
}

Scenario extended(const Scenario& scenario, int factor) {
  if (factor < 1) throw ConfigError("extension factor must be >= 1");
  Scenario out = scenario;
  out.horizon = scenario.horizon * factor;
  out.observed.reset();
  const std::size_t needed = static_cast<std::size_t>(out.horizon) + 1;
  // Drivers beyond the data are held at their last observed value.
  auto pad = [&](std::vector<double>& v) {
    const std::size_t last = static_cast<std::size_t>(scenario.horizon);
    v.resize(last + 1);
    v.resize(needed, v[last]);
  };
  pad(out.signals.severity);
  pad(out.signals.positivity);
  pad(out.signals.d8);
  pad(out.signals.d9);
  pad(out.signals.d10);
  out.hold_from = scenario.horizon;
  return out;
}

}  // namespace cpsg
