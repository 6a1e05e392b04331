#pragma once

#include <array>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace cpsg {

inline constexpr int kNumStates = 10;
inline constexpr int kNumPlayers = 3;

template <typename T>
using StateT = Eigen::Matrix<T, kNumStates, 1>;

/// Ten community indicators, each a fraction in [0,1].
using StateVector = StateT<double>;

/// One control level per agency (communication, power, EMS).
using Control = Eigen::Vector3d;

/// Zero-based positions of the community indicators inside a StateVector.
enum StateIndex : int {
  kFear = 0,
  kInfoSeeking = 1,
  kFlexibility = 2,
  kHealth = 3,
  kRiskPerception = 4,
  kCooperation = 5,
  kLearning = 6,
  kPower = 7,
  kEms = 8,
  kFakeNews = 9,
};

/// Exogenous disaster signals sampled at the first step of a window.
struct SignalSnapshot {
  double severity = 0.0;    // P_S
  double positivity = 0.0;  // C_plus
  double d8 = 0.0;          // grid damage profile
  double d9 = 0.0;          // nominal EMS deployment
  double d10 = 0.0;         // misinformation rate
};

/// Malformed or out-of-range input data (scenario files, trajectories).
class ScenarioError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid parameter or hyperparameter combination.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace cpsg
