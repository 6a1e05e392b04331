#include "cpsg/calibration.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <unsupported/Eigen/AutoDiff>

#include "cpsg/dynamics.hpp"
#include "cpsg/game.hpp"
#include "cpsg/rollout.hpp"

namespace cpsg {
namespace {

using Ad = Eigen::AutoDiffScalar<ParamVector>;
template <typename T>
using ThetaT = Eigen::Matrix<T, kNumFitParams, 1>;

constexpr int kSocialStates = 7;
constexpr int kLogitOffset = 12;

inline double value_of(double v) { return v; }
inline double value_of(const Ad& v) { return v.value(); }

template <typename T>
T softplus(const T& z) {
  using std::exp;
  using std::log;
  if (value_of(z) > 0.0) return T(z + log(T(1.0) + exp(-z)));
  return T(log(T(1.0) + exp(z)));
}

template <typename T>
T sigmoid(const T& z) {
  using std::exp;
  if (value_of(z) >= 0.0) return T(T(1.0) / (T(1.0) + exp(-z)));
  const T e = exp(z);
  return T(e / (T(1.0) + e));
}

template <typename T, std::size_t K>
void softmax(const ThetaT<T>& theta, int& cursor, std::array<T, K>& out) {
  using std::exp;
  double shift = -std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < K; ++k) shift = std::max(shift, value_of(theta[cursor + k]));
  T total(0.0);
  for (std::size_t k = 0; k < K; ++k) {
    out[k] = exp(theta[cursor + k] - T(shift));
    total += out[k];
  }
  for (std::size_t k = 0; k < K; ++k) out[k] = out[k] / total;
  cursor += static_cast<int>(K);
}

template <typename T>
BasicCpsParams<T> transform(const ThetaT<T>& theta, const CpsParams& fixed) {
  const double ln2 = std::numbers::ln2;
  BasicCpsParams<T> p;
  p.kappa = T(10.0) * softplus(theta[0]) / T(ln2);
  p.zeta = sigmoid(theta[1]);
  for (int k = 0; k < 3; ++k) p.alpha[k] = softplus(theta[2 + k]) / T(ln2);
  p.eta_P = softplus(theta[5]) / T(ln2);
  p.eta_R = softplus(theta[6]) / T(ln2);
  p.eta_C = softplus(theta[7]) / T(ln2);
  p.eta_L = softplus(theta[8]) / T(ln2);
  for (int k = 0; k < 3; ++k) p.eta_amp[k] = sigmoid(theta[9 + k]);
  int cursor = kLogitOffset;
  softmax(theta, cursor, p.iota_fear);
  softmax(theta, cursor, p.iota_info);
  softmax(theta, cursor, p.iota_flex);
  softmax(theta, cursor, p.iota_health);
  softmax(theta, cursor, p.iota_risk);
  softmax(theta, cursor, p.iota_coop);
  softmax(theta, cursor, p.iota_learn);
  p.gamma8 = fixed.gamma8;
  p.gamma9 = fixed.gamma9;
  p.gamma10 = fixed.gamma10;
  p.beta1 = fixed.beta1;
  p.beta8 = fixed.beta8;
  p.beta9 = fixed.beta9;
  p.beta10 = fixed.beta10;
  return p;
}

std::size_t residual_count(const CalibrationData& data) {
  return (data.observed.size() - 1) * kSocialStates + kNumFitParams;
}

/// Stacked residual: drift mismatch for x1..x7 at every sample, then
/// sqrt(lambda) * theta.
template <typename T>
void residuals(const ThetaT<T>& theta, const CalibrationData& data,
               const std::vector<StateVector>& derivs, double lambda, const CpsParams& fixed,
               std::vector<T>& out) {
  const BasicCpsParams<T> p = transform(theta, fixed);
  out.clear();
  out.reserve(residual_count(data));
  for (std::size_t k = 0; k < derivs.size(); ++k) {
    const SignalSnapshot snap =
        frozen_signals(data.signals, static_cast<int>(k), data.window_len);
    const StateT<T> x = data.observed[k].template cast<T>();
    const auto f = drift(x, snap, p);
    for (int i = 0; i < kSocialStates; ++i) out.push_back(f.xdot[i] - T(derivs[k][i]));
  }
  const double root = std::sqrt(lambda);
  for (int m = 0; m < kNumFitParams; ++m) out.push_back(T(root) * theta[m]);
}

void check_data(const CalibrationData& data) {
  if (data.observed.size() < 2) throw ScenarioError("calibration needs at least 2 observed samples");
  if (data.signals.length() < data.observed.size() - 1)
    throw ScenarioError("signals shorter than the observed trajectory");
  if (!(data.dt > 0.0)) throw ScenarioError("dt must be > 0");
  if (data.window_len < 1) throw ScenarioError("window_len must be >= 1");
}

double sum_squares(const std::vector<double>& r) {
  double s = 0.0;
  for (double v : r) s += v * v;
  return s;
}

struct Linearization {
  Eigen::VectorXd r;
  Eigen::MatrixXd jac;
};

Linearization linearize(const ParamVector& theta, const CalibrationData& data,
                        const std::vector<StateVector>& derivs, double lambda,
                        const CpsParams& fixed) {
  ThetaT<Ad> theta_ad;
  for (int m = 0; m < kNumFitParams; ++m) theta_ad[m] = Ad(theta[m], kNumFitParams, m);
  std::vector<Ad> r;
  residuals(theta_ad, data, derivs, lambda, fixed, r);
  Linearization lin;
  lin.r.resize(static_cast<Eigen::Index>(r.size()));
  lin.jac.resize(static_cast<Eigen::Index>(r.size()), kNumFitParams);
  for (std::size_t row = 0; row < r.size(); ++row) {
    lin.r[static_cast<Eigen::Index>(row)] = r[row].value();
    lin.jac.row(static_cast<Eigen::Index>(row)) = r[row].derivatives().transpose();
  }
  return lin;
}

double loss_at(const ParamVector& theta, const CalibrationData& data,
               const std::vector<StateVector>& derivs, double lambda, const CpsParams& fixed) {
  std::vector<double> r;
  residuals<double>(theta, data, derivs, lambda, fixed, r);
  return sum_squares(r);
}

}  // namespace

CpsParams to_params(const ParamVector& theta, const CpsParams& fixed) {
  return transform<double>(theta, fixed);
}

ParamVector from_params(const CpsParams& p) {
  const double ln2 = std::numbers::ln2;
  auto inv_softplus = [](double y) { return y > 30.0 ? y : std::log(std::expm1(y)); };
  auto logit = [](double y) { return std::log(y / (1.0 - y)); };
  ParamVector theta;
  theta[0] = inv_softplus(p.kappa * ln2 / 10.0);
  theta[1] = logit(p.zeta);
  for (int k = 0; k < 3; ++k) theta[2 + k] = inv_softplus(p.alpha[k] * ln2);
  theta[5] = inv_softplus(p.eta_P * ln2);
  theta[6] = inv_softplus(p.eta_R * ln2);
  theta[7] = inv_softplus(p.eta_C * ln2);
  theta[8] = inv_softplus(p.eta_L * ln2);
  for (int k = 0; k < 3; ++k) theta[9 + k] = logit(p.eta_amp[k]);
  int cursor = kLogitOffset;
  auto logits = [&](const auto& group) {
    double mean = 0.0;
    for (double w : group) mean += std::log(w);
    mean /= static_cast<double>(group.size());
    for (double w : group) theta[cursor++] = std::log(w) - mean;
  };
  logits(p.iota_fear);
  logits(p.iota_info);
  logits(p.iota_flex);
  logits(p.iota_health);
  logits(p.iota_risk);
  logits(p.iota_coop);
  logits(p.iota_learn);
  return theta;
}

CalibrationData calibration_data(const Scenario& scenario) {
  if (!scenario.observed) throw ScenarioError("scenario has no observed trajectory");
  return {*scenario.observed, scenario.signals, scenario.window_len, scenario.dt};
}

std::vector<StateVector> finite_diff_derivatives(const std::vector<StateVector>& observed,
                                                 double dt) {
  if (observed.size() < 2) throw ScenarioError("finite differences need at least 2 samples");
  std::vector<StateVector> out;
  out.reserve(observed.size() - 1);
  for (std::size_t k = 0; k + 1 < observed.size(); ++k)
    out.push_back((observed[k + 1] - observed[k]) / dt);
  return out;
}

double calibration_loss(const ParamVector& theta, const CalibrationData& data, double lambda,
                        const CpsParams& fixed) {
  check_data(data);
  return loss_at(theta, data, finite_diff_derivatives(data.observed, data.dt), lambda, fixed);
}

ParamVector calibration_gradient(const ParamVector& theta, const CalibrationData& data,
                                 double lambda, const CpsParams& fixed) {
  check_data(data);
  const auto derivs = finite_diff_derivatives(data.observed, data.dt);
  const Linearization lin = linearize(theta, data, derivs, lambda, fixed);
  return 2.0 * lin.jac.transpose() * lin.r;
}

FitResult fit(const CalibrationData& data, const FitOptions& options) {
  check_data(data);
  if (!(options.lambda >= 0.0)) throw ConfigError("lambda must be >= 0");
  const auto derivs = finite_diff_derivatives(data.observed, data.dt);

  FitReport report;
  double max_rate = 0.0;
  for (const auto& d : derivs) max_rate = std::max(max_rate, d.head<kSocialStates>().cwiseAbs().maxCoeff());
  report.degenerate = max_rate < 1e-12;

  ParamVector theta = options.initial;
  double loss = loss_at(theta, data, derivs, options.lambda, options.fixed);
  if (!std::isfinite(loss)) throw ConfigError("calibration loss is not finite at iteration 0");
  report.loss_curve.push_back(loss);

  double damping = 1e-3;
  int iter = 0;
  for (; iter < options.max_iters; ++iter) {
    const Linearization lin = linearize(theta, data, derivs, options.lambda, options.fixed);
    const ParamVector grad = lin.jac.transpose() * lin.r;
    if (grad.cwiseAbs().maxCoeff() < options.tol) {
      report.converged = true;
      break;
    }
    const Eigen::Matrix<double, kNumFitParams, kNumFitParams> normal = lin.jac.transpose() * lin.jac;
    bool accepted = false;
    for (int attempt = 0; attempt < 40; ++attempt) {
      Eigen::Matrix<double, kNumFitParams, kNumFitParams> a = normal;
      a.diagonal().array() += damping * (1.0 + normal.diagonal().array());
      const ParamVector step = -a.ldlt().solve(grad);
      const ParamVector trial = theta + step;
      const double trial_loss = loss_at(trial, data, derivs, options.lambda, options.fixed);
      if (std::isfinite(trial_loss) && trial_loss < loss) {
        const double drop = loss - trial_loss;
        theta = trial;
        loss = trial_loss;
        damping = std::max(damping / 3.0, 1e-12);
        accepted = true;
        if (drop <= options.tol * std::max(1.0, loss)) report.converged = true;
        break;
      }
      damping *= 4.0;
    }
    report.loss_curve.push_back(loss);
    if (!accepted) {
      // No descent direction left at machine precision.
      report.converged = true;
      ++iter;
      break;
    }
    if (report.converged) {
      ++iter;
      break;
    }
  }
  report.iterations = iter;
  if (!report.converged) report.warning = "max_iters reached before convergence; returning best iterate";
  if (report.degenerate) report.warning = "observed social states are constant; fit carries no information";

  report.theta = theta;
  report.final_loss = loss;
  const CpsParams params = to_params(theta, options.fixed);
  double total = 0.0;
  std::array<double, kSocialStates> sq{};
  for (std::size_t k = 0; k < derivs.size(); ++k) {
    const SignalSnapshot snap = frozen_signals(data.signals, static_cast<int>(k), data.window_len);
    const StateVector f = drift(data.observed[k], snap, params).xdot;
    for (int i = 0; i < kSocialStates; ++i) {
      const double e = f[i] - derivs[k][i];
      sq[i] += e * e;
      total += e * e;
    }
  }
  const double n = static_cast<double>(derivs.size());
  for (int i = 0; i < kSocialStates; ++i) report.derivative_rmse[i] = std::sqrt(sq[i] / n);
  report.derivative_rmse_total = std::sqrt(total / (n * kSocialStates));
  return {params, report};
}

double openloop_rmse(const CpsParams& params, const Scenario& scenario) {
  if (!scenario.observed) throw ScenarioError("openloop_rmse needs an observed trajectory");
  const Game game{params, make_players(params)};
  const Trajectory traj = open_loop(scenario, game);
  double sq = 0.0;
  for (std::size_t t = 0; t < traj.states.size(); ++t)
    sq += (traj.states[t] - (*scenario.observed)[t]).squaredNorm();
  return std::sqrt(sq / (static_cast<double>(traj.states.size()) * kNumStates));
}

nlohmann::json to_json(const FitReport& r) {
  nlohmann::json j;
  j["theta"] = std::vector<double>(r.theta.data(), r.theta.data() + r.theta.size());
  j["final_loss"] = r.final_loss;
  j["iterations"] = r.iterations;
  j["converged"] = r.converged;
  j["degenerate"] = r.degenerate;
  j["loss_curve"] = r.loss_curve;
  j["derivative_rmse"] = r.derivative_rmse;
  j["derivative_rmse_total"] = r.derivative_rmse_total;
  j["finite_differences"] = "forward";
  j["warning"] = r.warning;
  return j;
}

}  // namespace cpsg
