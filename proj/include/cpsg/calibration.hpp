#pragma once

#include <array>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "cpsg/params.hpp"
#include "cpsg/scenario.hpp"

namespace cpsg {

inline constexpr int kNumFitParams = 37;

/// Unconstrained calibration vector:
///   [0]      kappa = 10 softplus(t) / ln 2
///   [1]      zeta = sigmoid(t)
///   [2..8]   alpha_x1..x3, eta_P, eta_R, eta_C, eta_L = softplus(t) / ln 2
///   [9..11]  eta_amp_x1..x3 = sigmoid(t)
///   [12..36] target-weight logits, softmax within each group
///            (fear 7, info 2, flex 1, health 3, risk 5, coop 4, learn 3)
/// The zero vector maps to the neutral initialization (kappa 10, zeta 0.5,
/// unit rates, half amplification, uniform weights), which is also where the
/// Tikhonov term is centred.
using ParamVector = Eigen::Matrix<double, kNumFitParams, 1>;

/// Maps a fit vector to parameters; response rates and control gains are
/// copied from `fixed`.
CpsParams to_params(const ParamVector& theta, const CpsParams& fixed);

/// Inverse of `to_params` for parameters with strictly positive weights.
ParamVector from_params(const CpsParams& params);

/// Observed trajectory together with the drivers needed to evaluate the drift.
struct CalibrationData {
  std::vector<StateVector> observed;
  ExogenousSignals signals;
  int window_len = 1;
  double dt = 1.0;
};

CalibrationData calibration_data(const Scenario& scenario);

/// Forward differences (x[k+1] - x[k]) / dt, k = 0..T-1.
std::vector<StateVector> finite_diff_derivatives(const std::vector<StateVector>& observed,
                                                 double dt);

/// Sum over samples of the squared x1..x7 derivative residual plus
/// lambda * |theta|^2.
double calibration_loss(const ParamVector& theta, const CalibrationData& data, double lambda,
                        const CpsParams& fixed);

/// Analytic gradient of `calibration_loss` (forward-mode autodiff).
ParamVector calibration_gradient(const ParamVector& theta, const CalibrationData& data,
                                 double lambda, const CpsParams& fixed);

struct FitOptions {
  double lambda = 0.01;
  int max_iters = 500;
  double tol = 1e-12;
  /// Source of gamma/beta and the starting point.
  CpsParams fixed = neutral_params();
  ParamVector initial = ParamVector::Zero();
};

struct FitReport {
  ParamVector theta = ParamVector::Zero();
  double final_loss = 0.0;
  int iterations = 0;
  bool converged = false;
  /// All x1..x7 forward differences vanish; the data carries no information.
  bool degenerate = false;
  std::vector<double> loss_curve;
  std::array<double, 7> derivative_rmse{};  // per social state, at the fit
  double derivative_rmse_total = 0.0;
  std::string warning;
};

struct FitResult {
  CpsParams params;
  FitReport report;
};

/// Levenberg-Marquardt minimization of `calibration_loss`.
FitResult fit(const CalibrationData& data, const FitOptions& options = {});

/// Root-mean-square error between the u = 0 simulation from x0 and the
/// observed trajectory, over all samples and all ten states.
double openloop_rmse(const CpsParams& params, const Scenario& scenario);

nlohmann::json to_json(const FitReport& report);

}  // namespace cpsg
