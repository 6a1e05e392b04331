#pragma once

#include <cstdint>

#include "cpsg/params.hpp"
#include "cpsg/scenario.hpp"

namespace cpsg {

/// Reference parameter set used to generate the bundled synthetic scenarios.
CpsParams reference_params();

/// 17-step Harvey-like scenario (x1(0) = 0.62, 6-step windows, seed 42). The
/// observed block is an open-loop simulation from `params` with seeded noise of
/// standard deviation `noise`, clipped to [0,1].
Scenario make_harvey_synth(const CpsParams& params, double noise = 0.015);

/// 12-step Irma-like scenario (x1(0) = 0.90, sharp grid drop at steps 10-11).
Scenario make_irma_synth(const CpsParams& params, double noise = 0.015);

/// Noise-free 17-step scenario integrated with a single Euler step per sample
/// so forward differences of `observed` equal the drift exactly. Grid, EMS and
/// misinformation baselines are constant and start at equilibrium.
Scenario make_calibration_probe(const CpsParams& params);

}  // namespace cpsg
