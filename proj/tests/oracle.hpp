#pragma once

// Second transcription of the CPS drift written directly from the model
// equations with plain arrays, used only as a test oracle.

#include <array>
#include <cmath>

#include "cpsg/params.hpp"
#include "cpsg/types.hpp"

namespace oracle {

struct Drift {
  std::array<double, 10> xdot{};
  double target1 = 0, target2 = 0, target3 = 0;
};

inline Drift drift(const std::array<double, 10>& s, double PS, double Cp, double d8, double d9,
                   double d10, const cpsg::CpsParams& p) {
  const double x1 = s[0], x2 = s[1], x3 = s[2], x4 = s[3], x5 = s[4];
  const double x6 = s[5], x7 = s[6], x8 = s[7], x9 = s[8], x10 = s[9];
  auto psi = [&](double z) { return 1.0 / (1.0 + std::exp(-p.kappa * (z - p.zeta))); };
  auto psic = [&](double z) { return 1.0 - 1.0 / (1.0 + std::exp(-p.kappa * (z - p.zeta))); };
  auto gam = [&](double th_hat, double th, double eta) {
    return eta * (x5 * (1.0 - (1.0 - th) * (1.0 - th_hat)) + (1.0 - x5) * th_hat * th) +
           (1.0 - eta) * th_hat;
  };

  const auto& f = p.iota_fear;
  const double h1 = f[0] * psic(x6) + f[1] * psic(x4) + f[2] * psic(x8) + f[3] * psi(PS) +
                    f[4] * psic(x3) + f[5] * psic(x7) + f[6] * psic(Cp);
  const double h2 = p.iota_info[0] * psi(x5) + p.iota_info[1] * psi(x10);
  const double h3 = p.iota_flex[0] * psi(x7);

  Drift out;
  out.target1 = h1;
  out.target2 = h2;
  out.target3 = h3;
  out.xdot[0] = p.alpha[0] * (gam(h1, x1, p.eta_amp[0]) - x1);
  out.xdot[1] = p.alpha[1] * (gam(h2, x2, p.eta_amp[1]) - x2);
  out.xdot[2] = p.alpha[2] * (gam(h3, x3, p.eta_amp[2]) - x3);

  const auto& i4 = p.iota_health;
  out.xdot[3] = p.eta_P * psic(x1) *
                ((i4[0] * psi(x9) + i4[1] * psi(x8) + i4[2] * psic(PS)) / 3.0 - x4);

  const auto& i5 = p.iota_risk;
  out.xdot[4] = p.eta_R * psi(x1) * psic(x6) * psic(x2) *
                ((i5[0] * psic(x8) + i5[1] * psi(PS) + i5[2] * psi(x10)) / 5.0 +
                 (i5[3] * psic(x9) + i5[4] * psic(Cp)) / 5.0 - x5);

  const auto& i6 = p.iota_coop;
  out.xdot[5] = p.eta_C * psi(x1) * psi(x3) *
                ((i6[0] * psic(x8) + i6[1] * psi(PS) + i6[2] * psic(x4) + i6[3] * psi(x2)) / 4.0 -
                 x6);

  const auto& i7 = p.iota_learn;
  out.xdot[6] = p.eta_L * psi(x3) *
                ((i7[0] * psi(x6) + i7[1] * psi(x2) + i7[2] * psic(x10)) / 3.0 - x7);

  out.xdot[7] = p.gamma8 * (d8 - x8);
  out.xdot[8] = p.gamma9 * (d9 - x9);
  out.xdot[9] = p.gamma10 * (d10 - x10);
  return out;
}

}  // namespace oracle
