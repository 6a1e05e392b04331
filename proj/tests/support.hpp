#pragma once

#include <random>

#include "cpsg/params.hpp"
#include "cpsg/scenario.hpp"

namespace testing_support {

class Gen {
 public:
  explicit Gen(unsigned long long seed) : rng_(seed) {}

  double uniform(double lo = 0.0, double hi = 1.0) {
    return std::uniform_real_distribution<double>(lo, hi)(rng_);
  }
  double normal() { return std::normal_distribution<double>()(rng_); }

  cpsg::StateVector state() {
    cpsg::StateVector x;
    for (int k = 0; k < cpsg::kNumStates; ++k) x[k] = uniform();
    return x;
  }

  cpsg::SignalSnapshot snapshot() {
    return {uniform(), uniform(), uniform(), uniform(), uniform()};
  }

  template <std::size_t N>
  std::array<double, N> simplex() {
    std::array<double, N> w{};
    double s = 0.0;
    for (auto& v : w) s += (v = uniform(0.01, 1.0));
    for (auto& v : w) v /= s;
    return w;
  }

  cpsg::CpsParams params() {
    cpsg::CpsParams p;
    p.kappa = uniform(1.0, 20.0);
    p.zeta = uniform(0.1, 0.9);
    for (auto& a : p.alpha) a = uniform(0.05, 2.0);
    for (auto& e : p.eta_amp) e = uniform();
    p.eta_P = uniform(0.05, 2.0);
    p.eta_R = uniform(0.05, 2.0);
    p.eta_C = uniform(0.05, 2.0);
    p.eta_L = uniform(0.05, 2.0);
    p.iota_fear = simplex<7>();
    p.iota_info = simplex<2>();
    p.iota_flex = {1.0};
    p.iota_health = simplex<3>();
    p.iota_risk = simplex<5>();
    p.iota_coop = simplex<4>();
    p.iota_learn = simplex<3>();
    p.gamma8 = uniform(0.5, 5.0);
    p.gamma9 = uniform(0.5, 5.0);
    p.gamma10 = uniform(0.5, 5.0);
    p.beta1 = uniform(0.1, 1.0);
    p.beta8 = uniform(0.1, 1.0);
    p.beta9 = uniform(0.1, 1.0);
    p.beta10 = uniform(0.1, 1.0);
    return p;
  }

  std::mt19937_64& engine() { return rng_; }

 private:
  std::mt19937_64 rng_;
};

}  // namespace testing_support
