#include "cpsg/params.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace cpsg {
namespace {

template <std::size_t K>
void fill_uniform(std::array<double, K>& group) {
  group.fill(1.0 / static_cast<double>(K));
}

template <std::size_t K>
void check_group(const std::array<double, K>& group, const char* name) {
  double sum = 0.0;
  for (std::size_t k = 0; k < K; ++k) {
    if (!(group[k] >= 0.0)) {
      throw ConfigError(std::string(name) + "[" + std::to_string(k) +
                        "] must be nonnegative");
    }
    sum += group[k];
  }
  if (std::abs(sum - 1.0) > 1e-12) {
    std::ostringstream os;
    os << name << " must sum to 1 (got " << sum << ")";
    throw ConfigError(os.str());
  }
}

void check_positive(double v, const char* name) {
  if (!(v > 0.0) || !std::isfinite(v))
    throw ConfigError(std::string(name) + " must be strictly positive");
}

template <std::size_t K>
std::array<double, K> read_group(const nlohmann::json& j, const char* key) {
  const auto& arr = j.at(key);
  if (!arr.is_array() || arr.size() != K) {
    throw ConfigError(std::string(key) + " must be an array of length " +
                      std::to_string(K));
  }
  std::array<double, K> out{};
  for (std::size_t k = 0; k < K; ++k) out[k] = arr[k].get<double>();
  return out;
}

}  // namespace

CpsParams neutral_params() {
  CpsParams p;
  fill_uniform(p.iota_fear);
  fill_uniform(p.iota_info);
  fill_uniform(p.iota_flex);
  fill_uniform(p.iota_health);
  fill_uniform(p.iota_risk);
  fill_uniform(p.iota_coop);
  fill_uniform(p.iota_learn);
  return p;
}

void validate(const CpsParams& p) {
  check_positive(p.kappa, "kappa");
  if (!(p.zeta > 0.0 && p.zeta < 1.0)) throw ConfigError("zeta must lie in (0,1)");
  const char* alpha_names[] = {"alpha_x1", "alpha_x2", "alpha_x3"};
  const char* amp_names[] = {"eta_amp_x1", "eta_amp_x2", "eta_amp_x3"};
  for (int k = 0; k < 3; ++k) {
    check_positive(p.alpha[k], alpha_names[k]);
    if (!(p.eta_amp[k] >= 0.0 && p.eta_amp[k] <= 1.0))
      throw ConfigError(std::string(amp_names[k]) + " must lie in [0,1]");
  }
  check_positive(p.eta_P, "eta_P");
  check_positive(p.eta_R, "eta_R");
  check_positive(p.eta_C, "eta_C");
  check_positive(p.eta_L, "eta_L");
  check_group(p.iota_fear, "iota_fear");
  check_group(p.iota_info, "iota_info");
  check_group(p.iota_flex, "iota_flex");
  check_group(p.iota_health, "iota_health");
  check_group(p.iota_risk, "iota_risk");
  check_group(p.iota_coop, "iota_coop");
  check_group(p.iota_learn, "iota_learn");
  check_positive(p.gamma8, "gamma8");
  check_positive(p.gamma9, "gamma9");
  check_positive(p.gamma10, "gamma10");
  check_positive(p.beta1, "beta1");
  check_positive(p.beta8, "beta8");
  check_positive(p.beta9, "beta9");
  check_positive(p.beta10, "beta10");
}

nlohmann::json to_json(const CpsParams& p) {
  nlohmann::json j;
  j["kappa"] = p.kappa;
  j["zeta"] = p.zeta;
  j["alpha_x1"] = p.alpha[0];
  j["alpha_x2"] = p.alpha[1];
  j["alpha_x3"] = p.alpha[2];
  j["eta_amp_x1"] = p.eta_amp[0];
  j["eta_amp_x2"] = p.eta_amp[1];
  j["eta_amp_x3"] = p.eta_amp[2];
  j["eta_P"] = p.eta_P;
  j["eta_R"] = p.eta_R;
  j["eta_C"] = p.eta_C;
  j["eta_L"] = p.eta_L;
  j["iota_fear"] = p.iota_fear;
  j["iota_info"] = p.iota_info;
  j["iota_flex"] = p.iota_flex;
  j["iota_health"] = p.iota_health;
  j["iota_risk"] = p.iota_risk;
  j["iota_coop"] = p.iota_coop;
  j["iota_learn"] = p.iota_learn;
  j["gamma8"] = p.gamma8;
  j["gamma9"] = p.gamma9;
  j["gamma10"] = p.gamma10;
  j["beta1"] = p.beta1;
  j["beta8"] = p.beta8;
  j["beta9"] = p.beta9;
  j["beta10"] = p.beta10;
  return j;
}

CpsParams params_from_json(const nlohmann::json& j) {
  CpsParams p;
  try {
    p.kappa = j.at("kappa").get<double>();
    p.zeta = j.at("zeta").get<double>();
    p.alpha = {j.at("alpha_x1").get<double>(), j.at("alpha_x2").get<double>(),
               j.at("alpha_x3").get<double>()};
    p.eta_amp = {j.at("eta_amp_x1").get<double>(),
                 j.at("eta_amp_x2").get<double>(),
                 j.at("eta_amp_x3").get<double>()};
    p.eta_P = j.at("eta_P").get<double>();
    p.eta_R = j.at("eta_R").get<double>();
    p.eta_C = j.at("eta_C").get<double>();
    p.eta_L = j.at("eta_L").get<double>();
    p.iota_fear = read_group<7>(j, "iota_fear");
    p.iota_info = read_group<2>(j, "iota_info");
    p.iota_flex = read_group<1>(j, "iota_flex");
    p.iota_health = read_group<3>(j, "iota_health");
    p.iota_risk = read_group<5>(j, "iota_risk");
    p.iota_coop = read_group<4>(j, "iota_coop");
    p.iota_learn = read_group<3>(j, "iota_learn");
    p.gamma8 = j.value("gamma8", 5.0);
    p.gamma9 = j.value("gamma9", 5.0);
    p.gamma10 = j.value("gamma10", 5.0);
    p.beta1 = j.value("beta1", 0.5);
    p.beta8 = j.value("beta8", 0.5);
    p.beta9 = j.value("beta9", 0.5);
    p.beta10 = j.value("beta10", 0.3);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("params: ") + e.what());
  }
  validate(p);
  return p;
}

CpsParams load_params(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open params file: " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(path + ": " + e.what());
  }
  return params_from_json(j);
}

void save_params(const CpsParams& params, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write params file: " + path);
  out << to_json(params).dump(2) << "\n";
}

}  // namespace cpsg
