// Regenerates the bundled synthetic scenarios and parameter files.
#include <filesystem>
#include <iostream>

#include "cpsg/actor_critic.hpp"
#include "cpsg/game.hpp"
#include "cpsg/report.hpp"
#include "cpsg/synthetic.hpp"

int main(int argc, char** argv) {
  namespace fs = std::filesystem;
  const fs::path dir = argc > 1 ? argv[1] : "data";
  fs::create_directories(dir);
  const cpsg::CpsParams p = cpsg::reference_params();
  cpsg::save_scenario(cpsg::make_harvey_synth(p), (dir / "harvey_synth.json").string());
  cpsg::save_scenario(cpsg::make_irma_synth(p), (dir / "irma_synth.json").string());
  cpsg::save_scenario(cpsg::make_calibration_probe(p), (dir / "calibration_probe.json").string());
  cpsg::save_params(p, (dir / "reference_params.json").string());
  cpsg::save_params(cpsg::neutral_params(), (dir / "neutral_params.json").string());
  nlohmann::json hyper = cpsg::to_json(cpsg::LearnerConfig{});
  hyper["cost_weights"] = cpsg::to_json(cpsg::CostWeights{});
  cpsg::write_json((dir / "hyper_default.json").string(), hyper);
  std::cout << "wrote " << dir << "\n";
}
