#ifndef HANABI_CONFIG_HPP_
#define HANABI_CONFIG_HPP_

#include <cstdint>
#include <string>

#include "hanabi/cheat_env.hpp"
#include "hanabi/rl.hpp"

namespace hanabi {

inline constexpr const char* kVersionString = "hanabi-rl 0.1.0";

// Full description of a training run. Defaults are the standard settings of
// the three algorithms; every effective value is echoed into the manifest.
struct RunConfig {
  rl::AlgoConfig algo = rl::AlgoConfig::Defaults(rl::Algorithm::kVpg);
  RewardTable rewards;
  uint64_t seed = 0;
  int epochs = 0;
  int batch_min_steps = 1000;
  std::string out_dir;
  int checkpoint_every = 0;  // epochs between checkpoints; 0 = final only

  static RunConfig Defaults(rl::Algorithm algorithm);
};

// JSON round trip. Parsing starts from the algorithm's defaults and applies
// only the keys present; unknown keys are an error.
std::string RunConfigToJson(const RunConfig& config);
RunConfig RunConfigFromJson(const std::string& text);

// Manifest written at the start of every run: config echo + version string.
std::string RunManifest(const RunConfig& config);

}  // namespace hanabi

#endif  // HANABI_CONFIG_HPP_
