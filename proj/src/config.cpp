#include "hanabi/config.hpp"

#include <set>

#include <json.hpp>

namespace hanabi {

using nlohmann::ordered_json;

RunConfig RunConfig::Defaults(rl::Algorithm algorithm) {
  RunConfig config;
  config.algo = rl::AlgoConfig::Defaults(algorithm);
  return config;
}

namespace {

ordered_json AlgoToJson(const rl::AlgoConfig& algo) {
  ordered_json j;
  j["algorithm"] = rl::AlgorithmName(algo.algorithm);
  j["gamma"] = algo.gamma;
  j["lambda"] = algo.lambda;
  j["clip_epsilon"] = algo.clip_epsilon;
  j["entropy_coef"] = algo.entropy_coef;
  j["policy_iterations"] = algo.policy_iterations;
  j["value_iterations"] = algo.value_iterations;
  j["policy_lr"] = algo.policy_lr;
  j["value_lr"] = algo.value_lr;
  return j;
}

ordered_json RewardsToJson(const RewardTable& rewards) {
  ordered_json j;
  j["successful_play"] = rewards.successful_play;
  j["lost_all_lives_score_factor"] = rewards.lost_all_lives_score_factor;
  j["illegal_move"] = rewards.illegal_move;
  j["lost_one_life"] = rewards.lost_one_life;
  j["hint"] = rewards.hint;
  j["play_attempt"] = rewards.play_attempt;
  j["discard_playable"] = rewards.discard_playable;
  j["discard_useless"] = rewards.discard_useless;
  j["discard_unique_critical"] = rewards.discard_unique_critical;
  return j;
}

template <typename T>
void MaybeSet(const ordered_json& j, const char* key, T& value) {
  if (j.contains(key)) value = j.at(key).get<T>();
}

void CheckKeys(const ordered_json& j, const std::set<std::string>& allowed,
               const std::string& where) {
  for (const auto& item : j.items()) {
    if (!allowed.contains(item.key())) {
      throw std::invalid_argument("unknown config key: " + where + item.key());
    }
  }
}

}  // namespace

std::string RunConfigToJson(const RunConfig& config) {
  ordered_json j;
  j["algo"] = AlgoToJson(config.algo);
  j["rewards"] = RewardsToJson(config.rewards);
  j["seed"] = config.seed;
  j["epochs"] = config.epochs;
  j["batch_min_steps"] = config.batch_min_steps;
  j["out_dir"] = config.out_dir;
  j["checkpoint_every"] = config.checkpoint_every;
  return j.dump(2);
}

RunConfig RunConfigFromJson(const std::string& text) {
  const ordered_json j = ordered_json::parse(text);
  CheckKeys(j, {"algo", "rewards", "seed", "epochs", "batch_min_steps", "out_dir",
                "checkpoint_every"},
            "");

  rl::Algorithm algorithm = rl::Algorithm::kVpg;
  if (j.contains("algo") && j["algo"].contains("algorithm")) {
    algorithm = rl::AlgorithmFromName(j["algo"]["algorithm"].get<std::string>());
  }
  RunConfig config = RunConfig::Defaults(algorithm);

  if (j.contains("algo")) {
    const ordered_json& a = j["algo"];
    CheckKeys(a, {"algorithm", "gamma", "lambda", "clip_epsilon", "entropy_coef",
                  "policy_iterations", "value_iterations", "policy_lr", "value_lr"},
              "algo.");
    MaybeSet(a, "gamma", config.algo.gamma);
    MaybeSet(a, "lambda", config.algo.lambda);
    MaybeSet(a, "clip_epsilon", config.algo.clip_epsilon);
    MaybeSet(a, "entropy_coef", config.algo.entropy_coef);
    MaybeSet(a, "policy_iterations", config.algo.policy_iterations);
    MaybeSet(a, "value_iterations", config.algo.value_iterations);
    MaybeSet(a, "policy_lr", config.algo.policy_lr);
    MaybeSet(a, "value_lr", config.algo.value_lr);
  }
  if (j.contains("rewards")) {
    const ordered_json& r = j["rewards"];
    CheckKeys(r,
              {"successful_play", "lost_all_lives_score_factor", "illegal_move",
               "lost_one_life", "hint", "play_attempt", "discard_playable",
               "discard_useless", "discard_unique_critical"},
              "rewards.");
    MaybeSet(r, "successful_play", config.rewards.successful_play);
    MaybeSet(r, "lost_all_lives_score_factor", config.rewards.lost_all_lives_score_factor);
    MaybeSet(r, "illegal_move", config.rewards.illegal_move);
    MaybeSet(r, "lost_one_life", config.rewards.lost_one_life);
    MaybeSet(r, "hint", config.rewards.hint);
    MaybeSet(r, "play_attempt", config.rewards.play_attempt);
    MaybeSet(r, "discard_playable", config.rewards.discard_playable);
    MaybeSet(r, "discard_useless", config.rewards.discard_useless);
    MaybeSet(r, "discard_unique_critical", config.rewards.discard_unique_critical);
  }
  MaybeSet(j, "seed", config.seed);
  MaybeSet(j, "epochs", config.epochs);
  MaybeSet(j, "batch_min_steps", config.batch_min_steps);
  MaybeSet(j, "out_dir", config.out_dir);
  MaybeSet(j, "checkpoint_every", config.checkpoint_every);

  if (config.epochs < 0) throw std::invalid_argument("epochs must be >= 0");
  if (config.batch_min_steps < 1) throw std::invalid_argument("batch_min_steps must be >= 1");
  return config;
}

std::string RunManifest(const RunConfig& config) {
  ordered_json j = ordered_json::parse(RunConfigToJson(config));
  j["version"] = kVersionString;
  return j.dump(2);
}

}  // namespace hanabi
