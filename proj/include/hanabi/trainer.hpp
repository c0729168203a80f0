#ifndef HANABI_TRAINER_HPP_
#define HANABI_TRAINER_HPP_

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "hanabi/checkpoint.hpp"
#include "hanabi/config.hpp"
#include "hanabi/metrics.hpp"
#include "hanabi/rl.hpp"

namespace hanabi {

struct EpochRow {
  int epoch = 0;
  int env_steps = 0;
  int episodes = 0;
  double mean_score = 0.0;
  double mean_fireworks = 0.0;
  double mean_lives_left = 0.0;
  double mean_entropy = 0.0;
  double play_bias = 0.0;
  double discard_bias = 0.0;
  double value_loss = 0.0;
  double policy_objective = 0.0;
};

std::string EpochCsvHeader();
std::string EpochCsvRow(const EpochRow& row);

// Single-worker deterministic training loop: one batch collection plus one
// update phase per epoch.
class Trainer {
 public:
  explicit Trainer(const RunConfig& config);

  EpochRow RunEpoch();

  Checkpoint MakeCheckpoint() const;
  const RunConfig& config() const { return config_; }
  const nn::MlpParams& policy() const { return policy_; }
  int epoch() const { return epoch_; }

 private:
  RunConfig config_;
  Rng rng_;
  CheatEnv env_;
  nn::MlpParams policy_;
  nn::AdamState policy_adam_;
  std::optional<nn::MlpParams> value_;
  std::optional<nn::AdamState> value_adam_;
  int epoch_ = 0;
};

// Runs a full configured training run: writes manifest.json, metrics.csv and
// checkpoints under config.out_dir. Calls on_epoch after every epoch when
// given (e.g. for progress output).
void RunTraining(const RunConfig& config,
                 const std::function<void(const EpochRow&)>& on_epoch = nullptr);

// Plays n_games full episodes with the given policy (sampled actions by
// default, greedy argmax otherwise) and reports the evaluation metrics.
metrics::EvalReport EvaluatePolicy(const nn::MlpParams& policy, int n_games,
                                   uint64_t seed, bool greedy);

}  // namespace hanabi

#endif  // HANABI_TRAINER_HPP_
