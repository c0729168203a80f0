#ifndef HANABI_RL_HPP_
#define HANABI_RL_HPP_

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "hanabi/cheat_env.hpp"
#include "hanabi/metrics.hpp"
#include "hanabi/nn.hpp"
#include "hanabi/rng.hpp"

namespace hanabi::rl {

enum class Algorithm : int8_t { kSpg, kVpg, kPpo };

const char* AlgorithmName(Algorithm algo);
Algorithm AlgorithmFromName(const std::string& name);  // throws on unknown

struct AlgoConfig {
  Algorithm algorithm = Algorithm::kVpg;
  double gamma = 0.99;
  double lambda = 0.95;
  double clip_epsilon = 0.2;
  double entropy_coef = 0.01;
  int policy_iterations = 1;
  int value_iterations = 5;
  double policy_lr = 3e-4;
  double value_lr = 3e-4;

  bool HasValueNet() const { return algorithm != Algorithm::kSpg; }
  static AlgoConfig Defaults(Algorithm algo);
};

inline constexpr int kPolicyHidden[] = {128, 128, 64};
inline constexpr int kValueHidden[] = {128, 64, 32};

std::vector<int> PolicyLayerSizes();
std::vector<int> ValueLayerSizes();

struct Transition {
  Observation observation;
  int action_index = 0;
  double reward = 0.0;
  double log_prob = 0.0;        // ln pi(a|s) at collection time
  double value_estimate = 0.0;  // 0 when the algorithm has no value net
  int episode_id = 0;
  int step_in_episode = 0;
};

struct Batch {
  std::vector<Transition> transitions;
  std::vector<int> episode_starts;  // first transition index per episode
  std::vector<metrics::EpisodeSummary> episodes;
  metrics::ActionProbProfile mean_profile;  // mean policy output, visited states
  double mean_entropy = 0.0;

  std::vector<double> returns;     // discounted rewards-to-go
  std::vector<double> advantages;  // GAE; empty without a value net
  std::vector<double> weights;     // normalized policy-gradient weights

  int NumSteps() const { return static_cast<int>(transitions.size()); }
  int NumEpisodes() const { return static_cast<int>(episode_starts.size()); }
};

// Runs whole self-play episodes until at least min_steps transitions exist.
// Both seats share the policy and feed the same stream.
Batch CollectBatch(CheatEnv& env, const nn::MlpParams& policy,
                   const nn::MlpParams* value, int min_steps, Rng& rng);

std::vector<double> RewardsToGo(std::span<const double> rewards, double gamma);

// A_t = sum_k (gamma*lambda)^k delta_{t+k} with terminal bootstrap 0.
std::vector<double> Gae(std::span<const double> rewards, std::span<const double> values,
                        double gamma, double lambda);

// Population mean-0 std-1 rescaling; identity scaling when std is 0.
std::vector<double> Normalize(std::span<const double> values);

// Fills returns, advantages and normalized weights per the algorithm.
void ComputeTargets(Batch& batch, const AlgoConfig& config);

// Mean policy objective over the batch (entropy bonus included) and, when
// grads is non-null, its gradient. `ppo` switches the per-transition term
// from log pi * w to the clipped probability-ratio surrogate.
double PolicyObjective(const Batch& batch, const nn::MlpParams& policy,
                       const AlgoConfig& config, bool ppo, nn::Gradients* grads);

// Mean squared error of the value net against the batch returns.
double ValueLoss(const Batch& batch, const nn::MlpParams& value, nn::Gradients* grads);

struct UpdateStats {
  double policy_objective = 0.0;  // before the first policy step
  double value_loss = 0.0;        // after the last value step
  std::vector<double> value_losses;  // before each value step, then final
  double mean_entropy = 0.0;         // collection-time batch entropy
};

UpdateStats SpgUpdate(const Batch& batch, nn::MlpParams& policy,
                      nn::AdamState& policy_adam, const AlgoConfig& config);
UpdateStats VpgUpdate(const Batch& batch, nn::MlpParams& policy,
                      nn::AdamState& policy_adam, nn::MlpParams& value,
                      nn::AdamState& value_adam, const AlgoConfig& config);
UpdateStats PpoUpdate(const Batch& batch, nn::MlpParams& policy,
                      nn::AdamState& policy_adam, nn::MlpParams& value,
                      nn::AdamState& value_adam, const AlgoConfig& config);

}  // namespace hanabi::rl

#endif  // HANABI_RL_HPP_
