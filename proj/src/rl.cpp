#include "hanabi/rl.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace hanabi::rl {

const char* AlgorithmName(Algorithm algo) {
  switch (algo) {
    case Algorithm::kSpg: return "spg";
    case Algorithm::kVpg: return "vpg";
    case Algorithm::kPpo: return "ppo";
  }
  return "?";
}

Algorithm AlgorithmFromName(const std::string& name) {
  if (name == "spg") return Algorithm::kSpg;
  if (name == "vpg") return Algorithm::kVpg;
  if (name == "ppo") return Algorithm::kPpo;
  throw std::invalid_argument("unknown algorithm: " + name);
}

AlgoConfig AlgoConfig::Defaults(Algorithm algo) {
  AlgoConfig config;
  config.algorithm = algo;
  config.policy_iterations = algo == Algorithm::kPpo ? 5 : 1;
  config.value_iterations = algo == Algorithm::kSpg ? 0 : 5;
  return config;
}

std::vector<int> PolicyLayerSizes() {
  return {kObservationSize, kPolicyHidden[0], kPolicyHidden[1], kPolicyHidden[2],
          kNumEnvActions};
}

std::vector<int> ValueLayerSizes() {
  return {kObservationSize, kValueHidden[0], kValueHidden[1], kValueHidden[2], 1};
}

Batch CollectBatch(CheatEnv& env, const nn::MlpParams& policy,
                   const nn::MlpParams* value, int min_steps, Rng& rng) {
  Batch batch;
  std::array<double, kNumEnvActions> prob_sums{};
  double entropy_sum = 0.0;

  while (batch.NumSteps() < min_steps) {
    const int episode_id = batch.NumEpisodes();
    batch.episode_starts.push_back(batch.NumSteps());
    Observation obs = env.Reset(rng.NextUint64());
    int step_in_episode = 0;
    while (!env.Done()) {
      const std::vector<double> probs = nn::ForwardPolicy(policy, obs);
      for (int i = 0; i < kNumEnvActions; ++i) prob_sums[i] += probs[i];
      entropy_sum += nn::Entropy(probs);

      // Inverse-CDF sample from the action distribution.
      const double u = rng.UniformReal();
      int action = kNumEnvActions - 1;
      double cumulative = 0.0;
      for (int i = 0; i < kNumEnvActions; ++i) {
        cumulative += probs[i];
        if (u < cumulative) {
          action = i;
          break;
        }
      }

      Transition transition;
      transition.observation = obs;
      transition.action_index = action;
      transition.log_prob = std::log(probs[action]);
      if (value != nullptr) {
        transition.value_estimate = nn::ForwardValue(*value, obs);
      }
      transition.episode_id = episode_id;
      transition.step_in_episode = step_in_episode++;

      const StepResult result = env.Step({action});
      transition.reward = result.reward;
      batch.transitions.push_back(std::move(transition));
      obs = result.observation;
    }
    batch.episodes.push_back(metrics::SummarizeEpisode(env.trace()));
  }

  const double steps = batch.NumSteps();
  for (int i = 0; i < kNumEnvActions; ++i) batch.mean_profile.p[i] = prob_sums[i] / steps;
  batch.mean_entropy = entropy_sum / steps;
  return batch;
}

std::vector<double> RewardsToGo(std::span<const double> rewards, double gamma) {
  std::vector<double> returns(rewards.size());
  double running = 0.0;
  for (size_t i = rewards.size(); i-- > 0;) {
    running = rewards[i] + gamma * running;
    returns[i] = running;
  }
  return returns;
}

std::vector<double> Gae(std::span<const double> rewards, std::span<const double> values,
                        double gamma, double lambda) {
  if (rewards.size() != values.size()) {
    throw std::invalid_argument("rewards and values must align");
  }
  std::vector<double> advantages(rewards.size());
  double running = 0.0;
  for (size_t i = rewards.size(); i-- > 0;) {
    const double next_value = i + 1 < values.size() ? values[i + 1] : 0.0;
    const double delta = rewards[i] + gamma * next_value - values[i];
    running = delta + gamma * lambda * running;
    advantages[i] = running;
  }
  return advantages;
}

std::vector<double> Normalize(std::span<const double> values) {
  std::vector<double> normalized(values.begin(), values.end());
  if (normalized.empty()) return normalized;
  double mean = 0.0;
  for (double v : normalized) mean += v;
  mean /= normalized.size();
  double variance = 0.0;
  for (double v : normalized) variance += (v - mean) * (v - mean);
  variance /= normalized.size();
  const double std_dev = std::sqrt(variance);
  for (double& v : normalized) {
    v -= mean;
    if (std_dev > 0.0) v /= std_dev;
  }
  return normalized;
}

namespace {

// Applies fn(first, count) to each episode's transition range.
template <typename Fn>
void ForEachEpisode(const Batch& batch, Fn&& fn) {
  for (int e = 0; e < batch.NumEpisodes(); ++e) {
    const int first = batch.episode_starts[e];
    const int last = e + 1 < batch.NumEpisodes() ? batch.episode_starts[e + 1]
                                                 : batch.NumSteps();
    fn(first, last - first);
  }
}

}  // namespace

void ComputeTargets(Batch& batch, const AlgoConfig& config) {
  const int n = batch.NumSteps();
  batch.returns.assign(n, 0.0);
  batch.advantages.clear();

  std::vector<double> rewards(n);
  for (int i = 0; i < n; ++i) rewards[i] = batch.transitions[i].reward;

  ForEachEpisode(batch, [&](int first, int count) {
    const auto episode = std::span<const double>(rewards).subspan(first, count);
    const std::vector<double> returns = RewardsToGo(episode, config.gamma);
    std::copy(returns.begin(), returns.end(), batch.returns.begin() + first);
  });

  if (config.HasValueNet()) {
    batch.advantages.assign(n, 0.0);
    std::vector<double> values(n);
    for (int i = 0; i < n; ++i) values[i] = batch.transitions[i].value_estimate;
    ForEachEpisode(batch, [&](int first, int count) {
      const auto r = std::span<const double>(rewards).subspan(first, count);
      const auto v = std::span<const double>(values).subspan(first, count);
      const std::vector<double> adv = Gae(r, v, config.gamma, config.lambda);
      std::copy(adv.begin(), adv.end(), batch.advantages.begin() + first);
    });
    batch.weights = Normalize(batch.advantages);
  } else {
    batch.weights = Normalize(batch.returns);
  }
}

double PolicyObjective(const Batch& batch, const nn::MlpParams& policy,
                       const AlgoConfig& config, bool ppo, nn::Gradients* grads) {
  const int n = batch.NumSteps();
  const int num_actions = kNumEnvActions;
  double objective = 0.0;
  nn::Workspace ws;
  std::vector<double> probs(num_actions);
  std::vector<double> log_probs(num_actions);
  std::vector<double> logit_grad(num_actions);

  for (int i = 0; i < n; ++i) {
    const Transition& t = batch.transitions[i];
    nn::Forward(policy, t.observation, ws);
    const std::vector<double>& logits = ws.act.back();
    nn::Softmax(logits, probs);
    nn::LogSoftmax(logits, log_probs);
    const double entropy = nn::Entropy(probs);
    const double weight = batch.weights[i];
    const int a = t.action_index;

    double coeff;  // d(term)/d(log pi(a|s))
    if (ppo) {
      const double ratio = std::exp(log_probs[a] - t.log_prob);
      const double clipped =
          std::clamp(ratio, 1.0 - config.clip_epsilon, 1.0 + config.clip_epsilon);
      const double surrogate = ratio * weight;
      const double clipped_surrogate = clipped * weight;
      if (surrogate <= clipped_surrogate) {
        objective += surrogate;
        coeff = ratio * weight;  // d(r*w)/d(log pi) = r*w
      } else {
        objective += clipped_surrogate;
        coeff = 0.0;  // the clipped branch is constant in the parameters
      }
    } else {
      objective += log_probs[a] * weight;
      coeff = weight;
    }
    objective += config.entropy_coef * entropy;

    if (grads != nullptr) {
      for (int j = 0; j < num_actions; ++j) {
        double g = coeff * ((j == a ? 1.0 : 0.0) - probs[j]);
        g -= config.entropy_coef * probs[j] * (log_probs[j] + entropy);
        logit_grad[j] = g / n;
      }
      nn::Backward(policy, ws, logit_grad, *grads);
    }
  }
  return objective / n;
}

double ValueLoss(const Batch& batch, const nn::MlpParams& value, nn::Gradients* grads) {
  const int n = batch.NumSteps();
  double loss = 0.0;
  nn::Workspace ws;
  for (int i = 0; i < n; ++i) {
    nn::Forward(value, batch.transitions[i].observation, ws);
    const double error = ws.act.back()[0] - batch.returns[i];
    loss += error * error;
    if (grads != nullptr) {
      const double out_grad[1] = {2.0 * error / n};
      nn::Backward(value, ws, out_grad, *grads);
    }
  }
  return loss / n;
}

namespace {

void PolicyAscentSteps(const Batch& batch, nn::MlpParams& policy,
                       nn::AdamState& adam, const AlgoConfig& config, bool ppo,
                       int iterations, UpdateStats& stats) {
  nn::Gradients grads = nn::MakeGradients(policy);
  for (int iter = 0; iter < iterations; ++iter) {
    grads.Zero();
    const double objective = PolicyObjective(batch, policy, config, ppo, &grads);
    if (iter == 0) stats.policy_objective = objective;
    // Ascent: descend the negated objective gradient.
    for (nn::Layer& layer : grads.layers) {
      for (double& g : layer.w) g = -g;
      for (double& g : layer.b) g = -g;
    }
    nn::AdamStep(policy, grads, adam, config.policy_lr);
  }
}

void ValueDescentSteps(const Batch& batch, nn::MlpParams& value, nn::AdamState& adam,
                       const AlgoConfig& config, UpdateStats& stats) {
  nn::Gradients grads = nn::MakeGradients(value);
  for (int iter = 0; iter < config.value_iterations; ++iter) {
    grads.Zero();
    stats.value_losses.push_back(ValueLoss(batch, value, &grads));
    nn::AdamStep(value, grads, adam, config.value_lr);
  }
  stats.value_loss = ValueLoss(batch, value, nullptr);
  stats.value_losses.push_back(stats.value_loss);
}

}  // namespace

UpdateStats SpgUpdate(const Batch& batch, nn::MlpParams& policy,
                      nn::AdamState& policy_adam, const AlgoConfig& config) {
  UpdateStats stats;
  stats.mean_entropy = batch.mean_entropy;
  PolicyAscentSteps(batch, policy, policy_adam, config, /*ppo=*/false,
                    config.policy_iterations, stats);
  return stats;
}

UpdateStats VpgUpdate(const Batch& batch, nn::MlpParams& policy,
                      nn::AdamState& policy_adam, nn::MlpParams& value,
                      nn::AdamState& value_adam, const AlgoConfig& config) {
  UpdateStats stats;
  stats.mean_entropy = batch.mean_entropy;
  PolicyAscentSteps(batch, policy, policy_adam, config, /*ppo=*/false,
                    config.policy_iterations, stats);
  ValueDescentSteps(batch, value, value_adam, config, stats);
  return stats;
}

UpdateStats PpoUpdate(const Batch& batch, nn::MlpParams& policy,
                      nn::AdamState& policy_adam, nn::MlpParams& value,
                      nn::AdamState& value_adam, const AlgoConfig& config) {
  UpdateStats stats;
  stats.mean_entropy = batch.mean_entropy;
  PolicyAscentSteps(batch, policy, policy_adam, config, /*ppo=*/true,
                    config.policy_iterations, stats);
  ValueDescentSteps(batch, value, value_adam, config, stats);
  return stats;
}

}  // namespace hanabi::rl
