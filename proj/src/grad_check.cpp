#include "hanabi/grad_check.hpp"

#include <algorithm>
#include <cmath>

namespace hanabi {

namespace {

using rl::AlgoConfig;
using rl::Algorithm;
using rl::Batch;

constexpr int kBatchSize = 8;
constexpr double kClipMargin = 1e-3;

Observation RandomObservation(Rng& rng) {
  Observation obs{};
  for (double& bit : obs) bit = rng.UniformInt(2) ? 1.0 : 0.0;
  return obs;
}

// Small batch with random rewards, actions and value estimates, run through
// the regular target computation.
Batch MakeBatch(Rng& rng, const AlgoConfig& config) {
  Batch batch;
  batch.episode_starts = {0, kBatchSize / 2};
  for (int i = 0; i < kBatchSize; ++i) {
    rl::Transition t;
    t.observation = RandomObservation(rng);
    t.action_index = static_cast<int>(rng.UniformInt(kNumEnvActions));
    t.reward = rng.Gaussian();
    t.value_estimate = rng.Gaussian();
    t.episode_id = i < kBatchSize / 2 ? 0 : 1;
    batch.transitions.push_back(std::move(t));
  }
  rl::ComputeTargets(batch, config);
  return batch;
}

// Relative error with an absolute floor: entries far below the gradient's
// natural scale are compared absolutely, since central differences bottom
// out near 1e-11 from cancellation.
double RelError(double analytic, double numeric) {
  const double denom = std::max({1e-6, std::abs(analytic), std::abs(numeric)});
  return std::abs(analytic - numeric) / denom;
}

template <typename Loss>
double MaxGradError(nn::MlpParams& params, const nn::Gradients& analytic,
                    Loss&& loss, double step) {
  double max_error = 0.0;
  for (size_t l = 0; l < params.layers.size(); ++l) {
    auto check = [&](std::vector<double>& values, const std::vector<double>& grads) {
      for (size_t i = 0; i < values.size(); ++i) {
        const double saved = values[i];
        values[i] = saved + step;
        const double up = loss();
        values[i] = saved - step;
        const double down = loss();
        values[i] = saved;
        const double numeric = (up - down) / (2.0 * step);
        max_error = std::max(max_error, RelError(grads[i], numeric));
      }
    };
    check(params.layers[l].w, analytic.layers[l].w);
    check(params.layers[l].b, analytic.layers[l].b);
  }
  return max_error;
}

std::vector<int> SmallPolicySizes() { return {kObservationSize, 16, 12, kNumEnvActions}; }
std::vector<int> SmallValueSizes() { return {kObservationSize, 16, 12, 1}; }

double CheckPolicyObjective(Algorithm algorithm, uint64_t seed, double step) {
  const AlgoConfig config = AlgoConfig::Defaults(algorithm);
  const bool ppo = algorithm == Algorithm::kPpo;
  Rng rng(seed);

  for (int attempt = 0;; ++attempt) {
    nn::MlpParams params =
        nn::Init(SmallPolicySizes(), nn::HeadKind::kSoftmaxPolicy, rng.NextUint64());
    Batch batch = MakeBatch(rng, config);

    if (ppo) {
      // Collection-time log-probs come from a nearby set of parameters so the
      // probability ratios spread around 1 and both clip branches occur.
      nn::MlpParams old_params = params;
      for (nn::Layer& layer : old_params.layers) {
        for (double& w : layer.w) w += 0.05 * rng.Gaussian();
        for (double& b : layer.b) b += 0.05 * rng.Gaussian();
      }
      bool near_kink = false;
      for (rl::Transition& t : batch.transitions) {
        t.log_prob = std::log(nn::ForwardPolicy(old_params, t.observation)
                                  [t.action_index]);
        const double ratio =
            nn::ForwardPolicy(params, t.observation)[t.action_index] /
            std::exp(t.log_prob);
        near_kink |= std::abs(ratio - (1.0 - config.clip_epsilon)) < kClipMargin;
        near_kink |= std::abs(ratio - (1.0 + config.clip_epsilon)) < kClipMargin;
      }
      // A ratio sitting on a clip boundary makes the objective locally
      // non-differentiable; redraw the batch instead of checking a kink.
      if (near_kink && attempt < 50) continue;
    } else {
      for (rl::Transition& t : batch.transitions) {
        t.log_prob = std::log(nn::ForwardPolicy(params, t.observation)[t.action_index]);
      }
    }

    nn::Gradients grads = nn::MakeGradients(params);
    rl::PolicyObjective(batch, params, config, ppo, &grads);
    return MaxGradError(
        params, grads,
        [&] { return rl::PolicyObjective(batch, params, config, ppo, nullptr); }, step);
  }
}

double CheckValueObjective(uint64_t seed, double step) {
  const AlgoConfig config = AlgoConfig::Defaults(Algorithm::kVpg);
  Rng rng(seed);
  nn::MlpParams params =
      nn::Init(SmallValueSizes(), nn::HeadKind::kScalarValue, rng.NextUint64());
  Batch batch = MakeBatch(rng, config);
  nn::Gradients grads = nn::MakeGradients(params);
  rl::ValueLoss(batch, params, &grads);
  return MaxGradError(params, grads,
                      [&] { return rl::ValueLoss(batch, params, nullptr); }, step);
}

}  // namespace

double GradCheckReport::MaxError() const {
  return std::max({spg_max_rel_error, vpg_max_rel_error, ppo_max_rel_error,
                   value_max_rel_error});
}

GradCheckReport RunGradCheck(uint64_t seed, int batches_per_objective, double step) {
  GradCheckReport report;
  for (int i = 0; i < batches_per_objective; ++i) {
    const uint64_t batch_seed = Rng::DeriveSeed(seed, i);
    report.spg_max_rel_error = std::max(
        report.spg_max_rel_error, CheckPolicyObjective(Algorithm::kSpg, batch_seed, step));
    report.vpg_max_rel_error = std::max(
        report.vpg_max_rel_error, CheckPolicyObjective(Algorithm::kVpg, batch_seed, step));
    report.ppo_max_rel_error = std::max(
        report.ppo_max_rel_error, CheckPolicyObjective(Algorithm::kPpo, batch_seed, step));
    report.value_max_rel_error =
        std::max(report.value_max_rel_error, CheckValueObjective(batch_seed, step));
  }
  return report;
}

}  // namespace hanabi
