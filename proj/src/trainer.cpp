#include "hanabi/trainer.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

namespace hanabi {

std::string EpochCsvHeader() {
  return "epoch,env_steps,episodes,mean_score,mean_fireworks,mean_lives_left,"
         "mean_entropy,play_bias,discard_bias,value_loss,policy_objective";
}

std::string EpochCsvRow(const EpochRow& row) {
  char buffer[512];
  std::snprintf(buffer, sizeof(buffer),
                "%d,%d,%d,%.6f,%.6f,%.6f,%.6f,%.6f,%.6f,%.6f,%.6f", row.epoch,
                row.env_steps, row.episodes, row.mean_score, row.mean_fireworks,
                row.mean_lives_left, row.mean_entropy, row.play_bias,
                row.discard_bias, row.value_loss, row.policy_objective);
  return buffer;
}

Trainer::Trainer(const RunConfig& config)
    : config_(config),
      rng_(Rng::DeriveSeed(config.seed, 0)),
      env_(config.rewards),
      policy_(nn::Init(rl::PolicyLayerSizes(), nn::HeadKind::kSoftmaxPolicy,
                       Rng::DeriveSeed(config.seed, 1))),
      policy_adam_(nn::MakeAdamState(policy_)) {
  if (config_.algo.HasValueNet()) {
    value_ = nn::Init(rl::ValueLayerSizes(), nn::HeadKind::kScalarValue,
                      Rng::DeriveSeed(config.seed, 2));
    value_adam_ = nn::MakeAdamState(*value_);
  }
}

EpochRow Trainer::RunEpoch() {
  rl::Batch batch = rl::CollectBatch(env_, policy_, value_ ? &*value_ : nullptr,
                                     config_.batch_min_steps, rng_);
  rl::ComputeTargets(batch, config_.algo);

  rl::UpdateStats stats;
  switch (config_.algo.algorithm) {
    case rl::Algorithm::kSpg:
      stats = rl::SpgUpdate(batch, policy_, policy_adam_, config_.algo);
      break;
    case rl::Algorithm::kVpg:
      stats = rl::VpgUpdate(batch, policy_, policy_adam_, *value_, *value_adam_,
                            config_.algo);
      break;
    case rl::Algorithm::kPpo:
      stats = rl::PpoUpdate(batch, policy_, policy_adam_, *value_, *value_adam_,
                            config_.algo);
      break;
  }

  const metrics::EpochAggregate agg =
      metrics::AggregateEpoch(batch.episodes, batch.mean_profile, batch.mean_entropy);

  ++epoch_;
  EpochRow row;
  row.epoch = epoch_;
  row.env_steps = batch.NumSteps();
  row.episodes = batch.NumEpisodes();
  row.mean_score = agg.mean_score;
  row.mean_fireworks = agg.mean_fireworks;
  row.mean_lives_left = agg.mean_lives_left;
  row.mean_entropy = agg.mean_entropy;
  row.play_bias = agg.play_bias;
  row.discard_bias = agg.discard_bias;
  row.value_loss = stats.value_loss;
  row.policy_objective = stats.policy_objective;
  return row;
}

Checkpoint Trainer::MakeCheckpoint() const {
  Checkpoint checkpoint;
  checkpoint.algorithm = config_.algo.algorithm;
  checkpoint.epoch = epoch_;
  checkpoint.policy = policy_;
  checkpoint.policy_adam = policy_adam_;
  checkpoint.value = value_;
  checkpoint.value_adam = value_adam_;
  return checkpoint;
}

void RunTraining(const RunConfig& config,
                 const std::function<void(const EpochRow&)>& on_epoch) {
  namespace fs = std::filesystem;
  const fs::path out_dir = config.out_dir.empty() ? fs::path(".") : fs::path(config.out_dir);
  fs::create_directories(out_dir);

  {
    std::ofstream manifest(out_dir / "manifest.json");
    if (!manifest) throw std::runtime_error("cannot write manifest in " + out_dir.string());
    manifest << RunManifest(config) << "\n";
  }
  std::ofstream csv(out_dir / "metrics.csv");
  if (!csv) throw std::runtime_error("cannot write metrics.csv in " + out_dir.string());
  csv << EpochCsvHeader() << "\n";

  Trainer trainer(config);
  for (int epoch = 1; epoch <= config.epochs; ++epoch) {
    const EpochRow row = trainer.RunEpoch();
    csv << EpochCsvRow(row) << "\n";
    csv.flush();
    if (config.checkpoint_every > 0 && epoch % config.checkpoint_every == 0) {
      char name[64];
      std::snprintf(name, sizeof(name), "checkpoint_%06d.bin", epoch);
      SaveCheckpoint(trainer.MakeCheckpoint(), (out_dir / name).string());
    }
    if (on_epoch) on_epoch(row);
  }
  SaveCheckpoint(trainer.MakeCheckpoint(), (out_dir / "checkpoint_final.bin").string());
}

metrics::EvalReport EvaluatePolicy(const nn::MlpParams& policy, int n_games,
                                   uint64_t seed, bool greedy) {
  if (n_games <= 0) throw std::invalid_argument("n_games must be positive");
  CheatEnv env;
  Rng rng(Rng::DeriveSeed(seed, 3));
  std::vector<metrics::EpisodeSummary> summaries;
  summaries.reserve(n_games);
  metrics::ActionProbProfile profile;
  double entropy_sum = 0.0;
  int64_t states = 0;

  for (int game = 0; game < n_games; ++game) {
    Observation obs = env.Reset(rng.NextUint64());
    while (!env.Done()) {
      const std::vector<double> probs = nn::ForwardPolicy(policy, obs);
      for (int i = 0; i < kNumEnvActions; ++i) profile.p[i] += probs[i];
      entropy_sum += nn::Entropy(probs);
      ++states;

      int action = 0;
      if (greedy) {
        action = static_cast<int>(
            std::max_element(probs.begin(), probs.end()) - probs.begin());
      } else {
        const double u = rng.UniformReal();
        double cumulative = 0.0;
        action = kNumEnvActions - 1;
        for (int i = 0; i < kNumEnvActions; ++i) {
          cumulative += probs[i];
          if (u < cumulative) {
            action = i;
            break;
          }
        }
      }
      obs = env.Step({action}).observation;
    }
    summaries.push_back(metrics::SummarizeEpisode(env.trace()));
  }

  for (int i = 0; i < kNumEnvActions; ++i) profile.p[i] /= static_cast<double>(states);

  metrics::EvalReport report;
  report.n_games = n_games;
  double sum = 0.0;
  for (const auto& s : summaries) {
    sum += s.score;
    report.mean_fireworks += s.fireworks_total;
    report.mean_turns += s.turns;
    if (s.perfect) report.perfect_fraction += 1.0;
  }
  report.mean_score = sum / n_games;
  report.mean_fireworks /= n_games;
  report.mean_turns /= n_games;
  report.perfect_fraction /= n_games;
  double variance = 0.0;
  for (const auto& s : summaries) {
    variance += (s.score - report.mean_score) * (s.score - report.mean_score);
  }
  if (n_games > 1) {
    report.stderr_score = std::sqrt(variance / (n_games - 1)) / std::sqrt(n_games);
  }
  report.play_bias = metrics::PositionalBias(profile, metrics::kPlaySlots);
  report.discard_bias = metrics::PositionalBias(profile, metrics::kDiscardSlots);
  return report;
}

}  // namespace hanabi
