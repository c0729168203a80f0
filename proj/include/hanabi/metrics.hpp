#ifndef HANABI_METRICS_HPP_
#define HANABI_METRICS_HPP_

#include <array>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "hanabi/cheat_env.hpp"

namespace hanabi::metrics {

struct EpisodeSummary {
  int score = 0;            // 0 when all lives were lost
  int fireworks_total = 0;  // successful plays, kept even after a loss
  int lives_left = 0;
  int turns = 0;
  bool perfect = false;
};

EpisodeSummary SummarizeEpisode(const std::vector<EnvTurnRecord>& trace);

// Mean policy output over the visited states of a batch.
struct ActionProbProfile {
  std::array<double, kNumEnvActions> p{};
};

inline constexpr std::array<int, 5> kPlaySlots{0, 1, 2, 3, 4};
inline constexpr std::array<int, 5> kDiscardSlots{5, 6, 7, 8, 9};

// Largest pairwise probability gap within the subset, rescaled by the
// subset's total mass. 0 when all equal, 1 when one action holds all the
// mass; undefined (nullopt) when the subset mass is zero.
std::optional<double> PositionalBias(const ActionProbProfile& profile,
                                     std::span<const int> subset);

struct EpochAggregate {
  int episodes = 0;
  double mean_score = 0.0;
  double mean_fireworks = 0.0;
  double mean_lives_left = 0.0;
  double mean_turns = 0.0;
  double mean_entropy = 0.0;
  double play_bias = 0.0;     // 0 when undefined
  double discard_bias = 0.0;  // 0 when undefined
};

EpochAggregate AggregateEpoch(std::span<const EpisodeSummary> summaries,
                              const ActionProbProfile& mean_profile,
                              double mean_entropy);

struct EvalReport {
  int n_games = 0;
  double mean_score = 0.0;
  double stderr_score = 0.0;
  double perfect_fraction = 0.0;
  double mean_fireworks = 0.0;
  double mean_turns = 0.0;
  std::optional<double> play_bias;
  std::optional<double> discard_bias;
};

std::string EvalReportToJson(const EvalReport& report);

}  // namespace hanabi::metrics

#endif  // HANABI_METRICS_HPP_
