#include "hanabi/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <json.hpp>

namespace hanabi::metrics {

EpisodeSummary SummarizeEpisode(const std::vector<EnvTurnRecord>& trace) {
  EpisodeSummary summary;
  if (trace.empty()) return summary;
  for (const EnvTurnRecord& record : trace) {
    if (record.outcome.was_successful_play) ++summary.fireworks_total;
  }
  const EnvTurnRecord& last = trace.back();
  summary.score = last.score_after;
  summary.lives_left = last.lives_after;
  summary.turns = static_cast<int>(trace.size());
  summary.perfect = summary.score == kPerfectScore;
  return summary;
}

std::optional<double> PositionalBias(const ActionProbProfile& profile,
                                     std::span<const int> subset) {
  double mass = 0.0;
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  for (int index : subset) {
    const double p = profile.p[index];
    mass += p;
    lo = std::min(lo, p);
    hi = std::max(hi, p);
  }
  if (mass <= 0.0) return std::nullopt;
  return (hi - lo) / mass;
}

EpochAggregate AggregateEpoch(std::span<const EpisodeSummary> summaries,
                              const ActionProbProfile& mean_profile,
                              double mean_entropy) {
  EpochAggregate agg;
  agg.episodes = static_cast<int>(summaries.size());
  for (const EpisodeSummary& s : summaries) {
    agg.mean_score += s.score;
    agg.mean_fireworks += s.fireworks_total;
    agg.mean_lives_left += s.lives_left;
    agg.mean_turns += s.turns;
  }
  if (agg.episodes > 0) {
    agg.mean_score /= agg.episodes;
    agg.mean_fireworks /= agg.episodes;
    agg.mean_lives_left /= agg.episodes;
    agg.mean_turns /= agg.episodes;
  }
  agg.mean_entropy = mean_entropy;
  agg.play_bias = PositionalBias(mean_profile, kPlaySlots).value_or(0.0);
  agg.discard_bias = PositionalBias(mean_profile, kDiscardSlots).value_or(0.0);
  return agg;
}

std::string EvalReportToJson(const EvalReport& report) {
  nlohmann::ordered_json j;
  j["n_games"] = report.n_games;
  j["mean_score"] = report.mean_score;
  j["stderr_score"] = report.stderr_score;
  j["perfect_fraction"] = report.perfect_fraction;
  j["mean_fireworks"] = report.mean_fireworks;
  j["mean_turns"] = report.mean_turns;
  if (report.play_bias) {
    j["play_bias"] = *report.play_bias;
  } else {
    j["play_bias"] = nullptr;
  }
  if (report.discard_bias) {
    j["discard_bias"] = *report.discard_bias;
  } else {
    j["discard_bias"] = nullptr;
  }
  return j.dump(2);
}

}  // namespace hanabi::metrics
