#ifndef HANABI_CHEAT_ENV_HPP_
#define HANABI_CHEAT_ENV_HPP_

#include <array>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "hanabi/engine.hpp"
#include "hanabi/rng.hpp"

namespace hanabi {

// Binary state encoding: fireworks thermometers (5x5), own-hand one-hots
// (5 slots x 10), discard pile (5 colors x 10), life thermometer (3),
// hint thermometer (8).
inline constexpr int kObservationSize = 136;
inline constexpr int kNumEnvActions = 11;  // 5 play, 5 discard, 1 random hint

using Observation = std::array<double, kObservationSize>;

inline constexpr int kFireworksOffset = 0;
inline constexpr int kOwnHandOffset = 25;
inline constexpr int kDiscardOffset = 75;
inline constexpr int kLifeOffset = 125;
inline constexpr int kHintOffset = 128;

Observation Encode(const GameState& state, int player);

struct EnvAction {
  int index = 0;  // 0-4 play slot, 5-9 discard slot, 10 random hint

  bool operator==(const EnvAction&) const = default;
};

struct StepInfo {
  int score = 0;
  int fireworks_total = 0;
  int life_tokens = 0;
  int turns = 0;
  bool illegal = false;
};

struct StepResult {
  Observation observation;  // next acting player's view
  double reward = 0.0;
  bool done = false;
  StepInfo info;
};

// One reward-relevant event record per turn; enough to recount the episode
// reward from the per-event values independently of the running sum.
struct EnvTurnRecord {
  int turn = 0;
  int player = 0;
  int action_index = 0;  // as selected by the agent
  Action executed;       // engine action actually taken
  TurnOutcome outcome;
  CardClass discard_class = CardClass::kOther;  // when a card was discarded
  bool illegal = false;
  int fireworks_before = 0;
  double reward = 0.0;
  int score_after = 0;
  int lives_after = 0;
  int hints_after = 0;
  int deck_after = 0;
};

struct EpisodeFinishedError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct RewardTable {
  double successful_play = 10.0;
  double lost_all_lives_score_factor = -1.0;  // times fireworks at loss
  double illegal_move = -1.0;
  double lost_one_life = -0.1;
  double hint = -0.02;
  double play_attempt = 0.02;
  double discard_playable = -0.1;
  double discard_useless = 0.1;
  double discard_unique_critical = -0.1;

  bool operator==(const RewardTable&) const = default;
};

double ShapedReward(const RewardTable& table, const TurnOutcome& outcome,
                    const GameState& pre_state, const GameState& post_state,
                    bool illegal);

// Two-player self-play environment over the full-rules engine, with hands
// visible to their owners. Illegal selections cost the illegal-move penalty
// and are replaced by a uniformly random legal action so the turn always
// advances.
class CheatEnv {
 public:
  explicit CheatEnv(RewardTable rewards = {}) : rewards_(rewards), rng_(0) {}

  Observation Reset(uint64_t seed);
  StepResult Step(EnvAction action);

  bool Done() const { return state_.status != Status::kInProgress; }
  const GameState& state() const { return state_; }
  const std::vector<EnvTurnRecord>& trace() const { return trace_; }
  const RewardTable& rewards() const { return rewards_; }

 private:
  RewardTable rewards_;
  GameState state_;
  Rng rng_;
  std::vector<EnvTurnRecord> trace_;
  bool started_ = false;
};

}  // namespace hanabi

#endif  // HANABI_CHEAT_ENV_HPP_
