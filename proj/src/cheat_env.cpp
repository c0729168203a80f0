#include "hanabi/cheat_env.hpp"

#include <algorithm>

namespace hanabi {

Observation Encode(const GameState& state, int player) {
  Observation obs{};
  for (int c = 0; c < kNumColors; ++c) {
    for (int height = 0; height < state.fireworks[c]; ++height) {
      obs[kFireworksOffset + 5 * c + height] = 1.0;
    }
  }
  const auto& hand = state.hands[player];
  for (size_t slot = 0; slot < hand.size(); ++slot) {
    const int base = kOwnHandOffset + 10 * static_cast<int>(slot);
    obs[base + static_cast<int>(hand[slot].color)] = 1.0;
    obs[base + 5 + hand[slot].rank - 1] = 1.0;
  }
  for (int c = 0; c < kNumColors; ++c) {
    int base = kDiscardOffset + 10 * c;
    for (int rank = 1; rank <= kNumRanks; ++rank) {
      for (int i = 0; i < state.discard_counts[c][rank - 1]; ++i) {
        obs[base + i] = 1.0;
      }
      base += NumCopies(rank);
    }
  }
  for (int i = 0; i < state.life_tokens; ++i) obs[kLifeOffset + i] = 1.0;
  for (int i = 0; i < state.hint_tokens; ++i) obs[kHintOffset + i] = 1.0;
  return obs;
}

double ShapedReward(const RewardTable& table, const TurnOutcome& outcome,
                    const GameState& pre_state, const GameState& post_state,
                    bool illegal) {
  double reward = 0.0;
  if (illegal) reward += table.illegal_move;
  switch (outcome.action_taken.type) {
    case Action::Type::kPlay:
      reward += table.play_attempt;
      if (outcome.was_successful_play) reward += table.successful_play;
      break;
    case Action::Type::kDiscard: {
      switch (ClassifyCard(pre_state, *outcome.card_moved)) {
        case CardClass::kPlayable: reward += table.discard_playable; break;
        case CardClass::kUseless: reward += table.discard_useless; break;
        case CardClass::kUniqueCritical: reward += table.discard_unique_critical; break;
        case CardClass::kOther: break;
      }
      break;
    }
    case Action::Type::kHintColor:
    case Action::Type::kHintRank:
      reward += table.hint;
      break;
  }
  if (outcome.life_token_delta < 0) {
    reward += table.lost_one_life;
    if (post_state.status == Status::kLivesExhausted) {
      reward += table.lost_all_lives_score_factor * post_state.FireworksTotal();
    }
  }
  return reward;
}

Observation CheatEnv::Reset(uint64_t seed) {
  state_ = NewGame(2, Rng::DeriveSeed(seed, 0));
  rng_ = Rng(Rng::DeriveSeed(seed, 1));
  trace_.clear();
  started_ = true;
  return Encode(state_, state_.current_player);
}

StepResult CheatEnv::Step(EnvAction action) {
  if (!started_ || Done()) {
    throw EpisodeFinishedError("step called on a finished episode");
  }
  if (action.index < 0 || action.index >= kNumEnvActions) {
    throw std::invalid_argument("action index must be 0..10");
  }
  const int actor = state_.current_player;
  const int hand_size = static_cast<int>(state_.hands[actor].size());

  bool illegal = false;
  Action engine_action;
  if (action.index == 10) {
    if (state_.hint_tokens == 0) {
      illegal = true;
    }
  } else if (action.index < 5) {
    if (action.index >= hand_size) {
      illegal = true;
    } else {
      engine_action = Action::Play(action.index);
    }
  } else {
    const int slot = action.index - 5;
    if (slot >= hand_size || state_.hint_tokens == kMaxHintTokens) {
      illegal = true;
    } else {
      engine_action = Action::Discard(slot);
    }
  }

  if (illegal) {
    // Substitute a uniformly random legal action; the turn still advances.
    const std::vector<Action> legal = LegalActions(state_);
    engine_action = legal[rng_.UniformInt(static_cast<uint32_t>(legal.size()))];
  } else if (action.index == 10) {
    // A hint is legal; pick uniformly among the legal (target, property) pairs.
    std::vector<Action> hints;
    for (const Action& candidate : LegalActions(state_)) {
      if (candidate.IsHint()) hints.push_back(candidate);
    }
    engine_action = hints[rng_.UniformInt(static_cast<uint32_t>(hints.size()))];
  }

  const int fireworks_before = state_.FireworksTotal();
  auto [next, outcome] = ApplyAction(state_, engine_action);
  const double reward = ShapedReward(rewards_, outcome, state_, next, illegal);

  EnvTurnRecord record;
  record.turn = next.turns_taken;
  record.player = actor;
  record.action_index = action.index;
  record.executed = engine_action;
  record.outcome = outcome;
  if (outcome.action_taken.type == Action::Type::kDiscard) {
    record.discard_class = ClassifyCard(state_, *outcome.card_moved);
  }
  record.illegal = illegal;
  record.fireworks_before = fireworks_before;
  record.reward = reward;

  state_ = std::move(next);

  record.score_after = Score(state_);
  record.lives_after = state_.life_tokens;
  record.hints_after = state_.hint_tokens;
  record.deck_after = state_.DeckSize();
  trace_.push_back(record);

  StepResult result;
  result.observation = Encode(state_, state_.current_player);
  result.reward = reward;
  result.done = Done();
  result.info = {Score(state_), state_.FireworksTotal(), state_.life_tokens,
                 state_.turns_taken, illegal};
  return result;
}

}  // namespace hanabi
