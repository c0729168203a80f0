#include "hanabi/engine.hpp"

#include <algorithm>
#include <sstream>

#include "hanabi/rng.hpp"

namespace hanabi {

namespace {
constexpr char kColorLetters[kNumColors + 1] = "RYGWB";
}  // namespace

char ColorLetter(Color c) { return kColorLetters[static_cast<int>(c)]; }

std::optional<Color> ColorFromLetter(char letter) {
  for (int i = 0; i < kNumColors; ++i) {
    if (kColorLetters[i] == letter) return static_cast<Color>(i);
  }
  return std::nullopt;
}

int NumCopies(int rank) {
  if (rank == 1) return 3;
  if (rank == kNumRanks) return 1;
  return 2;
}

std::string CardToString(Card card) {
  return std::string(1, ColorLetter(card.color)) + std::to_string(card.rank);
}

std::string ActionToString(const Action& action) {
  std::ostringstream out;
  switch (action.type) {
    case Action::Type::kPlay:
      out << "play " << static_cast<int>(action.index);
      break;
    case Action::Type::kDiscard:
      out << "discard " << static_cast<int>(action.index);
      break;
    case Action::Type::kHintColor:
      out << "hint " << static_cast<int>(action.target) << " color "
          << ColorLetter(static_cast<Color>(action.value));
      break;
    case Action::Type::kHintRank:
      out << "hint " << static_cast<int>(action.target) << " rank "
          << static_cast<int>(action.value);
      break;
  }
  return out.str();
}

Action ActionFromString(const std::string& text) {
  std::istringstream in(text);
  std::string kind;
  in >> kind;
  if (kind == "play" || kind == "discard") {
    int slot = -1;
    in >> slot;
    if (in.fail() || slot < 0) throw std::invalid_argument("bad action: " + text);
    return kind == "play" ? Action::Play(slot) : Action::Discard(slot);
  }
  if (kind == "hint") {
    int target = -1;
    std::string property;
    in >> target >> property;
    if (in.fail() || target < 0) throw std::invalid_argument("bad action: " + text);
    if (property == "color") {
      std::string letter;
      in >> letter;
      auto color = letter.size() == 1 ? ColorFromLetter(letter[0]) : std::nullopt;
      if (!color) throw std::invalid_argument("bad hint color: " + text);
      return Action::HintColor(target, *color);
    }
    if (property == "rank") {
      int rank = 0;
      in >> rank;
      if (in.fail() || rank < 1 || rank > kNumRanks) {
        throw std::invalid_argument("bad hint rank: " + text);
      }
      return Action::HintRank(target, rank);
    }
  }
  throw std::invalid_argument("bad action: " + text);
}

int GameState::FireworksTotal() const {
  int total = 0;
  for (int8_t height : fireworks) total += height;
  return total;
}

int HandSizeFor(int players) { return players <= 3 ? 5 : 4; }

std::vector<Card> CanonicalDeck() {
  std::vector<Card> deck;
  deck.reserve(kDeckSize);
  for (int c = 0; c < kNumColors; ++c) {
    for (int rank = 1; rank <= kNumRanks; ++rank) {
      for (int copy = 0; copy < NumCopies(rank); ++copy) {
        deck.push_back({static_cast<Color>(c), static_cast<int8_t>(rank)});
      }
    }
  }
  return deck;
}

namespace {

bool IsCanonicalMultiset(const std::vector<Card>& deck) {
  if (deck.size() != kDeckSize) return false;
  int counts[kNumColors][kNumRanks + 1] = {};
  for (const Card& card : deck) {
    const int c = static_cast<int>(card.color);
    if (c < 0 || c >= kNumColors || card.rank < 1 || card.rank > kNumRanks) return false;
    ++counts[c][card.rank];
  }
  for (int c = 0; c < kNumColors; ++c) {
    for (int rank = 1; rank <= kNumRanks; ++rank) {
      if (counts[c][rank] != NumCopies(rank)) return false;
    }
  }
  return true;
}

GameState Deal(int players, std::vector<Card> deck) {
  GameState state;
  state.hands.resize(players);
  const int hand_size = HandSizeFor(players);
  for (auto& hand : state.hands) hand.reserve(hand_size + 1);
  // Round-robin from the deck front, one card per player at a time.
  size_t next = 0;
  for (int i = 0; i < hand_size; ++i) {
    for (int p = 0; p < players; ++p) {
      state.hands[p].push_back(deck[next++]);
    }
  }
  state.deck.assign(deck.begin() + next, deck.end());
  return state;
}

void DrawCard(GameState& state, int player, TurnOutcome& outcome) {
  if (state.deck.empty()) return;
  state.hands[player].push_back(state.deck.front());
  state.deck.erase(state.deck.begin());
  outcome.drew_card = true;
  if (state.deck.empty()) {
    outcome.deck_emptied_this_turn = true;
    state.endgame_turns_left = static_cast<int8_t>(state.NumPlayers());
  }
}

}  // namespace

GameState NewGame(int players, uint64_t seed) {
  if (players < 2 || players > 5) throw std::invalid_argument("players must be 2..5");
  std::vector<Card> deck = CanonicalDeck();
  Rng rng(seed);
  rng.Shuffle(deck);
  return Deal(players, std::move(deck));
}

GameState NewGame(int players, const std::vector<Card>& deck) {
  if (players < 2 || players > 5) throw std::invalid_argument("players must be 2..5");
  if (!IsCanonicalMultiset(deck)) {
    throw InvalidDeckError("deck is not a permutation of the canonical 50-card multiset");
  }
  return Deal(players, deck);
}

bool IsLegal(const GameState& state, const Action& action) {
  if (state.status != Status::kInProgress) return false;
  const int actor = state.current_player;
  switch (action.type) {
    case Action::Type::kPlay:
      return action.index >= 0 &&
             action.index < static_cast<int>(state.hands[actor].size());
    case Action::Type::kDiscard:
      return state.hint_tokens < kMaxHintTokens && action.index >= 0 &&
             action.index < static_cast<int>(state.hands[actor].size());
    case Action::Type::kHintColor:
    case Action::Type::kHintRank: {
      if (state.hint_tokens == 0) return false;
      if (action.target == actor || action.target < 0 ||
          action.target >= state.NumPlayers()) {
        return false;
      }
      // The hinted property must match at least one card.
      for (const Card& card : state.hands[action.target]) {
        if (action.type == Action::Type::kHintColor
                ? static_cast<int>(card.color) == action.value
                : card.rank == action.value) {
          return true;
        }
      }
      return false;
    }
  }
  return false;
}

std::vector<Action> LegalActions(const GameState& state) {
  std::vector<Action> actions;
  if (state.status != Status::kInProgress) return actions;
  const int actor = state.current_player;
  const int hand_size = static_cast<int>(state.hands[actor].size());
  for (int i = 0; i < hand_size; ++i) actions.push_back(Action::Play(i));
  if (state.hint_tokens < kMaxHintTokens) {
    for (int i = 0; i < hand_size; ++i) actions.push_back(Action::Discard(i));
  }
  if (state.hint_tokens > 0) {
    for (int target = 0; target < state.NumPlayers(); ++target) {
      if (target == actor) continue;
      bool colors[kNumColors] = {};
      bool ranks[kNumRanks + 1] = {};
      for (const Card& card : state.hands[target]) {
        colors[static_cast<int>(card.color)] = true;
        ranks[card.rank] = true;
      }
      for (int c = 0; c < kNumColors; ++c) {
        if (colors[c]) actions.push_back(Action::HintColor(target, static_cast<Color>(c)));
      }
      for (int rank = 1; rank <= kNumRanks; ++rank) {
        if (ranks[rank]) actions.push_back(Action::HintRank(target, rank));
      }
    }
  }
  return actions;
}

std::pair<GameState, TurnOutcome> ApplyAction(const GameState& state, const Action& action) {
  if (!IsLegal(state, action)) {
    throw IllegalActionError("illegal action: " + ActionToString(action));
  }
  GameState next = state;
  TurnOutcome outcome;
  outcome.action_taken = action;
  const int actor = next.current_player;
  const bool deck_was_empty = next.deck.empty();

  switch (action.type) {
    case Action::Type::kPlay: {
      Card card = next.hands[actor][action.index];
      next.hands[actor].erase(next.hands[actor].begin() + action.index);
      outcome.card_moved = card;
      const int c = static_cast<int>(card.color);
      if (card.rank == next.fireworks[c] + 1) {
        next.fireworks[c] = card.rank;
        outcome.was_successful_play = true;
        if (card.rank == kNumRanks) {
          outcome.completed_stack = true;
          if (next.hint_tokens < kMaxHintTokens) {
            ++next.hint_tokens;
            outcome.hint_token_delta = 1;
          }
        }
      } else {
        ++next.discard_counts[c][card.rank - 1];
        --next.life_tokens;
        outcome.life_token_delta = -1;
      }
      DrawCard(next, actor, outcome);
      break;
    }
    case Action::Type::kDiscard: {
      Card card = next.hands[actor][action.index];
      next.hands[actor].erase(next.hands[actor].begin() + action.index);
      outcome.card_moved = card;
      ++next.discard_counts[static_cast<int>(card.color)][card.rank - 1];
      ++next.hint_tokens;
      outcome.hint_token_delta = 1;
      DrawCard(next, actor, outcome);
      break;
    }
    case Action::Type::kHintColor:
    case Action::Type::kHintRank:
      --next.hint_tokens;
      outcome.hint_token_delta = -1;
      break;
  }

  ++next.turns_taken;
  if (deck_was_empty && next.endgame_turns_left) {
    --*next.endgame_turns_left;
  }

  bool perfect = true;
  for (int c = 0; c < kNumColors; ++c) perfect &= next.fireworks[c] == kNumRanks;
  if (perfect) {
    next.status = Status::kPerfectWin;
  } else if (next.life_tokens == 0) {
    next.status = Status::kLivesExhausted;
  } else if (next.endgame_turns_left && *next.endgame_turns_left == 0) {
    next.status = Status::kDeckExhausted;
  }

  next.current_player = static_cast<int8_t>((actor + 1) % next.NumPlayers());
  return {std::move(next), outcome};
}

int Score(const GameState& state) {
  if (state.status == Status::kLivesExhausted) return 0;
  return state.FireworksTotal();
}

CardClass ClassifyCard(const GameState& state, Card card) {
  const int c = static_cast<int>(card.color);
  if (card.rank == state.fireworks[c] + 1) return CardClass::kPlayable;
  if (card.rank <= state.fireworks[c]) return CardClass::kUseless;
  // Unreachable if every copy of some lower rank still needed is discarded.
  for (int rank = state.fireworks[c] + 1; rank < card.rank; ++rank) {
    if (state.discard_counts[c][rank - 1] == NumCopies(rank)) return CardClass::kUseless;
  }
  if (state.discard_counts[c][card.rank - 1] == NumCopies(card.rank) - 1) {
    return CardClass::kUniqueCritical;
  }
  return CardClass::kOther;
}

std::vector<Card> ParseDeck(const std::string& text) {
  std::istringstream in(text);
  std::vector<Card> deck;
  std::string token;
  while (in >> token) {
    if (token.size() != 2) throw InvalidDeckError("bad card token: " + token);
    auto color = ColorFromLetter(token[0]);
    const int rank = token[1] - '0';
    if (!color || rank < 1 || rank > kNumRanks) {
      throw InvalidDeckError("bad card token: " + token);
    }
    deck.push_back({*color, static_cast<int8_t>(rank)});
  }
  if (deck.size() != kDeckSize) {
    throw InvalidDeckError("deck file must list exactly 50 cards");
  }
  return deck;
}

std::string FormatDeck(const std::vector<Card>& deck) {
  std::string out;
  for (size_t i = 0; i < deck.size(); ++i) {
    if (i > 0) out += ' ';
    out += CardToString(deck[i]);
  }
  return out;
}

}  // namespace hanabi
