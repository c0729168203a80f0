#ifndef HANABI_ENGINE_HPP_
#define HANABI_ENGINE_HPP_

#include <array>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace hanabi {

inline constexpr int kNumColors = 5;
inline constexpr int kNumRanks = 5;
inline constexpr int kDeckSize = 50;
inline constexpr int kMaxHintTokens = 8;
inline constexpr int kMaxLifeTokens = 3;
inline constexpr int kPerfectScore = 25;

// Color order matches the deck file letters "RYGWB".
enum class Color : int8_t { kRed = 0, kYellow, kGreen, kWhite, kBlue };

char ColorLetter(Color c);
std::optional<Color> ColorFromLetter(char letter);

struct Card {
  Color color;
  int8_t rank;  // 1..5

  bool operator==(const Card&) const = default;
};

// Copies of a rank in each color: three 1s, two each of 2-4, one 5.
int NumCopies(int rank);

std::string CardToString(Card card);

struct Action {
  enum class Type : int8_t { kPlay, kDiscard, kHintColor, kHintRank };

  Type type = Type::kPlay;
  int8_t index = 0;   // hand slot for play/discard
  int8_t target = 0;  // hinted player
  int8_t value = 0;   // color index or rank for hints

  static Action Play(int slot) { return {Type::kPlay, static_cast<int8_t>(slot), 0, 0}; }
  static Action Discard(int slot) { return {Type::kDiscard, static_cast<int8_t>(slot), 0, 0}; }
  static Action HintColor(int target, Color color) {
    return {Type::kHintColor, 0, static_cast<int8_t>(target), static_cast<int8_t>(color)};
  }
  static Action HintRank(int target, int rank) {
    return {Type::kHintRank, 0, static_cast<int8_t>(target), static_cast<int8_t>(rank)};
  }

  bool IsHint() const { return type == Type::kHintColor || type == Type::kHintRank; }
  bool operator==(const Action&) const = default;
};

std::string ActionToString(const Action& action);
Action ActionFromString(const std::string& text);

enum class Status : int8_t {
  kInProgress,
  kPerfectWin,
  kLivesExhausted,
  kDeckExhausted,
};

struct GameState {
  std::vector<Card> deck;  // front of the vector is drawn first
  std::vector<std::vector<Card>> hands;
  std::array<int8_t, kNumColors> fireworks{};  // top rank played per color
  std::array<std::array<int8_t, kNumRanks>, kNumColors> discard_counts{};
  int8_t hint_tokens = kMaxHintTokens;
  int8_t life_tokens = kMaxLifeTokens;
  int8_t current_player = 0;
  int turns_taken = 0;
  std::optional<int8_t> endgame_turns_left;  // set when the deck empties
  Status status = Status::kInProgress;

  int NumPlayers() const { return static_cast<int>(hands.size()); }
  int DeckSize() const { return static_cast<int>(deck.size()); }
  int FireworksTotal() const;
  bool operator==(const GameState&) const = default;
};

struct TurnOutcome {
  Action action_taken;
  bool was_successful_play = false;
  std::optional<Card> card_moved;  // card played or discarded
  bool drew_card = false;
  int8_t hint_token_delta = 0;  // -1, 0 or +1
  int8_t life_token_delta = 0;  // -1 or 0
  bool deck_emptied_this_turn = false;
  bool completed_stack = false;  // successful rank-5 play
};

enum class CardClass : int8_t { kPlayable, kUseless, kUniqueCritical, kOther };

struct InvalidDeckError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct IllegalActionError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

int HandSizeFor(int players);

// The 50-card multiset, ordered by color then rank.
std::vector<Card> CanonicalDeck();

// Seeded-shuffle game. Hands are dealt round-robin from the deck front.
GameState NewGame(int players, uint64_t seed);

// Stacked-deck game. The deck lists all 50 cards in deal-then-draw order and
// must be a permutation of the canonical multiset, else InvalidDeckError.
GameState NewGame(int players, const std::vector<Card>& deck);

bool IsLegal(const GameState& state, const Action& action);
std::vector<Action> LegalActions(const GameState& state);

// Applies one turn. The input state is untouched; throws IllegalActionError
// if the action is not legal in the given state.
std::pair<GameState, TurnOutcome> ApplyAction(const GameState& state, const Action& action);

// 0 when all lives were lost, otherwise the sum of firework heights.
int Score(const GameState& state);

// Playable beats Useless beats UniqueCritical when several apply.
CardClass ClassifyCard(const GameState& state, Card card);

// Deck files: 50 whitespace-separated tokens like "R1 Y3 B5".
std::vector<Card> ParseDeck(const std::string& text);
std::string FormatDeck(const std::vector<Card>& deck);

}  // namespace hanabi

#endif  // HANABI_ENGINE_HPP_
