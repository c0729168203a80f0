#ifndef HANABI_LENGTH_ANALYSIS_HPP_
#define HANABI_LENGTH_ANALYSIS_HPP_

#include <stdexcept>
#include <vector>

#include "hanabi/engine.hpp"

namespace hanabi {

// Turn-budget ledger. sigma = t + c + d + u + p_remaining bounds the total
// number of turns any continuation of the game can reach, and never
// increases. c counts hint tokens usable before the deck runs out, u the
// draws that can still return such a token.
struct SigmaLedger {
  int t = 0;            // turns taken
  int c = 0;            // usable hint tokens (0 once the deck is empty)
  int d = 0;            // deck size
  int u = 0;            // undisclosed hints: d - 1 while the deck is nonempty
  int p_remaining = 0;  // endgame turns left
  int sigma = 0;

  bool operator==(const SigmaLedger&) const = default;
};

// One class per turn; the last three take precedence over the first three.
enum class ActionClass : int8_t {
  kPlay,
  kDiscard,
  kHint,
  kSuccessfulFivePlay,
  kDeckEmptyingMove,
  kEmptyDeckMove,
};

const char* ActionClassName(ActionClass klass);

struct LedgerDelta {
  int dt = 0;
  int dc = 0;
  int dd = 0;
  int du = 0;
  int dp = 0;
  int dsigma = 0;

  bool operator==(const LedgerDelta&) const = default;
};

struct LedgerMismatchError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

SigmaLedger LedgerInit(int players);

// Reads the ledger straight off an engine state.
SigmaLedger LedgerFromState(const GameState& state);

ActionClass ClassifyTurn(const TurnOutcome& outcome, const SigmaLedger& pre_ledger,
                         int pre_hint_tokens);

// Per-class effect on (t, c, d, u, p, sigma). The deck-emptying row depends
// on the pre-turn ledger (dc = -c, dsigma = -c).
LedgerDelta PredictedDelta(ActionClass klass, const SigmaLedger& pre_ledger);

// Recomputes the ledger from post_state and cross-checks the observed delta
// against the predicted one; throws LedgerMismatchError on disagreement.
SigmaLedger LedgerUpdate(const SigmaLedger& ledger, const GameState& post_state,
                         const TurnOutcome& outcome);

struct TurnRecord {
  Action action;
  TurnOutcome outcome;
  ActionClass klass;
  SigmaLedger ledger;  // after the turn
};

struct GameTrace {
  SigmaLedger initial;
  std::vector<TurnRecord> turns;
  GameState final_state;

  int Turns() const { return static_cast<int>(turns.size()); }
};

// Longest possible game: spend all hints, alternate discard/hint until the
// deck empties, discard through the final round. Never plays a card and
// always lasts exactly sigma_0 turns.
GameTrace StallPolicyGame(int players, uint64_t seed);

struct PerfectGameScript {
  std::vector<Card> deck;
  std::vector<Action> actions;
};

// Stacked 2-player deck and action list for the longest perfect game:
// 71 turns ending at score 25.
PerfectGameScript BuildPerfectGameScript();

// Replays a scripted game with full ledger checking.
GameTrace ReplayScript(int players, const std::vector<Card>& deck,
                       const std::vector<Action>& actions);

// Upper bound on the length of a perfect game: sigma_0 - (25 - (5 + players)).
int PerfectUpperBound(int players);

// Plays uniformly random legal actions to completion, checking the ledger
// against the per-class delta prediction on every turn.
GameTrace RandomLegalGame(int players, uint64_t seed);

}  // namespace hanabi

#endif  // HANABI_LENGTH_ANALYSIS_HPP_
