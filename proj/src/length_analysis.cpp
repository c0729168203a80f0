#include "hanabi/length_analysis.hpp"

#include <algorithm>
#include <sstream>

#include "hanabi/rng.hpp"

namespace hanabi {

const char* ActionClassName(ActionClass klass) {
  switch (klass) {
    case ActionClass::kPlay: return "play";
    case ActionClass::kDiscard: return "discard";
    case ActionClass::kHint: return "hint";
    case ActionClass::kSuccessfulFivePlay: return "successful-five-play";
    case ActionClass::kDeckEmptyingMove: return "deck-emptying-move";
    case ActionClass::kEmptyDeckMove: return "empty-deck-move";
  }
  return "?";
}

SigmaLedger LedgerInit(int players) {
  if (players < 2 || players > 5) throw std::invalid_argument("players must be 2..5");
  SigmaLedger ledger;
  ledger.t = 0;
  ledger.c = kMaxHintTokens;
  ledger.d = kDeckSize - players * HandSizeFor(players);
  ledger.u = ledger.d - 1;
  ledger.p_remaining = players;
  ledger.sigma = ledger.t + ledger.c + ledger.d + ledger.u + ledger.p_remaining;
  return ledger;
}

SigmaLedger LedgerFromState(const GameState& state) {
  SigmaLedger ledger;
  ledger.t = state.turns_taken;
  ledger.d = state.DeckSize();
  ledger.c = ledger.d > 0 ? state.hint_tokens : 0;
  ledger.u = ledger.d > 0 ? ledger.d - 1 : 0;
  ledger.p_remaining =
      state.endgame_turns_left ? *state.endgame_turns_left : state.NumPlayers();
  ledger.sigma = ledger.t + ledger.c + ledger.d + ledger.u + ledger.p_remaining;
  return ledger;
}

ActionClass ClassifyTurn(const TurnOutcome& outcome, const SigmaLedger& pre_ledger,
                         int pre_hint_tokens) {
  if (pre_ledger.d == 0) return ActionClass::kEmptyDeckMove;
  if (outcome.deck_emptied_this_turn) return ActionClass::kDeckEmptyingMove;
  if (outcome.completed_stack && pre_ledger.d > 1 && pre_hint_tokens < kMaxHintTokens) {
    return ActionClass::kSuccessfulFivePlay;
  }
  switch (outcome.action_taken.type) {
    case Action::Type::kPlay: return ActionClass::kPlay;
    case Action::Type::kDiscard: return ActionClass::kDiscard;
    case Action::Type::kHintColor:
    case Action::Type::kHintRank: return ActionClass::kHint;
  }
  return ActionClass::kPlay;
}

LedgerDelta PredictedDelta(ActionClass klass, const SigmaLedger& pre_ledger) {
  switch (klass) {
    case ActionClass::kPlay: return {+1, 0, -1, -1, 0, -1};
    case ActionClass::kDiscard: return {+1, +1, -1, -1, 0, 0};
    case ActionClass::kHint: return {+1, -1, 0, 0, 0, 0};
    case ActionClass::kSuccessfulFivePlay: return {+1, +1, -1, -1, 0, 0};
    case ActionClass::kDeckEmptyingMove:
      return {+1, -pre_ledger.c, -1, 0, 0, -pre_ledger.c};
    case ActionClass::kEmptyDeckMove: return {+1, 0, 0, 0, -1, 0};
  }
  return {};
}

SigmaLedger LedgerUpdate(const SigmaLedger& ledger, const GameState& post_state,
                         const TurnOutcome& outcome) {
  const SigmaLedger next = LedgerFromState(post_state);
  const LedgerDelta observed{next.t - ledger.t, next.c - ledger.c, next.d - ledger.d,
                             next.u - ledger.u, next.p_remaining - ledger.p_remaining,
                             next.sigma - ledger.sigma};
  // When the deck is still full enough, the pre-turn hint-token count equals
  // ledger.c; the only class that needs it is gated on d > 1 anyway.
  const ActionClass klass = ClassifyTurn(outcome, ledger, ledger.c);
  const LedgerDelta expected = PredictedDelta(klass, ledger);
  if (observed != expected || observed.dsigma > 0) {
    std::ostringstream msg;
    msg << "ledger delta mismatch after turn " << next.t << " ("
        << ActionClassName(klass) << "): observed (" << observed.dt << ","
        << observed.dc << "," << observed.dd << "," << observed.du << ","
        << observed.dp << "," << observed.dsigma << ") expected (" << expected.dt
        << "," << expected.dc << "," << expected.dd << "," << expected.du << ","
        << expected.dp << "," << expected.dsigma << ")";
    throw LedgerMismatchError(msg.str());
  }
  return next;
}

namespace {

// Any hint naming a property actually present in some other hand.
Action FirstLegalHint(const GameState& state) {
  const int actor = state.current_player;
  for (int target = 0; target < state.NumPlayers(); ++target) {
    if (target == actor || state.hands[target].empty()) continue;
    return Action::HintColor(target, state.hands[target].front().color);
  }
  throw std::logic_error("no hint target available");
}

}  // namespace

GameTrace StallPolicyGame(int players, uint64_t seed) {
  GameTrace trace;
  GameState state = NewGame(players, seed);
  trace.initial = LedgerInit(players);
  SigmaLedger ledger = trace.initial;

  while (state.status == Status::kInProgress) {
    Action action;
    if (state.hint_tokens == kMaxHintTokens) {
      action = FirstLegalHint(state);
    } else if (state.DeckSize() > 0 && state.hint_tokens > 0) {
      // Alternation phase: a discard just produced a token, spend it.
      action = FirstLegalHint(state);
    } else {
      action = Action::Discard(0);
    }
    auto [next, outcome] = ApplyAction(state, action);
    const ActionClass klass = ClassifyTurn(outcome, ledger, state.hint_tokens);
    ledger = LedgerUpdate(ledger, next, outcome);
    trace.turns.push_back({action, outcome, klass, ledger});
    state = std::move(next);
  }
  trace.final_state = std::move(state);
  return trace;
}

GameTrace ReplayScript(int players, const std::vector<Card>& deck,
                       const std::vector<Action>& actions) {
  GameTrace trace;
  GameState state = NewGame(players, deck);
  trace.initial = LedgerInit(players);
  SigmaLedger ledger = trace.initial;
  for (const Action& action : actions) {
    auto [next, outcome] = ApplyAction(state, action);
    const ActionClass klass = ClassifyTurn(outcome, ledger, state.hint_tokens);
    ledger = LedgerUpdate(ledger, next, outcome);
    trace.turns.push_back({action, outcome, klass, ledger});
    state = std::move(next);
  }
  trace.final_state = std::move(state);
  return trace;
}

namespace {

Card MakeCard(int color, int rank) {
  return {static_cast<Color>(color), static_cast<int8_t>(rank)};
}

int FindSlot(const std::vector<Card>& hand, Card card) {
  for (size_t i = 0; i < hand.size(); ++i) {
    if (hand[i] == card) return static_cast<int>(i);
  }
  throw std::logic_error("card not in hand: " + CardToString(card));
}

}  // namespace

PerfectGameScript BuildPerfectGameScript() {
  // Colors 0..3 are finished mid-game; color 4 is held back so its last three
  // plays can land on and after the deck-emptying turn.
  //
  // Deck layout (deal-then-draw order):
  //   0..9    initial hands: ranks 1..5 of colors 0 and 1 split so that the
  //           22 consecutive plays alternate between the players
  //   10..21  ranks 1..5 of colors 2 and 3 plus ranks 1..2 of color 4; the
  //           alternating draws route each card to the player who plays it
  //   22..31  spare cards (plus rank 4 of color 4 hidden at position 23)
  //   32..48  spare cards burned by the discard phase; position 48 is rank 3
  //           of color 4
  //   49      rank 5 of color 4, drawn by the deck-emptying play
  PerfectGameScript script;
  auto& deck = script.deck;
  deck.resize(kDeckSize);

  deck[0] = MakeCard(0, 1);
  deck[2] = MakeCard(0, 3);
  deck[4] = MakeCard(0, 5);
  deck[6] = MakeCard(1, 2);
  deck[8] = MakeCard(1, 4);
  deck[1] = MakeCard(0, 2);
  deck[3] = MakeCard(0, 4);
  deck[5] = MakeCard(1, 1);
  deck[7] = MakeCard(1, 3);
  deck[9] = MakeCard(1, 5);
  for (int i = 0; i < 5; ++i) {
    deck[10 + i] = MakeCard(2, 1 + i);
    deck[15 + i] = MakeCard(3, 1 + i);
  }
  deck[20] = MakeCard(4, 1);
  deck[21] = MakeCard(4, 2);
  deck[23] = MakeCard(4, 4);
  deck[48] = MakeCard(4, 3);
  deck[49] = MakeCard(4, 5);

  // Fill the remaining 25 slots with the unplayed duplicates.
  std::vector<Card> spares;
  for (int c = 0; c < kNumColors; ++c) {
    for (int rank = 1; rank <= kNumRanks; ++rank) {
      for (int copy = 1; copy < NumCopies(rank); ++copy) {
        spares.push_back(MakeCard(c, rank));
      }
    }
  }
  size_t spare_index = 0;
  for (int pos = 22; pos < 48; ++pos) {
    if (pos == 23) continue;
    deck[pos] = spares[spare_index++];
  }

  // Generate the action list by simulating; play targets are located in the
  // actor's hand at runtime so the slot indices come out right.
  GameState state = NewGame(2, deck);
  auto act = [&](const Action& action) {
    script.actions.push_back(action);
    state = ApplyAction(state, action).first;
  };
  auto play_card = [&](int color, int rank) {
    act(Action::Play(FindSlot(state.hands[state.current_player], MakeCard(color, rank))));
  };

  for (int i = 0; i < kMaxHintTokens; ++i) act(FirstLegalHint(state));
  for (int c = 0; c < 4; ++c) {
    for (int rank = 1; rank <= kNumRanks; ++rank) play_card(c, rank);
  }
  play_card(4, 1);
  play_card(4, 2);
  for (int i = 0; i < 4; ++i) act(FirstLegalHint(state));
  for (int i = 0; i < 17; ++i) {
    // Discard the first card that is not part of the final color-4 run.
    const auto& hand = state.hands[state.current_player];
    int slot = -1;
    for (size_t s = 0; s < hand.size(); ++s) {
      if (static_cast<int>(hand[s].color) != 4 || hand[s].rank <= 2) {
        slot = static_cast<int>(s);
        break;
      }
    }
    act(Action::Discard(slot));
    act(FirstLegalHint(state));
  }
  play_card(4, 3);  // empties the deck
  play_card(4, 4);
  play_card(4, 5);
  return script;
}

int PerfectUpperBound(int players) {
  const SigmaLedger ledger = LedgerInit(players);
  return ledger.sigma - (kPerfectScore - (kNumRanks + players));
}

GameTrace RandomLegalGame(int players, uint64_t seed) {
  Rng rng(seed);
  GameTrace trace;
  GameState state = NewGame(players, rng.NextUint64());
  trace.initial = LedgerInit(players);
  SigmaLedger ledger = trace.initial;
  while (state.status == Status::kInProgress) {
    const std::vector<Action> legal = LegalActions(state);
    const Action action = legal[rng.UniformInt(static_cast<uint32_t>(legal.size()))];
    auto [next, outcome] = ApplyAction(state, action);
    const ActionClass klass = ClassifyTurn(outcome, ledger, state.hint_tokens);
    ledger = LedgerUpdate(ledger, next, outcome);
    trace.turns.push_back({action, outcome, klass, ledger});
    state = std::move(next);
  }
  trace.final_state = std::move(state);
  return trace;
}

}  // namespace hanabi
