#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <vector>

#include "hanabi/checkpoint.hpp"
#include "hanabi/config.hpp"
#include "hanabi/grad_check.hpp"
#include "hanabi/length_analysis.hpp"
#include "hanabi/trainer.hpp"

namespace py = pybind11;
using namespace hanabi;

namespace {

std::vector<double> ObsToVector(const Observation& obs) {
  return std::vector<double>(obs.begin(), obs.end());
}

py::dict InfoToDict(const StepInfo& info) {
  py::dict d;
  d["score"] = info.score;
  d["fireworks_total"] = info.fireworks_total;
  d["life_tokens"] = info.life_tokens;
  d["turns"] = info.turns;
  d["illegal"] = info.illegal;
  return d;
}

py::dict LedgerToDict(const SigmaLedger& ledger) {
  py::dict d;
  d["t"] = ledger.t;
  d["c"] = ledger.c;
  d["d"] = ledger.d;
  d["u"] = ledger.u;
  d["p_remaining"] = ledger.p_remaining;
  d["sigma"] = ledger.sigma;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Hanabi engine, game-length verifier and policy-gradient trainer";

  py::enum_<Status>(m, "Status")
      .value("IN_PROGRESS", Status::kInProgress)
      .value("PERFECT_WIN", Status::kPerfectWin)
      .value("LIVES_EXHAUSTED", Status::kLivesExhausted)
      .value("DECK_EXHAUSTED", Status::kDeckExhausted);

  py::class_<Card>(m, "Card")
      .def_property_readonly("color", [](const Card& c) { return static_cast<int>(c.color); })
      .def_property_readonly("rank", [](const Card& c) { return static_cast<int>(c.rank); })
      .def("__repr__", [](const Card& c) { return CardToString(c); });

  py::class_<Action>(m, "Action")
      .def_static("play", &Action::Play, py::arg("slot"))
      .def_static("discard", &Action::Discard, py::arg("slot"))
      .def_static("hint_color",
                  [](int target, int color) {
                    return Action::HintColor(target, static_cast<Color>(color));
                  })
      .def_static("hint_rank", &Action::HintRank)
      .def_static("from_string", &ActionFromString)
      .def("__repr__", [](const Action& a) { return ActionToString(a); })
      .def("__eq__", [](const Action& a, const Action& b) { return a == b; });

  py::class_<GameState>(m, "GameState")
      .def_property_readonly("deck_size", &GameState::DeckSize)
      .def_property_readonly("num_players", &GameState::NumPlayers)
      .def_property_readonly("hands", [](const GameState& s) { return s.hands; })
      .def_property_readonly("fireworks",
                             [](const GameState& s) {
                               return std::vector<int>(s.fireworks.begin(), s.fireworks.end());
                             })
      .def_property_readonly("hint_tokens",
                             [](const GameState& s) { return static_cast<int>(s.hint_tokens); })
      .def_property_readonly("life_tokens",
                             [](const GameState& s) { return static_cast<int>(s.life_tokens); })
      .def_property_readonly("current_player",
                             [](const GameState& s) { return static_cast<int>(s.current_player); })
      .def_property_readonly("turns_taken", [](const GameState& s) { return s.turns_taken; })
      .def_property_readonly("status", [](const GameState& s) { return s.status; })
      .def("score", [](const GameState& s) { return Score(s); });

  m.def("new_game", [](int players, uint64_t seed) { return NewGame(players, seed); },
        py::arg("players"), py::arg("seed"));
  m.def("new_game_with_deck",
        [](int players, const std::string& deck) { return NewGame(players, ParseDeck(deck)); },
        py::arg("players"), py::arg("deck"));
  m.def("legal_actions", &LegalActions);
  m.def("apply_action", [](const GameState& state, const Action& action) {
    auto [next, outcome] = ApplyAction(state, action);
    py::dict info;
    info["was_successful_play"] = outcome.was_successful_play;
    info["drew_card"] = outcome.drew_card;
    info["deck_emptied"] = outcome.deck_emptied_this_turn;
    info["completed_stack"] = outcome.completed_stack;
    return py::make_tuple(next, info);
  });
  m.def("format_deck", &FormatDeck);

  // Game-length analysis.
  m.def("ledger_init", [](int players) { return LedgerToDict(LedgerInit(players)); });
  m.def("sigma0", [](int players) { return LedgerInit(players).sigma; });
  m.def("perfect_upper_bound", &PerfectUpperBound);
  m.def(
      "stall_policy_game",
      [](int players, uint64_t seed) {
        const GameTrace trace = StallPolicyGame(players, seed);
        py::dict d;
        d["turns"] = trace.Turns();
        d["sigma0"] = trace.initial.sigma;
        d["score"] = Score(trace.final_state);
        d["final_ledger"] = LedgerToDict(trace.turns.back().ledger);
        return d;
      },
      py::arg("players"), py::arg("seed"));
  m.def("perfect_game_script", [] {
    const PerfectGameScript script = BuildPerfectGameScript();
    const GameTrace trace = ReplayScript(2, script.deck, script.actions);
    std::vector<std::string> actions;
    for (const Action& action : script.actions) actions.push_back(ActionToString(action));
    py::dict d;
    d["deck"] = FormatDeck(script.deck);
    d["actions"] = actions;
    d["turns"] = trace.Turns();
    d["score"] = Score(trace.final_state);
    return d;
  });
  m.def("random_legal_game_turns", [](int players, uint64_t seed) {
    return RandomLegalGame(players, seed).Turns();
  });

  // Self-play environment.
  py::class_<CheatEnv>(m, "CheatEnv")
      .def(py::init<>())
      .def("reset",
           [](CheatEnv& env, uint64_t seed) { return ObsToVector(env.Reset(seed)); },
           py::arg("seed"))
      .def("step",
           [](CheatEnv& env, int action) {
             const StepResult result = env.Step({action});
             return py::make_tuple(ObsToVector(result.observation), result.reward,
                                   result.done, InfoToDict(result.info));
           },
           py::arg("action"))
      .def_property_readonly("done", &CheatEnv::Done)
      .def_property_readonly("state", &CheatEnv::state);
  m.def("encode", [](const GameState& state, int player) {
    return ObsToVector(Encode(state, player));
  });
  m.attr("OBSERVATION_SIZE") = kObservationSize;
  m.attr("NUM_ACTIONS") = kNumEnvActions;

  // Training and evaluation.
  m.def("default_config_json", [](const std::string& algorithm) {
    return RunConfigToJson(RunConfig::Defaults(rl::AlgorithmFromName(algorithm)));
  });
  m.def("run_training",
        [](const std::string& config_json) { RunTraining(RunConfigFromJson(config_json)); },
        py::arg("config_json"));
  m.def("evaluate_checkpoint",
        [](const std::string& path, int n_games, uint64_t seed, bool greedy) {
          const Checkpoint checkpoint = LoadCheckpoint(path);
          const metrics::EvalReport report =
              EvaluatePolicy(checkpoint.policy, n_games, seed, greedy);
          py::dict d;
          d["n_games"] = report.n_games;
          d["mean_score"] = report.mean_score;
          d["stderr_score"] = report.stderr_score;
          d["perfect_fraction"] = report.perfect_fraction;
          d["mean_fireworks"] = report.mean_fireworks;
          return d;
        },
        py::arg("path"), py::arg("n_games"), py::arg("seed"), py::arg("greedy") = false);
  m.def(
      "run_grad_check",
      [](uint64_t seed, int batches) {
        const GradCheckReport report = RunGradCheck(seed, batches);
        py::dict d;
        d["spg"] = report.spg_max_rel_error;
        d["vpg"] = report.vpg_max_rel_error;
        d["ppo"] = report.ppo_max_rel_error;
        d["value"] = report.value_max_rel_error;
        d["max"] = report.MaxError();
        return d;
      },
      py::arg("seed"), py::arg("batches"));
}
