#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "hanabi/checkpoint.hpp"
#include "hanabi/config.hpp"
#include "hanabi/grad_check.hpp"
#include "hanabi/length_analysis.hpp"
#include "hanabi/trainer.hpp"

namespace {

namespace fs = std::filesystem;
using namespace hanabi;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitVerificationFailed = 2;

std::string ReadFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

int CmdTrain(const RunConfig& config, bool quiet) {
  RunTraining(config, [&](const EpochRow& row) {
    if (!quiet && (row.epoch % 10 == 0 || row.epoch == 1)) {
      std::printf("epoch %d score %.2f fireworks %.2f entropy %.3f\n", row.epoch,
                  row.mean_score, row.mean_fireworks, row.mean_entropy);
    }
  });
  return kExitOk;
}

int CmdEval(const std::string& checkpoint_path, int games, uint64_t seed, bool greedy,
            const std::string& out_path) {
  const Checkpoint checkpoint = LoadCheckpoint(checkpoint_path);
  const metrics::EvalReport report = EvaluatePolicy(checkpoint.policy, games, seed, greedy);
  const std::string json = metrics::EvalReportToJson(report);
  if (out_path.empty()) {
    std::cout << json << "\n";
  } else {
    std::ofstream out(out_path);
    if (!out) throw std::runtime_error("cannot write " + out_path);
    out << json << "\n";
  }
  std::printf("games=%d score=%.2f +- %.2f perfect=%.1f%%\n", report.n_games,
              report.mean_score, report.stderr_score, 100.0 * report.perfect_fraction);
  return kExitOk;
}

int VerifyLength(const std::vector<int>& player_counts, int fuzz_games, uint64_t seed) {
  bool all_ok = true;
  for (int players : player_counts) {
    const int sigma0 = LedgerInit(players).sigma;
    const GameTrace stall = StallPolicyGame(players, seed);
    int fuzz_max = 0;
    bool bound_ok = true;
    for (int game = 0; game < fuzz_games; ++game) {
      const GameTrace trace =
          RandomLegalGame(players, Rng::DeriveSeed(seed, players * 100000 + game));
      fuzz_max = std::max(fuzz_max, trace.Turns());
      for (const TurnRecord& turn : trace.turns) {
        bound_ok &= turn.ledger.t <= turn.ledger.sigma;
      }
    }
    const bool ok = stall.Turns() == sigma0 && fuzz_max <= sigma0 && bound_ok;
    all_ok &= ok;
    std::printf("p=%d sigma0=%d achieved=%d ok=%s\n", players, sigma0, stall.Turns(),
                ok ? "true" : "false");
  }
  return all_ok ? kExitOk : kExitVerificationFailed;
}

int VerifyPerfect(const std::string& out_dir) {
  const PerfectGameScript script = BuildPerfectGameScript();
  const GameTrace trace = ReplayScript(2, script.deck, script.actions);
  const int turns = trace.Turns();
  const int score = Score(trace.final_state);
  const bool ok = turns == 71 && score == kPerfectScore &&
                  trace.final_state.status == Status::kPerfectWin;
  std::printf("turns=%d score=%d ok=%s\n", turns, score, ok ? "true" : "false");
  if (!out_dir.empty()) {
    fs::create_directories(out_dir);
    std::ofstream deck(fs::path(out_dir) / "perfect_deck.txt");
    deck << FormatDeck(script.deck) << "\n";
    std::ofstream actions(fs::path(out_dir) / "perfect_actions.txt");
    for (const Action& action : script.actions) {
      actions << ActionToString(action) << "\n";
    }
  }
  return ok ? kExitOk : kExitVerificationFailed;
}

int VerifyDeltaTable(const std::vector<int>& player_counts, int games, uint64_t seed) {
  for (int players : player_counts) {
    for (int game = 0; game < games; ++game) {
      try {
        RandomLegalGame(players, Rng::DeriveSeed(seed, players * 100000 + game));
      } catch (const LedgerMismatchError& error) {
        // Dump the violating game so it can be replayed.
        std::printf("p=%d games=%d mismatches=1 ok=false\n", players, game + 1);
        std::fprintf(stderr, "game seed %llu: %s\n",
                     static_cast<unsigned long long>(
                         Rng::DeriveSeed(seed, players * 100000 + game)),
                     error.what());
        return kExitVerificationFailed;
      }
    }
    std::printf("p=%d games=%d mismatches=0 ok=true\n", players, games);
  }
  return kExitOk;
}

int CmdGradCheck(uint64_t seed, int batches) {
  const GradCheckReport report = RunGradCheck(seed, batches);
  std::printf("spg max_rel_error=%.3e\n", report.spg_max_rel_error);
  std::printf("vpg max_rel_error=%.3e\n", report.vpg_max_rel_error);
  std::printf("ppo max_rel_error=%.3e\n", report.ppo_max_rel_error);
  std::printf("value max_rel_error=%.3e\n", report.value_max_rel_error);
  const bool ok = report.MaxError() < 1e-4;
  std::printf("ok=%s\n", ok ? "true" : "false");
  return ok ? kExitOk : kExitVerificationFailed;
}

int CmdSimulate(uint64_t seed, const std::string& checkpoint_path,
                const std::string& out_path) {
  CheatEnv env;
  env.Reset(seed);
  Rng rng(Rng::DeriveSeed(seed, 42));

  std::optional<Checkpoint> checkpoint;
  if (!checkpoint_path.empty()) checkpoint = LoadCheckpoint(checkpoint_path);

  while (!env.Done()) {
    int action;
    if (checkpoint) {
      const Observation obs = Encode(env.state(), env.state().current_player);
      const std::vector<double> probs = nn::ForwardPolicy(checkpoint->policy, obs);
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
    } else {
      action = static_cast<int>(rng.UniformInt(kNumEnvActions));
    }
    env.Step({action});
  }

  std::ostream* out = &std::cout;
  std::ofstream file;
  if (!out_path.empty()) {
    file.open(out_path);
    if (!file) throw std::runtime_error("cannot write " + out_path);
    out = &file;
  }
  *out << "turn,player,action_index,reward,score,lives,hints,deck\n";
  for (const EnvTurnRecord& record : env.trace()) {
    char line[160];
    std::snprintf(line, sizeof(line), "%d,%d,%d,%.6f,%d,%d,%d,%d\n", record.turn,
                  record.player, record.action_index, record.reward, record.score_after,
                  record.lives_after, record.hints_after, record.deck_after);
    *out << line;
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Hanabi engine, game-length verifier and policy-gradient trainer"};
  app.require_subcommand(1);

  // train
  auto* train = app.add_subcommand("train", "Train an agent with SPG, VPG or PPO");
  std::string algo_name = "vpg";
  std::string config_path;
  std::string out_dir = "runs/latest";
  uint64_t seed = 0;
  int epochs = 200;
  int batch_steps = -1;
  int checkpoint_every = 0;
  bool quiet = false;
  train->add_option("--algo", algo_name, "spg, vpg or ppo");
  train->add_option("--config", config_path, "JSON config file (flags override it)");
  train->add_option("--seed", seed, "run seed");
  train->add_option("--epochs", epochs, "number of epochs");
  train->add_option("--batch-steps", batch_steps, "min environment steps per batch");
  train->add_option("--out", out_dir, "output directory");
  train->add_option("--checkpoint-every", checkpoint_every, "checkpoint cadence in epochs");
  train->add_flag("--quiet", quiet, "suppress progress output");

  // eval
  auto* eval = app.add_subcommand("eval", "Evaluate a checkpoint over full games");
  std::string checkpoint_path;
  std::string report_path;
  int games = 1000;
  bool greedy = false;
  uint64_t eval_seed = 0;
  eval->add_option("--checkpoint", checkpoint_path, "checkpoint file")->required();
  eval->add_option("--games", games, "number of evaluation games");
  eval->add_option("--seed", eval_seed, "evaluation seed");
  eval->add_flag("--greedy", greedy, "argmax actions instead of sampling");
  eval->add_option("--out", report_path, "write the JSON report here");

  // verify
  auto* verify = app.add_subcommand("verify", "Check the game-length propositions");
  std::string mode = "length";
  int players = 0;  // 0 = all
  int verify_games = 10000;
  uint64_t verify_seed = 1;
  std::string verify_out;
  verify->add_option("--mode", mode, "length, perfect or table6")->required();
  verify->add_option("--players", players, "player count (default: all of 2..5)");
  verify->add_option("--games", verify_games, "fuzz games per player count");
  verify->add_option("--seed", verify_seed, "fuzz seed");
  verify->add_option("--out", verify_out, "directory for emitted traces");

  // grad-check
  auto* grad = app.add_subcommand("grad-check", "Finite-difference gradient check");
  uint64_t grad_seed = 7;
  int grad_batches = 20;
  grad->add_option("--seed", grad_seed, "seed");
  grad->add_option("--batches", grad_batches, "random batches per objective");

  // simulate
  auto* simulate = app.add_subcommand("simulate", "Dump one seeded episode trace as CSV");
  uint64_t sim_seed = 0;
  std::string sim_checkpoint;
  std::string sim_out;
  simulate->add_option("--seed", sim_seed, "episode seed");
  simulate->add_option("--checkpoint", sim_checkpoint, "policy checkpoint (default: random)");
  simulate->add_option("--out", sim_out, "CSV path (default: stdout)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (train->parsed()) {
      const rl::Algorithm algorithm = rl::AlgorithmFromName(algo_name);
      RunConfig config = config_path.empty()
                             ? RunConfig::Defaults(algorithm)
                             : RunConfigFromJson(ReadFile(config_path));
      if (!config_path.empty() && train->count("--algo")) {
        // Switching algorithms keeps the file's shared settings but picks up
        // the new algorithm's iteration structure.
        const rl::AlgoConfig defaults = rl::AlgoConfig::Defaults(algorithm);
        config.algo.algorithm = algorithm;
        config.algo.policy_iterations = defaults.policy_iterations;
        config.algo.value_iterations = defaults.value_iterations;
      }
      if (train->count("--seed")) config.seed = seed;
      if (train->count("--epochs") || config_path.empty()) config.epochs = epochs;
      if (batch_steps > 0) config.batch_min_steps = batch_steps;
      if (train->count("--out") || config.out_dir.empty()) config.out_dir = out_dir;
      if (train->count("--checkpoint-every")) config.checkpoint_every = checkpoint_every;
      return CmdTrain(config, quiet);
    }
    if (eval->parsed()) {
      if (games <= 0) {
        std::fprintf(stderr, "error: --games must be positive\n");
        return kExitUsage;
      }
      return CmdEval(checkpoint_path, games, eval_seed, greedy, report_path);
    }
    if (verify->parsed()) {
      std::vector<int> counts;
      if (players == 0) {
        counts = {2, 3, 4, 5};
      } else if (players >= 2 && players <= 5) {
        counts = {players};
      } else {
        std::fprintf(stderr, "error: --players must be 2..5\n");
        return kExitUsage;
      }
      if (mode == "length") return VerifyLength(counts, verify_games, verify_seed);
      if (mode == "perfect") return VerifyPerfect(verify_out);
      if (mode == "table6") return VerifyDeltaTable(counts, verify_games, verify_seed);
      std::fprintf(stderr, "error: unknown mode %s\n", mode.c_str());
      return kExitUsage;
    }
    if (grad->parsed()) return CmdGradCheck(grad_seed, grad_batches);
    if (simulate->parsed()) return CmdSimulate(sim_seed, sim_checkpoint, sim_out);
  } catch (const std::invalid_argument& error) {
    std::fprintf(stderr, "error: %s\n", error.what());
    return kExitUsage;
  } catch (const std::exception& error) {
    std::fprintf(stderr, "error: %s\n", error.what());
    return kExitVerificationFailed;
  }
  return kExitUsage;
}
