// Acceptance suite: every release gate in one binary. Each case prints a
// single PASS/FAIL line so the run reads as a checklist.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <vector>

#include "hanabi/grad_check.hpp"
#include "hanabi/length_analysis.hpp"
#include "hanabi/trainer.hpp"

using namespace hanabi;

namespace {

void Report(int criterion, const char* what, bool ok) {
  std::printf("criterion %2d %-52s %s\n", criterion, what, ok ? "PASS" : "FAIL");
  std::fflush(stdout);
  CHECK_MESSAGE(ok, "criterion ", criterion, ": ", what);
}

// Monte Carlo oracle: mean episode fireworks under the uniform-random
// policy over the 11 environment actions.
double UniformRandomBaseline(int episodes, uint64_t seed) {
  CheatEnv env;
  Rng rng(seed);
  double fireworks = 0.0;
  for (int episode = 0; episode < episodes; ++episode) {
    env.Reset(rng.NextUint64());
    while (!env.Done()) env.Step({static_cast<int>(rng.UniformInt(kNumEnvActions))});
    fireworks += metrics::SummarizeEpisode(env.trace()).fireworks_total;
  }
  return fireworks / episodes;
}

constexpr int kFuzzGamesPerCount = 10000;

}  // namespace

TEST_CASE("starting sigma values") {
  const int expected[] = {0, 0, 89, 80, 79, 72};
  bool ok = true;
  for (int players = 2; players <= 5; ++players) {
    ok &= LedgerInit(players).sigma == expected[players];
  }
  Report(1, "ledger starting values {89, 80, 79, 72}", ok);
}

TEST_CASE("stall game reaches the bound exactly") {
  bool ok = true;
  for (int players = 2; players <= 5; ++players) {
    const GameTrace trace = StallPolicyGame(players, 12345 + players);
    ok &= trace.Turns() == LedgerInit(players).sigma;
    ok &= trace.final_state.status == Status::kDeckExhausted;
  }
  Report(2, "stall game lasts exactly sigma_0 turns for p=2..5", ok);
}

TEST_CASE("sigma bounds hold across the fuzz corpus") {
  bool ok = true;
  for (int players = 2; players <= 5 && ok; ++players) {
    for (int game = 0; game < kFuzzGamesPerCount && ok; ++game) {
      const GameTrace trace = RandomLegalGame(players, Rng::DeriveSeed(players, game));
      int sigma = trace.initial.sigma;
      for (const TurnRecord& turn : trace.turns) {
        ok &= turn.ledger.t <= turn.ledger.sigma;
        ok &= turn.ledger.sigma <= sigma;
        sigma = turn.ledger.sigma;
      }
      ok &= trace.Turns() <= trace.initial.sigma;
    }
  }
  Report(3, "t <= sigma and sigma non-increasing, 10k games/count", ok);
}

TEST_CASE("per-class deltas match the observed ledger on every turn") {
  bool ok = true;
  for (int players = 2; players <= 5 && ok; ++players) {
    for (int game = 0; game < kFuzzGamesPerCount && ok; ++game) {
      GameTrace trace;
      try {
        // LedgerUpdate cross-checks every turn and throws on mismatch.
        trace = RandomLegalGame(players, Rng::DeriveSeed(players, game));
      } catch (const LedgerMismatchError&) {
        ok = false;
        break;
      }
      SigmaLedger pre = trace.initial;
      for (const TurnRecord& turn : trace.turns) {
        const LedgerDelta expected = PredictedDelta(turn.klass, pre);
        const LedgerDelta observed{
            turn.ledger.t - pre.t,           turn.ledger.c - pre.c,
            turn.ledger.d - pre.d,           turn.ledger.u - pre.u,
            turn.ledger.p_remaining - pre.p_remaining,
            turn.ledger.sigma - pre.sigma};
        ok &= observed == expected;
        if (turn.klass == ActionClass::kDeckEmptyingMove) {
          ok &= observed.dc == -pre.c;
          ok &= observed.dsigma <= 0;
        }
        pre = turn.ledger;
      }
    }
  }
  Report(4, "observed deltas equal the per-class prediction", ok);
}

TEST_CASE("perfect game script and upper bounds") {
  const PerfectGameScript script = BuildPerfectGameScript();
  const GameTrace trace = ReplayScript(2, script.deck, script.actions);
  int five_plays = 0;
  for (const TurnRecord& turn : trace.turns) {
    five_plays += turn.klass == ActionClass::kSuccessfulFivePlay;
  }
  bool ok = trace.Turns() == 71;
  ok &= Score(trace.final_state) == 25;
  ok &= five_plays == 4;
  ok &= PerfectUpperBound(2) == 71;
  ok &= PerfectUpperBound(3) == 63;
  ok &= PerfectUpperBound(4) == 63;
  ok &= PerfectUpperBound(5) == 57;
  Report(5, "71-turn perfect replay and {71, 63, 63, 57} bounds", ok);
}

TEST_CASE("observation encoding worked examples") {
  bool ok = true;
  GameState state = NewGame(2, 1);
  ok &= Encode(state, 0).size() == 136;

  state.fireworks[static_cast<int>(Color::kRed)] = 3;
  const Observation fw = Encode(state, 0);
  const double fw_expected[5] = {1, 1, 1, 0, 0};
  for (int i = 0; i < 5; ++i) ok &= fw[kFireworksOffset + i] == fw_expected[i];

  state.hands[0][0] = {Color::kYellow, 4};
  const Observation hand = Encode(state, 0);
  const double hand_expected[10] = {0, 1, 0, 0, 0, 0, 0, 0, 1, 0};
  for (int i = 0; i < 10; ++i) ok &= hand[kOwnHandOffset + i] == hand_expected[i];

  const int blue = static_cast<int>(Color::kBlue);
  state.discard_counts[blue][0] = 2;
  state.discard_counts[blue][2] = 1;
  const Observation discard = Encode(state, 0);
  const double discard_expected[10] = {1, 1, 0, 0, 0, 1, 0, 0, 0, 0};
  for (int i = 0; i < 10; ++i) {
    ok &= discard[kDiscardOffset + 10 * blue + i] == discard_expected[i];
  }
  Report(6, "136-bit layout reproduces the worked examples", ok);
}

TEST_CASE("gradient fidelity across the three objectives") {
  const GradCheckReport report = RunGradCheck(/*seed=*/7, /*batches_per_objective=*/20);
  const bool ok = report.MaxError() < 1e-4;
  std::printf("             max rel errors: spg %.2e vpg %.2e ppo %.2e value %.2e\n",
              report.spg_max_rel_error, report.vpg_max_rel_error,
              report.ppo_max_rel_error, report.value_max_rel_error);
  Report(7, "objective gradients match finite differences", ok);
}

TEST_CASE("gae agrees with the definition") {
  Rng rng(3);
  bool ok = true;
  for (int episode = 0; episode < 1000 && ok; ++episode) {
    const int length = 1 + static_cast<int>(rng.UniformInt(10));
    std::vector<double> rewards(length);
    std::vector<double> values(length);
    for (double& r : rewards) r = rng.Gaussian();
    for (double& v : values) v = rng.Gaussian();

    const std::vector<double> fast = rl::Gae(rewards, values, 0.99, 0.95);
    for (int t = 0; t < length; ++t) {
      double advantage = 0.0;
      double factor = 1.0;
      for (int k = t; k < length; ++k) {
        const double next_value = k + 1 < length ? values[k + 1] : 0.0;
        advantage += factor * (rewards[k] + 0.99 * next_value - values[k]);
        factor *= 0.99 * 0.95;
      }
      ok &= std::abs(fast[t] - advantage) < 1e-12;
    }

    const std::vector<double> td = rl::Gae(rewards, values, 0.99, 0.0);
    const std::vector<double> mc = rl::Gae(rewards, values, 0.99, 1.0);
    const std::vector<double> returns = rl::RewardsToGo(rewards, 0.99);
    for (int t = 0; t < length; ++t) {
      const double next_value = t + 1 < length ? values[t + 1] : 0.0;
      ok &= std::abs(td[t] - (rewards[t] + 0.99 * next_value - values[t])) < 1e-12;
      ok &= std::abs(mc[t] - (returns[t] - values[t])) < 1e-12;
    }
  }
  Report(8, "gae matches the brute-force sum to 1e-12", ok);
}

TEST_CASE("ppo ratio identity and clipped gradients") {
  bool ok = true;

  CheatEnv env;
  Rng rng(17);
  const nn::MlpParams policy =
      nn::Init(rl::PolicyLayerSizes(), nn::HeadKind::kSoftmaxPolicy, 23);
  const nn::MlpParams value =
      nn::Init(rl::ValueLayerSizes(), nn::HeadKind::kScalarValue, 24);
  const rl::Batch batch = rl::CollectBatch(env, policy, &value, 1000, rng);
  for (const rl::Transition& t : batch.transitions) {
    const std::vector<double> probs = nn::ForwardPolicy(policy, t.observation);
    ok &= std::abs(std::exp(std::log(probs[t.action_index]) - t.log_prob) - 1.0) < 1e-12;
  }

  rl::AlgoConfig config = rl::AlgoConfig::Defaults(rl::Algorithm::kPpo);
  config.entropy_coef = 0.0;
  rl::Batch clipped;
  clipped.episode_starts = {0};
  for (int i = 0; i < 8; ++i) {
    rl::Transition t;
    Rng obs_rng(200 + i);
    for (double& bit : t.observation) bit = obs_rng.UniformInt(2) ? 1.0 : 0.0;
    t.action_index = i % kNumEnvActions;
    const std::vector<double> probs = nn::ForwardPolicy(policy, t.observation);
    t.log_prob = std::log(probs[t.action_index]) - std::log(1.25);  // ratio 1.25 > 1.2
    clipped.transitions.push_back(std::move(t));
    clipped.weights.push_back(0.5 + i);  // positive advantages
  }
  clipped.returns = clipped.weights;
  nn::Gradients grads = nn::MakeGradients(policy);
  rl::PolicyObjective(clipped, policy, config, /*ppo=*/true, &grads);
  ok &= grads.MaxAbs() == 0.0;

  Report(9, "ppo starts unclipped; clipped terms shed no gradient", ok);
}

TEST_CASE("smoke training beats the random baseline") {
  const double baseline = UniformRandomBaseline(2000, 999);
  std::printf("             uniform-random baseline fireworks: %.3f\n", baseline);

  bool ok = true;
  for (const rl::Algorithm algo :
       {rl::Algorithm::kSpg, rl::Algorithm::kVpg, rl::Algorithm::kPpo}) {
    double final_mean_sum = 0.0;
    double peak = 0.0;
    for (const uint64_t seed : {1ull, 2ull}) {
      RunConfig config = RunConfig::Defaults(algo);
      config.seed = seed;
      config.epochs = 200;
      config.batch_min_steps = 1000;
      Trainer trainer(config);
      std::vector<double> fireworks;
      for (int epoch = 0; epoch < config.epochs; ++epoch) {
        const EpochRow row = trainer.RunEpoch();
        fireworks.push_back(row.mean_fireworks);
        peak = std::max(peak, row.mean_fireworks);
      }
      double final_mean = 0.0;
      for (int i = 180; i < 200; ++i) final_mean += fireworks[i];
      final_mean /= 20.0;
      final_mean_sum += final_mean;
      std::printf("             %s seed %llu: final-20 fireworks %.3f\n",
                  rl::AlgorithmName(algo), static_cast<unsigned long long>(seed),
                  final_mean);
      std::fflush(stdout);
    }
    const double mean_over_seeds = final_mean_sum / 2.0;
    const bool algo_ok = mean_over_seeds >= baseline + 2.0;
    std::printf("             %s mean over seeds %.3f vs gate %.3f  peak %.3f%s\n",
                rl::AlgorithmName(algo), mean_over_seeds, baseline + 2.0, peak,
                peak > 5.0 ? " (early-dynamics echo: fireworks passed 5)" : "");
    std::fflush(stdout);
    ok &= algo_ok;
  }
  Report(10, "200-epoch runs beat the baseline by >= 2.0 fireworks", ok);
}

TEST_CASE("metric sanity: bias extremes and initial entropy") {
  bool ok = true;
  metrics::ActionProbProfile uniform;
  for (int i = 0; i < kNumEnvActions; ++i) uniform.p[i] = 1.0 / kNumEnvActions;
  ok &= *metrics::PositionalBias(uniform, metrics::kPlaySlots) == 0.0;

  metrics::ActionProbProfile onehot;
  onehot.p[7] = 1.0;
  ok &= *metrics::PositionalBias(onehot, metrics::kDiscardSlots) == 1.0;

  CheatEnv env;
  Rng rng(Rng::DeriveSeed(1, 0));
  const nn::MlpParams policy = nn::Init(rl::PolicyLayerSizes(),
                                        nn::HeadKind::kSoftmaxPolicy,
                                        Rng::DeriveSeed(1, 1));
  const rl::Batch batch = rl::CollectBatch(env, policy, nullptr, 1000, rng);
  std::printf("             initial policy entropy %.4f (ln 11 = %.4f)\n",
              batch.mean_entropy, std::log(11.0));
  ok &= std::abs(batch.mean_entropy - std::log(11.0)) < 0.05;

  Report(11, "bias extremes are 0/1; initial entropy near ln 11", ok);
}

TEST_CASE("training is byte-deterministic per seed") {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "hanabi_acceptance_det";
  fs::remove_all(dir);

  RunConfig config = RunConfig::Defaults(rl::Algorithm::kVpg);
  config.seed = 21;
  config.epochs = 3;
  config.batch_min_steps = 300;

  auto read = [](const fs::path& p) {
    std::ifstream in(p);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
  };
  config.out_dir = (dir / "a").string();
  RunTraining(config);
  config.out_dir = (dir / "b").string();
  RunTraining(config);
  const bool ok = read(dir / "a" / "metrics.csv") == read(dir / "b" / "metrics.csv") &&
                  !read(dir / "a" / "metrics.csv").empty();
  fs::remove_all(dir);
  Report(12, "identical seed runs produce byte-identical CSVs", ok);
}
