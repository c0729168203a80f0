#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "hanabi/nn.hpp"
#include "hanabi/rng.hpp"

using namespace hanabi;
using namespace hanabi::nn;

namespace {

std::vector<double> RandomInput(int size, Rng& rng) {
  std::vector<double> input(size);
  for (double& x : input) x = rng.Gaussian();
  return input;
}

}  // namespace

TEST_CASE("policy network parameter count follows the layer shapes") {
  const MlpParams params =
      Init({136, 128, 128, 64, 11}, HeadKind::kSoftmaxPolicy, 1);
  // Shape arithmetic: sum of out*in + out over the four layers.
  size_t expected = 0;
  const int sizes[] = {136, 128, 128, 64, 11};
  for (int i = 0; i + 1 < 5; ++i) {
    expected += static_cast<size_t>(sizes[i]) * sizes[i + 1] + sizes[i + 1];
  }
  CHECK(params.ParameterCount() == expected);
  CHECK(expected == 43019);
}

TEST_CASE("init is deterministic per seed and sensitive to it") {
  const std::vector<int> sizes = {10, 8, 3};
  const MlpParams a = Init(sizes, HeadKind::kSoftmaxPolicy, 0);
  const MlpParams b = Init(sizes, HeadKind::kSoftmaxPolicy, 0);
  const MlpParams c = Init(sizes, HeadKind::kSoftmaxPolicy, 1);
  CHECK(a.layers[0].w == b.layers[0].w);
  CHECK(a.layers[0].w != c.layers[0].w);
  for (double bias : a.layers[0].b) CHECK(bias == 0.0);
  for (double w : a.layers[0].w) CHECK(std::isfinite(w));
}

TEST_CASE("softmax head is a distribution for any finite parameters") {
  Rng rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    const MlpParams params = Init({12, 9, 11}, HeadKind::kSoftmaxPolicy, rng.NextUint64());
    const std::vector<double> input = RandomInput(12, rng);
    const std::vector<double> probs = ForwardPolicy(params, input);
    double total = 0.0;
    for (double p : probs) {
      CHECK(p > 0.0);
      total += p;
    }
    CHECK(std::abs(total - 1.0) < 1e-9);
  }
}

TEST_CASE("zero weights give the uniform distribution and a zero value") {
  MlpParams policy = Init({6, 5, 11}, HeadKind::kSoftmaxPolicy, 0);
  for (Layer& layer : policy.layers) std::fill(layer.w.begin(), layer.w.end(), 0.0);
  Rng rng(1);
  const std::vector<double> probs = ForwardPolicy(policy, RandomInput(6, rng));
  for (double p : probs) CHECK(p == doctest::Approx(1.0 / 11).epsilon(1e-12));

  MlpParams value = Init({6, 5, 1}, HeadKind::kScalarValue, 0);
  for (Layer& layer : value.layers) std::fill(layer.w.begin(), layer.w.end(), 0.0);
  CHECK(ForwardValue(value, RandomInput(6, rng)) == 0.0);
}

TEST_CASE("doubling the final layer doubles a scalar head output") {
  Rng rng(5);
  MlpParams value = Init({7, 6, 4, 1}, HeadKind::kScalarValue, 11);
  const std::vector<double> input = RandomInput(7, rng);
  const double before = ForwardValue(value, input);
  for (double& w : value.layers.back().w) w *= 2.0;
  const double after = ForwardValue(value, input);
  CHECK(after == doctest::Approx(2.0 * before).epsilon(1e-12));
}

TEST_CASE("backward matches central finite differences") {
  // Loss = fixed random linear combination of the raw outputs.
  Rng rng(17);
  for (int trial = 0; trial < 5; ++trial) {
    MlpParams params = Init({9, 8, 6, 4}, HeadKind::kSoftmaxPolicy, rng.NextUint64());
    const std::vector<double> input = RandomInput(9, rng);
    std::vector<double> coeffs(4);
    for (double& c : coeffs) c = rng.Gaussian();

    auto loss = [&] {
      Workspace ws;
      Forward(params, input, ws);
      double total = 0.0;
      for (int i = 0; i < 4; ++i) total += coeffs[i] * ws.act.back()[i];
      return total;
    };

    Workspace ws;
    Forward(params, input, ws);
    Gradients grads = MakeGradients(params);
    Backward(params, ws, coeffs, grads);

    const double h = 1e-5;
    double max_err = 0.0;
    for (size_t l = 0; l < params.layers.size(); ++l) {
      auto sweep = [&](std::vector<double>& values, const std::vector<double>& g) {
        for (size_t i = 0; i < values.size(); ++i) {
          const double saved = values[i];
          values[i] = saved + h;
          const double up = loss();
          values[i] = saved - h;
          const double down = loss();
          values[i] = saved;
          const double numeric = (up - down) / (2.0 * h);
          const double denom = std::max({1.0, std::abs(g[i]), std::abs(numeric)});
          max_err = std::max(max_err, std::abs(g[i] - numeric) / denom);
        }
      };
      sweep(params.layers[l].w, grads.layers[l].w);
      sweep(params.layers[l].b, grads.layers[l].b);
    }
    CHECK(max_err < 1e-5);
  }
}

TEST_CASE("gradient of a value output w.r.t. the final bias is one") {
  MlpParams value = Init({5, 4, 1}, HeadKind::kScalarValue, 2);
  Rng rng(2);
  Workspace ws;
  Forward(value, RandomInput(5, rng), ws);
  Gradients grads = MakeGradients(value);
  const double upstream[1] = {1.0};
  Backward(value, ws, upstream, grads);
  CHECK(grads.layers.back().b[0] == 1.0);
}

TEST_CASE("zero upstream gradient yields zero parameter gradients") {
  MlpParams params = Init({5, 4, 3}, HeadKind::kSoftmaxPolicy, 9);
  Rng rng(4);
  Workspace ws;
  Forward(params, RandomInput(5, rng), ws);
  Gradients grads = MakeGradients(params);
  const std::vector<double> zeros(3, 0.0);
  Backward(params, ws, zeros, grads);
  CHECK(grads.MaxAbs() == 0.0);
}

TEST_CASE("adam leaves parameters alone on a zero gradient") {
  MlpParams params = Init({4, 3, 2}, HeadKind::kScalarValue, 3);
  const MlpParams before = params;
  AdamState adam = MakeAdamState(params);
  Gradients grads = MakeGradients(params);
  AdamStep(params, grads, adam, 3e-4);
  CHECK(adam.step == 1);
  for (size_t l = 0; l < params.layers.size(); ++l) {
    CHECK(params.layers[l].w == before.layers[l].w);
    CHECK(params.layers[l].b == before.layers[l].b);
  }
}

TEST_CASE("adam step magnitude approaches the learning rate under a constant gradient") {
  // Scripted-iteration fixed point: with g constant, mhat -> g and
  // vhat -> g^2, so the per-parameter step approaches learning_rate.
  MlpParams params = Init({2, 1}, HeadKind::kScalarValue, 1);
  params.layers[0].w = {0.0, 0.0};
  params.layers[0].b = {0.0};
  AdamState adam = MakeAdamState(params);
  Gradients grads = MakeGradients(params);
  grads.layers[0].w = {0.5, -2.0};
  grads.layers[0].b = {1.0};
  const double lr = 1e-3;
  double prev_w0 = 0.0;
  double last_step = 0.0;
  for (int i = 0; i < 500; ++i) {
    AdamStep(params, grads, adam, lr);
    last_step = params.layers[0].w[0] - prev_w0;
    prev_w0 = params.layers[0].w[0];
  }
  CHECK(std::abs(last_step) == doctest::Approx(lr).epsilon(1e-3));
  CHECK(adam.step == 500);
  // Sign follows descent: positive gradient moves the parameter down.
  CHECK(params.layers[0].w[0] < 0.0);
  CHECK(params.layers[0].w[1] > 0.0);
}

TEST_CASE("entropy of standard distributions") {
  std::vector<double> uniform(11, 1.0 / 11);
  CHECK(Entropy(uniform) == doctest::Approx(std::log(11.0)).epsilon(1e-12));

  std::vector<double> onehot(11, 0.0);
  onehot[4] = 1.0;
  CHECK(Entropy(onehot) == 0.0);

  std::vector<double> half = {0.5, 0.5, 0.0, 0.0};
  CHECK(Entropy(half) == doctest::Approx(std::log(2.0)).epsilon(1e-12));

  // Bounds over random distributions.
  Rng rng(8);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<double> p(11);
    double total = 0.0;
    for (double& x : p) {
      x = rng.UniformReal() + 1e-12;
      total += x;
    }
    for (double& x : p) x /= total;
    const double h = Entropy(p);
    CHECK(h >= 0.0);
    CHECK(h <= std::log(11.0) + 1e-12);
  }
}

TEST_CASE("log softmax is stable under large logits") {
  const std::vector<double> logits = {1000.0, 1001.0, 999.0};
  std::vector<double> log_probs(3);
  LogSoftmax(logits, log_probs);
  double total = 0.0;
  for (double lp : log_probs) {
    CHECK(std::isfinite(lp));
    total += std::exp(lp);
  }
  CHECK(total == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("fixed seeds give bit-identical parameter trajectories") {
  auto run = [] {
    MlpParams params = Init({6, 5, 2}, HeadKind::kScalarValue, 123);
    AdamState adam = MakeAdamState(params);
    Rng rng(9);
    for (int step = 0; step < 20; ++step) {
      Gradients grads = MakeGradients(params);
      for (Layer& layer : grads.layers) {
        for (double& g : layer.w) g = rng.Gaussian();
        for (double& g : layer.b) g = rng.Gaussian();
      }
      AdamStep(params, grads, adam, 1e-3);
    }
    return params;
  };
  const MlpParams a = run();
  const MlpParams b = run();
  for (size_t l = 0; l < a.layers.size(); ++l) {
    CHECK(a.layers[l].w == b.layers[l].w);
    CHECK(a.layers[l].b == b.layers[l].b);
  }
}
