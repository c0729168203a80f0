#ifndef HANABI_NN_HPP_
#define HANABI_NN_HPP_

#include <cstdint>
#include <span>
#include <vector>

namespace hanabi::nn {

enum class HeadKind : int8_t { kSoftmaxPolicy, kScalarValue };

struct Layer {
  int in = 0;
  int out = 0;
  std::vector<double> w;  // row-major [out][in]
  std::vector<double> b;  // [out]
};

struct MlpParams {
  std::vector<Layer> layers;  // hidden layers use Tanh; the last layer is raw
  HeadKind head = HeadKind::kSoftmaxPolicy;

  int InputSize() const { return layers.front().in; }
  int OutputSize() const { return layers.back().out; }
  size_t ParameterCount() const;
};

// Orthogonal weight rows (gain 1), biases zero; deterministic per seed.
MlpParams Init(const std::vector<int>& layer_sizes, HeadKind head, uint64_t seed);

// Per-layer activations of one forward pass, kept for the backward pass.
struct Workspace {
  std::vector<std::vector<double>> act;  // act[0] = input, act[L] = raw output
};

// Raw network output (logits for a policy head, scalar for a value head)
// lands in workspace.act.back().
void Forward(const MlpParams& params, std::span<const double> input, Workspace& ws);

struct Gradients {
  std::vector<Layer> layers;  // same shapes as the parameters

  void Zero();
  double MaxAbs() const;
};

Gradients MakeGradients(const MlpParams& params);

// Accumulates d(objective)/d(params) given d(objective)/d(raw output).
void Backward(const MlpParams& params, const Workspace& ws,
              std::span<const double> output_grad, Gradients& grads);

// Numerically stable softmax / log-softmax over logits.
void Softmax(std::span<const double> logits, std::span<double> probs);
void LogSoftmax(std::span<const double> logits, std::span<double> log_probs);

std::vector<double> ForwardPolicy(const MlpParams& params, std::span<const double> input);
double ForwardValue(const MlpParams& params, std::span<const double> input);

// -sum p ln p with 0 ln 0 = 0.
double Entropy(std::span<const double> probs);

struct AdamState {
  std::vector<Layer> m;  // first moments, shaped like the parameters
  std::vector<Layer> v;  // second moments
  int64_t step = 0;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

AdamState MakeAdamState(const MlpParams& params);

// One bias-corrected Adam descent step along `grads`; pass the gradient of a
// loss (negate an objective gradient for ascent).
void AdamStep(MlpParams& params, const Gradients& grads, AdamState& state,
              double learning_rate);

}  // namespace hanabi::nn

#endif  // HANABI_NN_HPP_
