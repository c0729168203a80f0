#include "hanabi/nn.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "hanabi/rng.hpp"

namespace hanabi::nn {

size_t MlpParams::ParameterCount() const {
  size_t count = 0;
  for (const Layer& layer : layers) count += layer.w.size() + layer.b.size();
  return count;
}

namespace {

// Orthonormal rows via modified Gram-Schmidt on Gaussian draws. All layer
// shapes here have out <= in.
void OrthogonalRows(Layer& layer, double gain, Rng& rng) {
  for (double& w : layer.w) w = rng.Gaussian();
  for (int row = 0; row < layer.out; ++row) {
    double* r = layer.w.data() + static_cast<size_t>(row) * layer.in;
    for (int prev = 0; prev < row; ++prev) {
      const double* p = layer.w.data() + static_cast<size_t>(prev) * layer.in;
      double dot = 0.0;
      for (int col = 0; col < layer.in; ++col) dot += r[col] * p[col];
      for (int col = 0; col < layer.in; ++col) r[col] -= dot * p[col];
    }
    double norm = 0.0;
    for (int col = 0; col < layer.in; ++col) norm += r[col] * r[col];
    norm = std::sqrt(norm);
    for (int col = 0; col < layer.in; ++col) r[col] *= gain / norm;
  }
}

}  // namespace

MlpParams Init(const std::vector<int>& layer_sizes, HeadKind head, uint64_t seed) {
  if (layer_sizes.size() < 2) throw std::invalid_argument("need at least two layer sizes");
  for (int size : layer_sizes) {
    if (size <= 0) throw std::invalid_argument("layer sizes must be positive");
  }
  MlpParams params;
  params.head = head;
  Rng rng(seed);
  for (size_t i = 0; i + 1 < layer_sizes.size(); ++i) {
    Layer layer;
    layer.in = layer_sizes[i];
    layer.out = layer_sizes[i + 1];
    layer.w.resize(static_cast<size_t>(layer.in) * layer.out);
    layer.b.assign(layer.out, 0.0);
    OrthogonalRows(layer, 1.0, rng);
    params.layers.push_back(std::move(layer));
  }
  return params;
}

void Forward(const MlpParams& params, std::span<const double> input, Workspace& ws) {
  const size_t num_layers = params.layers.size();
  ws.act.resize(num_layers + 1);
  ws.act[0].assign(input.begin(), input.end());
  for (size_t l = 0; l < num_layers; ++l) {
    const Layer& layer = params.layers[l];
    const std::vector<double>& in = ws.act[l];
    std::vector<double>& out = ws.act[l + 1];
    out.assign(layer.out, 0.0);
    for (int row = 0; row < layer.out; ++row) {
      const double* wrow = layer.w.data() + static_cast<size_t>(row) * layer.in;
      double sum = layer.b[row];
      for (int col = 0; col < layer.in; ++col) sum += wrow[col] * in[col];
      out[row] = sum;
    }
    if (l + 1 < num_layers) {
      for (double& x : out) x = std::tanh(x);
    }
  }
}

Gradients MakeGradients(const MlpParams& params) {
  Gradients grads;
  for (const Layer& layer : params.layers) {
    Layer g;
    g.in = layer.in;
    g.out = layer.out;
    g.w.assign(layer.w.size(), 0.0);
    g.b.assign(layer.b.size(), 0.0);
    grads.layers.push_back(std::move(g));
  }
  return grads;
}

void Gradients::Zero() {
  for (Layer& layer : layers) {
    std::fill(layer.w.begin(), layer.w.end(), 0.0);
    std::fill(layer.b.begin(), layer.b.end(), 0.0);
  }
}

double Gradients::MaxAbs() const {
  double best = 0.0;
  for (const Layer& layer : layers) {
    for (double w : layer.w) best = std::max(best, std::abs(w));
    for (double b : layer.b) best = std::max(best, std::abs(b));
  }
  return best;
}

void Backward(const MlpParams& params, const Workspace& ws,
              std::span<const double> output_grad, Gradients& grads) {
  const size_t num_layers = params.layers.size();
  std::vector<double> delta(output_grad.begin(), output_grad.end());
  for (size_t l = num_layers; l-- > 0;) {
    const Layer& layer = params.layers[l];
    Layer& grad = grads.layers[l];
    const std::vector<double>& in = ws.act[l];
    for (int row = 0; row < layer.out; ++row) {
      const double d = delta[row];
      grad.b[row] += d;
      double* grow = grad.w.data() + static_cast<size_t>(row) * layer.in;
      for (int col = 0; col < layer.in; ++col) grow[col] += d * in[col];
    }
    if (l == 0) break;
    std::vector<double> prev(layer.in, 0.0);
    for (int row = 0; row < layer.out; ++row) {
      const double d = delta[row];
      const double* wrow = layer.w.data() + static_cast<size_t>(row) * layer.in;
      for (int col = 0; col < layer.in; ++col) prev[col] += d * wrow[col];
    }
    // The feeding layer's output went through tanh; act[l] holds tanh(z).
    for (int col = 0; col < layer.in; ++col) {
      prev[col] *= 1.0 - in[col] * in[col];
    }
    delta = std::move(prev);
  }
}

void Softmax(std::span<const double> logits, std::span<double> probs) {
  const double max_logit = *std::max_element(logits.begin(), logits.end());
  double total = 0.0;
  for (size_t i = 0; i < logits.size(); ++i) {
    probs[i] = std::exp(logits[i] - max_logit);
    total += probs[i];
  }
  for (size_t i = 0; i < logits.size(); ++i) probs[i] /= total;
}

void LogSoftmax(std::span<const double> logits, std::span<double> log_probs) {
  const double max_logit = *std::max_element(logits.begin(), logits.end());
  double total = 0.0;
  for (double logit : logits) total += std::exp(logit - max_logit);
  const double log_total = std::log(total) + max_logit;
  for (size_t i = 0; i < logits.size(); ++i) log_probs[i] = logits[i] - log_total;
}

std::vector<double> ForwardPolicy(const MlpParams& params, std::span<const double> input) {
  if (params.head != HeadKind::kSoftmaxPolicy) {
    throw std::logic_error("ForwardPolicy needs a softmax head");
  }
  Workspace ws;
  Forward(params, input, ws);
  std::vector<double> probs(ws.act.back().size());
  Softmax(ws.act.back(), probs);
  return probs;
}

double ForwardValue(const MlpParams& params, std::span<const double> input) {
  if (params.head != HeadKind::kScalarValue) {
    throw std::logic_error("ForwardValue needs a scalar head");
  }
  Workspace ws;
  Forward(params, input, ws);
  return ws.act.back()[0];
}

double Entropy(std::span<const double> probs) {
  double entropy = 0.0;
  for (double p : probs) {
    if (p > 0.0) entropy -= p * std::log(p);
  }
  return entropy;
}

AdamState MakeAdamState(const MlpParams& params) {
  AdamState state;
  const Gradients zero = MakeGradients(params);
  state.m = zero.layers;
  state.v = zero.layers;
  return state;
}

void AdamStep(MlpParams& params, const Gradients& grads, AdamState& state,
              double learning_rate) {
  ++state.step;
  const double bc1 = 1.0 - std::pow(state.beta1, static_cast<double>(state.step));
  const double bc2 = 1.0 - std::pow(state.beta2, static_cast<double>(state.step));
  for (size_t l = 0; l < params.layers.size(); ++l) {
    Layer& layer = params.layers[l];
    const Layer& grad = grads.layers[l];
    Layer& m = state.m[l];
    Layer& v = state.v[l];
    auto update = [&](std::vector<double>& value, const std::vector<double>& g,
                      std::vector<double>& m1, std::vector<double>& m2) {
      for (size_t i = 0; i < value.size(); ++i) {
        m1[i] = state.beta1 * m1[i] + (1.0 - state.beta1) * g[i];
        m2[i] = state.beta2 * m2[i] + (1.0 - state.beta2) * g[i] * g[i];
        const double mhat = m1[i] / bc1;
        const double vhat = m2[i] / bc2;
        value[i] -= learning_rate * mhat / (std::sqrt(vhat) + state.epsilon);
      }
    };
    update(layer.w, grad.w, m.w, v.w);
    update(layer.b, grad.b, m.b, v.b);
  }
}

}  // namespace hanabi::nn
