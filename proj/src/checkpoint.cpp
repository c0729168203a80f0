#include "hanabi/checkpoint.hpp"

#include <cstring>
#include <fstream>
#include <vector>

namespace hanabi {

namespace {

constexpr char kMagic[8] = {'H', 'N', 'B', 'C', 'K', 'P', 'T', '1'};

void WriteU64(std::ostream& out, uint64_t value) {
  char bytes[8];
  for (int i = 0; i < 8; ++i) bytes[i] = static_cast<char>((value >> (8 * i)) & 0xff);
  out.write(bytes, 8);
}

uint64_t ReadU64(std::istream& in) {
  unsigned char bytes[8];
  in.read(reinterpret_cast<char*>(bytes), 8);
  if (!in) throw CheckpointError("truncated checkpoint");
  uint64_t value = 0;
  for (int i = 0; i < 8; ++i) value |= static_cast<uint64_t>(bytes[i]) << (8 * i);
  return value;
}

void WriteDoubles(std::ostream& out, const std::vector<double>& values) {
  WriteU64(out, values.size());
  for (double v : values) {
    uint64_t bits;
    std::memcpy(&bits, &v, 8);
    WriteU64(out, bits);
  }
}

std::vector<double> ReadDoubles(std::istream& in) {
  const uint64_t count = ReadU64(in);
  if (count > (1ull << 32)) throw CheckpointError("corrupt checkpoint: bad array size");
  std::vector<double> values(count);
  for (uint64_t i = 0; i < count; ++i) {
    const uint64_t bits = ReadU64(in);
    std::memcpy(&values[i], &bits, 8);
  }
  return values;
}

void WriteLayers(std::ostream& out, const std::vector<nn::Layer>& layers) {
  WriteU64(out, layers.size());
  for (const nn::Layer& layer : layers) {
    WriteU64(out, static_cast<uint64_t>(layer.in));
    WriteU64(out, static_cast<uint64_t>(layer.out));
    WriteDoubles(out, layer.w);
    WriteDoubles(out, layer.b);
  }
}

std::vector<nn::Layer> ReadLayers(std::istream& in) {
  const uint64_t count = ReadU64(in);
  if (count > 64) throw CheckpointError("corrupt checkpoint: bad layer count");
  std::vector<nn::Layer> layers(count);
  for (nn::Layer& layer : layers) {
    layer.in = static_cast<int>(ReadU64(in));
    layer.out = static_cast<int>(ReadU64(in));
    layer.w = ReadDoubles(in);
    layer.b = ReadDoubles(in);
    if (layer.w.size() != static_cast<size_t>(layer.in) * layer.out ||
        layer.b.size() != static_cast<size_t>(layer.out)) {
      throw CheckpointError("corrupt checkpoint: layer shape mismatch");
    }
  }
  return layers;
}

void WriteParams(std::ostream& out, const nn::MlpParams& params) {
  WriteU64(out, params.head == nn::HeadKind::kSoftmaxPolicy ? 0 : 1);
  WriteLayers(out, params.layers);
}

nn::MlpParams ReadParams(std::istream& in) {
  nn::MlpParams params;
  params.head = ReadU64(in) == 0 ? nn::HeadKind::kSoftmaxPolicy : nn::HeadKind::kScalarValue;
  params.layers = ReadLayers(in);
  return params;
}

void WriteAdam(std::ostream& out, const nn::AdamState& state) {
  WriteU64(out, static_cast<uint64_t>(state.step));
  WriteLayers(out, state.m);
  WriteLayers(out, state.v);
}

nn::AdamState ReadAdam(std::istream& in) {
  nn::AdamState state;
  state.step = static_cast<int64_t>(ReadU64(in));
  state.m = ReadLayers(in);
  state.v = ReadLayers(in);
  return state;
}

}  // namespace

void SaveCheckpoint(const Checkpoint& checkpoint, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw CheckpointError("cannot write checkpoint: " + path);
  out.write(kMagic, sizeof(kMagic));
  WriteU64(out, static_cast<uint64_t>(checkpoint.algorithm));
  WriteU64(out, static_cast<uint64_t>(checkpoint.epoch));
  WriteParams(out, checkpoint.policy);
  WriteAdam(out, checkpoint.policy_adam);
  WriteU64(out, checkpoint.value.has_value() ? 1 : 0);
  if (checkpoint.value) {
    WriteParams(out, *checkpoint.value);
    WriteAdam(out, *checkpoint.value_adam);
  }
  if (!out) throw CheckpointError("failed writing checkpoint: " + path);
}

Checkpoint LoadCheckpoint(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CheckpointError("cannot read checkpoint: " + path);
  char magic[8];
  in.read(magic, sizeof(magic));
  if (!in || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0) {
    throw CheckpointError("not a checkpoint file: " + path);
  }
  Checkpoint checkpoint;
  const uint64_t algo = ReadU64(in);
  if (algo > 2) throw CheckpointError("corrupt checkpoint: bad algorithm");
  checkpoint.algorithm = static_cast<rl::Algorithm>(algo);
  checkpoint.epoch = static_cast<int64_t>(ReadU64(in));
  checkpoint.policy = ReadParams(in);
  checkpoint.policy_adam = ReadAdam(in);
  if (ReadU64(in) != 0) {
    checkpoint.value = ReadParams(in);
    checkpoint.value_adam = ReadAdam(in);
  }
  return checkpoint;
}

}  // namespace hanabi
