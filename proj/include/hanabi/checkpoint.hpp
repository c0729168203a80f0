#ifndef HANABI_CHECKPOINT_HPP_
#define HANABI_CHECKPOINT_HPP_

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

#include "hanabi/nn.hpp"
#include "hanabi/rl.hpp"

namespace hanabi {

struct CheckpointError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Checkpoint {
  rl::Algorithm algorithm = rl::Algorithm::kVpg;
  int64_t epoch = 0;
  nn::MlpParams policy;
  nn::AdamState policy_adam;
  std::optional<nn::MlpParams> value;
  std::optional<nn::AdamState> value_adam;
};

// Binary format with raw little-endian doubles; round-trips bit-exactly.
void SaveCheckpoint(const Checkpoint& checkpoint, const std::string& path);
Checkpoint LoadCheckpoint(const std::string& path);  // throws CheckpointError

}  // namespace hanabi

#endif  // HANABI_CHECKPOINT_HPP_
