#ifndef HANABI_GRAD_CHECK_HPP_
#define HANABI_GRAD_CHECK_HPP_

#include <cstdint>

#include "hanabi/rl.hpp"

namespace hanabi {

struct GradCheckReport {
  double spg_max_rel_error = 0.0;
  double vpg_max_rel_error = 0.0;
  double ppo_max_rel_error = 0.0;
  double value_max_rel_error = 0.0;

  double MaxError() const;
};

// Central finite differences through the full batch objectives on small
// randomly generated batches, compared against the analytic gradients over
// every parameter of a reduced network.
GradCheckReport RunGradCheck(uint64_t seed, int batches_per_objective,
                             double step = 1e-5);

}  // namespace hanabi

#endif  // HANABI_GRAD_CHECK_HPP_
