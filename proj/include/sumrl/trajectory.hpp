#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "sumrl/corpus.hpp"
#include "sumrl/embeddings.hpp"

namespace sumrl {

/// Probabilities entering a log are clamped to [kProbFloor, 1 - kProbFloor].
inline constexpr double kProbFloor = 1e-8;

double clamp_probability(double p) noexcept;

/// One decision: include (1) or skip (0) sentence i.
struct Step {
  Vector state;
  int action = 0;
  double p_rl = 0.5;  // pi_RL(action | state) at collection time, clamped
  double p_sl = 0.5;  // pi_SL(action | state), clamped
  double reward = 0.0;
  double ret = 0.0;
  double advantage = 0.0;
};

struct Trajectory {
  std::string doc_id;
  std::size_t doc_index = 0;
  std::vector<Step> steps;  // one per sentence, document order

  Summary summary() const;
};

}  // namespace sumrl
