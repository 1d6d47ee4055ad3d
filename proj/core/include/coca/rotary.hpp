#pragma once

#include <optional>
#include <vector>

#include "coca/tensor.hpp"

namespace coca {

// Precomputed rotation table. freqs[j] = base^(-2j/d) for j in [0, d/2);
// cos/sin caches hold cos(p*theta_j), sin(p*theta_j) for p in [0, max_pos).
// Built in double precision; application casts to the caller's compute type.
// Immutable after construction, safe for concurrent reads.
struct RotaryTable {
  int head_dim = 0;
  double base = 10000.0;
  int max_pos = 0;
  std::vector<double> freqs;
  Tensor<double> cos_cache;  // [max_pos x d/2]
  Tensor<double> sin_cache;  // [max_pos x d/2]
};

RotaryTable build_rotary_table(int head_dim, double base = 10000.0, int max_pos = 1);

// Rotates pairs (j, j+d/2) of every head vector. x is [seq x heads x head_dim];
// row i sits at absolute position offset + i.
template <typename T>
void apply_rotation_inplace(Tensor<T>& x, const RotaryTable& table, int offset);

template <typename T>
Tensor<T> apply_rotation(const Tensor<T>& x, const RotaryTable& table, int offset);

// Inference-time base enlargement: base' = base * kappa^e with
// kappa = target_len / train_len and e defaulting to d/(d-2). kappa == 1
// returns the table unchanged.
RotaryTable ntk_rescale(const RotaryTable& table, int train_len, int target_len,
                        std::optional<double> scaling_exponent = std::nullopt);

// Same base and frequencies, caches extended to cover at least max_pos rows.
RotaryTable with_capacity(const RotaryTable& table, int max_pos);

}  // namespace coca
