#pragma once

#include <cstddef>

#include "coca/rotary.hpp"
#include "coca/tensor.hpp"

namespace coca {

enum class AttentionVariant { kCoca, kBaseline };

// Projection weights are stored [in x out]: y_row = x_row * W. score_scale
// defaults to sqrt(head_dim).
template <typename T>
struct AttentionParams {
  Tensor<T> w_q, w_t, w_v, w_o;  // [d_model x d_model]
  int n_heads = 1;
  int head_dim = 2;
  T score_scale = T(1);

  int d_model() const { return n_heads * head_dim; }
};

// Counts live transient buffer elements inside the score kernels. The
// returned score tensor is the result, not a transient, and is excluded.
struct TransientCounter {
  std::size_t current = 0;
  std::size_t peak = 0;
  void add(std::size_t n) {
    current += n;
    if (current > peak) peak = current;
  }
  void release(std::size_t n) { current -= n; }
};

// Decode-time cache. CoCA stores rotated *folded T* (keys are query-dependent
// and cannot be cached); the baseline variant stores rotated keys in the same
// slot. Values are never rotated.
template <typename T>
struct AttentionCache {
  Tensor<T> folded_rotated_t;  // [past x heads x head_dim]
  Tensor<T> past_values;       // [past x heads x head_dim]

  int past_len() const {
    return folded_rotated_t.rank() == 3 ? static_cast<int>(folded_rotated_t.dim(0)) : 0;
  }
};

// out[..., j] = out[..., j+d/2] = max(0, (t[..., j] + t[..., j+d/2]) / 2).
template <typename T>
Tensor<T> fold_relu_t(const Tensor<T>& t_raw);

// scores[p, m, n] = sum_d q_raw[m,p,d] * t_rot[n,p,d] * q_rot[m,p,d] / scale,
// without materializing any [sq x sk x d] intermediate. q_raw/q_rot are
// [sq x heads x d], t_rot is [sk x heads x d]; result is [heads x sq x sk].
template <typename T>
Tensor<T> coca_scores_fused(const Tensor<T>& q_raw, const Tensor<T>& q_rot,
                            const Tensor<T>& t_rot, T score_scale,
                            TransientCounter* transients = nullptr);

// Equivalence oracle: materializes the Hadamard-product keys
// k_rot[m,n,:] = q_raw[m,:] o t_rot[n,:] (O(heads*sq*sk*d) by construction)
// and dots them with the rotated queries.
template <typename T>
Tensor<T> coca_scores_naive(const Tensor<T>& q_raw, const Tensor<T>& q_rot,
                            const Tensor<T>& t_rot, T score_scale,
                            TransientCounter* transients = nullptr);

// Standard RoPE scores: scores[p, m, n] = dot(q_rot[m,p,:], k_rot[n,p,:]) / scale.
template <typename T>
Tensor<T> rope_scores_baseline(const Tensor<T>& q_rot, const Tensor<T>& k_rot, T score_scale);

// Row-stabilized causal softmax. Key position n is visible to query row m iff
// n <= query_offset + m. Throws StateError on a fully masked row.
template <typename T>
Tensor<T> causal_mask_softmax(const Tensor<T>& scores, int query_offset);

// Full single-sequence attention block: projections, fold/ReLU (CoCA),
// rotation at absolute positions (cache length as offset), cache append,
// scores (fused path for CoCA), mask+softmax, value aggregation, output
// projection. x is [seq x d_model]; cache may be null.
template <typename T>
Tensor<T> attention_forward(const Tensor<T>& x, const AttentionParams<T>& params,
                            const RotaryTable& table, AttentionCache<T>* cache,
                            AttentionVariant variant);

}  // namespace coca
