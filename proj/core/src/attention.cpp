#include "coca/attention.hpp"

#include <cmath>
#include <string>
#include <vector>

#include "coca/errors.hpp"
#include "kernels.hpp"

namespace coca {

namespace {

template <typename T>
void check_head_tensor(const Tensor<T>& x, const char* what) {
  if (x.rank() != 3) throw DimError(std::string(what) + ": expected [seq x heads x head_dim]");
  if (x.dim(2) % 2 != 0) throw ConfigError(std::string(what) + ": head_dim must be even");
}

template <typename T>
void check_score_inputs(const Tensor<T>& q_raw, const Tensor<T>& q_rot, const Tensor<T>& t_rot) {
  check_head_tensor(q_raw, "scores");
  if (!q_raw.same_shape(q_rot)) throw DimError("scores: q_raw and q_rot shapes differ");
  if (t_rot.rank() != 3 || t_rot.dim(1) != q_raw.dim(1) || t_rot.dim(2) != q_raw.dim(2)) {
    throw DimError("scores: t side must share heads and head_dim with q side");
  }
}

}  // namespace

template <typename T>
Tensor<T> fold_relu_t(const Tensor<T>& t_raw) {
  check_head_tensor(t_raw, "fold_relu_t");
  const std::size_t rows = t_raw.dim(0) * t_raw.dim(1);
  const std::size_t d = t_raw.dim(2);
  const std::size_t half = d / 2;
  Tensor<T> out = t_raw;
  for (std::size_t r = 0; r < rows; ++r) {
    const T* src = t_raw.data() + r * d;
    T* dst = out.data() + r * d;
    for (std::size_t j = 0; j < half; ++j) {
      T v = (src[j] + src[j + half]) / T(2);
      if (v < T(0)) v = T(0);
      dst[j] = v;
      dst[j + half] = v;
    }
  }
  return out;
}

template <typename T>
Tensor<T> coca_scores_fused(const Tensor<T>& q_raw, const Tensor<T>& q_rot,
                            const Tensor<T>& t_rot, T score_scale,
                            TransientCounter* transients) {
  check_score_inputs(q_raw, q_rot, t_rot);
  const std::size_t sq = q_raw.dim(0);
  const std::size_t sk = t_rot.dim(0);
  const std::size_t heads = q_raw.dim(1);
  const std::size_t d = q_raw.dim(2);
  const T inv_scale = T(1) / score_scale;

  Tensor<T> scores({heads, sq, sk});
  // Single reusable d-sized row: the only transient the fused path needs.
  std::vector<T> e_row(d);
  if (transients) transients->add(d);
  for (std::size_t p = 0; p < heads; ++p) {
    for (std::size_t m = 0; m < sq; ++m) {
      const T* qr = q_raw.data() + (m * heads + p) * d;
      const T* qo = q_rot.data() + (m * heads + p) * d;
      for (std::size_t j = 0; j < d; ++j) e_row[j] = qr[j] * qo[j];
      T* out = scores.data() + (p * sq + m) * sk;
      for (std::size_t n = 0; n < sk; ++n) {
        out[n] = detail::dot(e_row.data(), t_rot.data() + (n * heads + p) * d, d) * inv_scale;
      }
    }
  }
  if (transients) transients->release(d);
  return scores;
}

template <typename T>
Tensor<T> coca_scores_naive(const Tensor<T>& q_raw, const Tensor<T>& q_rot,
                            const Tensor<T>& t_rot, T score_scale,
                            TransientCounter* transients) {
  check_score_inputs(q_raw, q_rot, t_rot);
  const std::size_t sq = q_raw.dim(0);
  const std::size_t sk = t_rot.dim(0);
  const std::size_t heads = q_raw.dim(1);
  const std::size_t d = q_raw.dim(2);
  const T inv_scale = T(1) / score_scale;

  // Fully expanded Hadamard keys, one per (head, query, key).
  Tensor<T> k_rot({heads, sq, sk, d});
  if (transients) transients->add(k_rot.size());
  for (std::size_t p = 0; p < heads; ++p) {
    for (std::size_t m = 0; m < sq; ++m) {
      const T* qr = q_raw.data() + (m * heads + p) * d;
      for (std::size_t n = 0; n < sk; ++n) {
        const T* tr = t_rot.data() + (n * heads + p) * d;
        T* kr = k_rot.data() + ((p * sq + m) * sk + n) * d;
        for (std::size_t j = 0; j < d; ++j) kr[j] = qr[j] * tr[j];
      }
    }
  }
  Tensor<T> scores({heads, sq, sk});
  for (std::size_t p = 0; p < heads; ++p) {
    for (std::size_t m = 0; m < sq; ++m) {
      const T* qo = q_rot.data() + (m * heads + p) * d;
      T* out = scores.data() + (p * sq + m) * sk;
      for (std::size_t n = 0; n < sk; ++n) {
        out[n] = detail::dot(qo, k_rot.data() + ((p * sq + m) * sk + n) * d, d) * inv_scale;
      }
    }
  }
  if (transients) transients->release(k_rot.size());
  return scores;
}

template <typename T>
Tensor<T> rope_scores_baseline(const Tensor<T>& q_rot, const Tensor<T>& k_rot, T score_scale) {
  check_head_tensor(q_rot, "rope_scores_baseline");
  if (k_rot.rank() != 3 || k_rot.dim(1) != q_rot.dim(1) || k_rot.dim(2) != q_rot.dim(2)) {
    throw DimError("rope_scores_baseline: k side must share heads and head_dim");
  }
  const std::size_t sq = q_rot.dim(0);
  const std::size_t sk = k_rot.dim(0);
  const std::size_t heads = q_rot.dim(1);
  const std::size_t d = q_rot.dim(2);
  const T inv_scale = T(1) / score_scale;

  Tensor<T> scores({heads, sq, sk});
  for (std::size_t p = 0; p < heads; ++p) {
    for (std::size_t m = 0; m < sq; ++m) {
      const T* qo = q_rot.data() + (m * heads + p) * d;
      T* out = scores.data() + (p * sq + m) * sk;
      for (std::size_t n = 0; n < sk; ++n) {
        out[n] = detail::dot(qo, k_rot.data() + (n * heads + p) * d, d) * inv_scale;
      }
    }
  }
  return scores;
}

template <typename T>
Tensor<T> causal_mask_softmax(const Tensor<T>& scores, int query_offset) {
  if (scores.rank() != 3) throw DimError("causal_mask_softmax: expected [heads x sq x sk]");
  const std::size_t heads = scores.dim(0);
  const std::size_t sq = scores.dim(1);
  const std::size_t sk = scores.dim(2);

  Tensor<T> probs({heads, sq, sk});
  for (std::size_t p = 0; p < heads; ++p) {
    for (std::size_t m = 0; m < sq; ++m) {
      const long long query_pos = static_cast<long long>(query_offset) + static_cast<long long>(m);
      const long long visible = std::min<long long>(query_pos + 1, static_cast<long long>(sk));
      if (visible <= 0) {
        throw StateError("causal_mask_softmax: fully masked row at query position " +
                         std::to_string(query_pos));
      }
      const T* in = scores.data() + (p * sq + m) * sk;
      T* out = probs.data() + (p * sq + m) * sk;
      T row_max = in[0];
      for (long long n = 1; n < visible; ++n) row_max = std::max(row_max, in[n]);
      T sum = T(0);
      for (long long n = 0; n < visible; ++n) {
        const T e = std::exp(in[n] - row_max);
        out[n] = e;
        sum += e;
      }
      const T inv = T(1) / sum;
      for (long long n = 0; n < visible; ++n) out[n] *= inv;
      for (std::size_t n = static_cast<std::size_t>(visible); n < sk; ++n) out[n] = T(0);
    }
  }
  return probs;
}

template <typename T>
Tensor<T> attention_forward(const Tensor<T>& x, const AttentionParams<T>& params,
                            const RotaryTable& table, AttentionCache<T>* cache,
                            AttentionVariant variant) {
  if (x.rank() != 2) throw DimError("attention_forward: x must be [seq x d_model]");
  const std::size_t seq = x.dim(0);
  const std::size_t dm = static_cast<std::size_t>(params.d_model());
  if (x.dim(1) != dm) throw DimError("attention_forward: x width != d_model");
  if (params.head_dim != table.head_dim) {
    throw StateError("attention_forward: table head_dim does not match params");
  }
  const std::size_t heads = static_cast<std::size_t>(params.n_heads);
  const std::size_t d = static_cast<std::size_t>(params.head_dim);

  int past = 0;
  if (cache && cache->past_len() > 0) {
    if (cache->folded_rotated_t.dim(1) != heads || cache->folded_rotated_t.dim(2) != d ||
        !cache->folded_rotated_t.same_shape(cache->past_values)) {
      throw StateError("attention_forward: cache shape does not match params");
    }
    past = cache->past_len();
  }

  // [seq x d_model] rows laid out as [seq x heads x d].
  Tensor<T> q_raw({seq, heads, d});
  Tensor<T> t_side({seq, heads, d});
  Tensor<T> values({seq, heads, d});
  detail::matmul(x.data(), params.w_q.data(), q_raw.data(), seq, dm, dm);
  detail::matmul(x.data(), params.w_t.data(), t_side.data(), seq, dm, dm);
  detail::matmul(x.data(), params.w_v.data(), values.data(), seq, dm, dm);

  if (variant == AttentionVariant::kCoca) t_side = fold_relu_t(t_side);
  apply_rotation_inplace(t_side, table, past);
  const Tensor<T> q_rot = apply_rotation(q_raw, table, past);

  // Assemble full key-side state (past ++ new) and refresh the cache.
  const std::size_t total = static_cast<std::size_t>(past) + seq;
  Tensor<T> all_t({total, heads, d});
  Tensor<T> all_v({total, heads, d});
  if (past > 0) {
    std::copy(cache->folded_rotated_t.data(), cache->folded_rotated_t.data() + cache->folded_rotated_t.size(),
              all_t.data());
    std::copy(cache->past_values.data(), cache->past_values.data() + cache->past_values.size(),
              all_v.data());
  }
  std::copy(t_side.data(), t_side.data() + t_side.size(), all_t.data() + static_cast<std::size_t>(past) * heads * d);
  std::copy(values.data(), values.data() + values.size(), all_v.data() + static_cast<std::size_t>(past) * heads * d);

  Tensor<T> scores = variant == AttentionVariant::kCoca
                         ? coca_scores_fused(q_raw, q_rot, all_t, params.score_scale)
                         : rope_scores_baseline(q_rot, all_t, params.score_scale);
  const Tensor<T> probs = causal_mask_softmax(scores, past);

  Tensor<T> context({seq, heads, d});
  for (std::size_t p = 0; p < heads; ++p) {
    for (std::size_t m = 0; m < seq; ++m) {
      const T* w = probs.data() + (p * seq + m) * total;
      T* ctx = context.data() + (m * heads + p) * d;
      for (std::size_t n = 0; n < total; ++n) {
        if (w[n] != T(0)) detail::axpy(w[n], all_v.data() + (n * heads + p) * d, ctx, d);
      }
    }
  }

  Tensor<T> y({seq, dm});
  detail::matmul(context.data(), params.w_o.data(), y.data(), seq, dm, dm);

  if (cache) {
    cache->folded_rotated_t = std::move(all_t);
    cache->past_values = std::move(all_v);
  }
  return y;
}

#define COCA_INSTANTIATE_ATTENTION(T)                                                              \
  template Tensor<T> fold_relu_t<T>(const Tensor<T>&);                                             \
  template Tensor<T> coca_scores_fused<T>(const Tensor<T>&, const Tensor<T>&, const Tensor<T>&, T, \
                                          TransientCounter*);                                      \
  template Tensor<T> coca_scores_naive<T>(const Tensor<T>&, const Tensor<T>&, const Tensor<T>&, T, \
                                          TransientCounter*);                                      \
  template Tensor<T> rope_scores_baseline<T>(const Tensor<T>&, const Tensor<T>&, T);               \
  template Tensor<T> causal_mask_softmax<T>(const Tensor<T>&, int);                                \
  template Tensor<T> attention_forward<T>(const Tensor<T>&, const AttentionParams<T>&,             \
                                          const RotaryTable&, AttentionCache<T>*, AttentionVariant);

COCA_INSTANTIATE_ATTENTION(float)
COCA_INSTANTIATE_ATTENTION(double)

#undef COCA_INSTANTIATE_ATTENTION

}  // namespace coca
