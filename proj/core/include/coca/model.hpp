#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "coca/attention.hpp"
#include "coca/rotary.hpp"
#include "coca/tensor.hpp"

namespace coca {

struct ModelConfig {
  int n_layers = 2;
  int d_model = 64;
  int n_heads = 2;
  int max_seq = 64;
  int vocab_size = 258;
  double rope_base = 10000.0;
  AttentionVariant variant = AttentionVariant::kCoca;
  double mlp_ratio = 4.0;
  std::uint64_t seed = 0;

  int head_dim() const { return n_heads == 0 ? 0 : d_model / n_heads; }
  int mlp_hidden() const { return static_cast<int>(mlp_ratio * d_model); }
  void validate() const;  // throws ConfigError
};

std::string variant_name(AttentionVariant v);
AttentionVariant variant_from_name(std::string_view name);

// The 350M-parameter configuration recorded for reference; never exercised
// by the test suites.
ModelConfig paper_350m_preset();

template <typename T>
struct LayerParams {
  Tensor<T> ln1_g, ln1_b;
  AttentionParams<T> attn;
  Tensor<T> ln2_g, ln2_b;
  Tensor<T> fc1_w, fc1_b;  // [d_model x hidden], [hidden]
  Tensor<T> fc2_w, fc2_b;  // [hidden x d_model], [d_model]
};

template <typename T>
struct ModelParams {
  Tensor<T> embed;  // [vocab x d_model]
  std::vector<LayerParams<T>> layers;
  Tensor<T> final_ln_g, final_ln_b;
  Tensor<T> lm_head;  // [d_model x vocab]
};

// Parameter registry in manifest order (checkpoint layout and optimizer
// state follow this order exactly).
template <typename T>
std::vector<std::pair<std::string, Tensor<T>*>> named_params(ModelParams<T>& p);
template <typename T>
std::vector<std::pair<std::string, const Tensor<T>*>> named_params(const ModelParams<T>& p);

template <typename T>
ModelParams<T> zeros_like(const ModelParams<T>& p);

template <typename T>
class Model {
 public:
  explicit Model(const ModelConfig& config);

  const ModelConfig& config() const { return config_; }
  ModelParams<T>& params() { return params_; }
  const ModelParams<T>& params() const { return params_; }
  const RotaryTable& rotary() const { return rotary_; }
  void set_rotary(RotaryTable table);
  std::size_t n_params() const;

  // Logits for every input position, [seq x vocab].
  Tensor<T> forward(std::span<const int> tokens) const;
  // Incremental variant; caches must hold one entry per layer (or be empty,
  // in which case they are initialized).
  Tensor<T> forward(std::span<const int> tokens, std::vector<AttentionCache<T>>& caches) const;

  // Accumulates scale * d(mean CE)/d(params) into grads and returns the mean
  // cross-entropy (nats) of tokens -> targets. targets[i] is the label for
  // position i; pass the shift-by-one slice.
  T forward_backward(std::span<const int> tokens, std::span<const int> targets,
                     ModelParams<T>& grads, T scale = T(1)) const;

 private:
  ModelConfig config_;
  ModelParams<T> params_;
  RotaryTable rotary_;
};

// Mean next-token cross-entropy in nats. logits is [seq x vocab]; targets
// must have one label per logits row.
template <typename T>
T next_token_loss(const Tensor<T>& logits, std::span<const int> targets);

struct GradCheckReport {
  double max_rel_err = 0.0;
  std::string worst_parameter;
  int n_checked = 0;
};

// Central finite differences vs analytic gradients on a sampled coordinate
// subset that always covers w_q and w_t in every layer. Model must be small
// (<= 10k parameters); epsilon must be positive.
GradCheckReport gradient_check(Model<double>& model, std::span<const int> tokens,
                               std::span<const int> targets, double epsilon,
                               int min_coords = 200, std::uint64_t seed = 0);

}  // namespace coca
