#include "coca/rotary.hpp"

#include <cmath>
#include <string>

#include "coca/errors.hpp"

namespace coca {

RotaryTable build_rotary_table(int head_dim, double base, int max_pos) {
  if (head_dim < 2 || head_dim % 2 != 0) {
    throw ConfigError("rotary: head_dim must be even and >= 2, got " + std::to_string(head_dim));
  }
  if (max_pos < 1) {
    throw ConfigError("rotary: max_pos must be >= 1, got " + std::to_string(max_pos));
  }
  if (!(base > 1.0)) {
    throw ConfigError("rotary: base must be > 1");
  }
  RotaryTable t;
  t.head_dim = head_dim;
  t.base = base;
  t.max_pos = max_pos;
  const int half = head_dim / 2;
  t.freqs.resize(static_cast<std::size_t>(half));
  for (int j = 0; j < half; ++j) {
    t.freqs[static_cast<std::size_t>(j)] = std::pow(base, -2.0 * j / head_dim);
  }
  t.cos_cache.reshape({static_cast<std::size_t>(max_pos), static_cast<std::size_t>(half)});
  t.sin_cache.reshape({static_cast<std::size_t>(max_pos), static_cast<std::size_t>(half)});
  for (int p = 0; p < max_pos; ++p) {
    for (int j = 0; j < half; ++j) {
      const double angle = static_cast<double>(p) * t.freqs[static_cast<std::size_t>(j)];
      t.cos_cache(static_cast<std::size_t>(p), static_cast<std::size_t>(j)) = std::cos(angle);
      t.sin_cache(static_cast<std::size_t>(p), static_cast<std::size_t>(j)) = std::sin(angle);
    }
  }
  return t;
}

template <typename T>
void apply_rotation_inplace(Tensor<T>& x, const RotaryTable& table, int offset) {
  if (x.rank() != 3) throw DimError("apply_rotation: expected [seq x heads x head_dim]");
  const std::size_t seq = x.dim(0);
  const std::size_t heads = x.dim(1);
  const std::size_t d = x.dim(2);
  if (static_cast<int>(d) != table.head_dim) {
    throw DimError("apply_rotation: head_dim mismatch with table");
  }
  if (offset < 0 || offset + static_cast<int>(seq) > table.max_pos) {
    throw RangeError("apply_rotation: positions [" + std::to_string(offset) + ", " +
                     std::to_string(offset + static_cast<int>(seq)) +
                     ") exceed table capacity " + std::to_string(table.max_pos));
  }
  const std::size_t half = d / 2;
  for (std::size_t i = 0; i < seq; ++i) {
    const std::size_t p = static_cast<std::size_t>(offset) + i;
    const double* cos_row = table.cos_cache.data() + p * half;
    const double* sin_row = table.sin_cache.data() + p * half;
    for (std::size_t h = 0; h < heads; ++h) {
      T* row = x.data() + (i * heads + h) * d;
      for (std::size_t j = 0; j < half; ++j) {
        const T c = static_cast<T>(cos_row[j]);
        const T s = static_cast<T>(sin_row[j]);
        const T a = row[j];
        const T b = row[j + half];
        row[j] = a * c - b * s;
        row[j + half] = a * s + b * c;
      }
    }
  }
}

template <typename T>
Tensor<T> apply_rotation(const Tensor<T>& x, const RotaryTable& table, int offset) {
  Tensor<T> y = x;
  apply_rotation_inplace(y, table, offset);
  return y;
}

RotaryTable ntk_rescale(const RotaryTable& table, int train_len, int target_len,
                        std::optional<double> scaling_exponent) {
  if (train_len < 1) throw RangeError("ntk_rescale: train_len must be >= 1");
  if (target_len < train_len) {
    throw RangeError("ntk_rescale: target_len " + std::to_string(target_len) +
                     " < train_len " + std::to_string(train_len));
  }
  if (target_len == train_len) return table;
  const double kappa = static_cast<double>(target_len) / static_cast<double>(train_len);
  const double d = static_cast<double>(table.head_dim);
  const double e = scaling_exponent.value_or(d / (d - 2.0));
  const double new_base = table.base * std::pow(kappa, e);
  const int new_max = std::max(table.max_pos, target_len);
  return build_rotary_table(table.head_dim, new_base, new_max);
}

RotaryTable with_capacity(const RotaryTable& table, int max_pos) {
  if (max_pos <= table.max_pos) return table;
  return build_rotary_table(table.head_dim, table.base, max_pos);
}

template void apply_rotation_inplace<float>(Tensor<float>&, const RotaryTable&, int);
template void apply_rotation_inplace<double>(Tensor<double>&, const RotaryTable&, int);
template Tensor<float> apply_rotation<float>(const Tensor<float>&, const RotaryTable&, int);
template Tensor<double> apply_rotation<double>(const Tensor<double>&, const RotaryTable&, int);

}  // namespace coca
