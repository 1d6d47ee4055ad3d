#pragma once

#include <cstddef>
#include <cstring>

// Internal hot loops. GCC/Clang vector extensions give SIMD width without
// -ffast-math; accumulation order is fixed, so results do not depend on the
// thread count or build host.

namespace coca::detail {

template <typename T>
struct Simd {
  static constexpr std::size_t lanes = 32 / sizeof(T);
  typedef T type __attribute__((vector_size(32)));
};

template <typename T>
inline typename Simd<T>::type load(const T* p) {
  typename Simd<T>::type v;
  std::memcpy(&v, p, sizeof(v));
  return v;
}

template <typename T>
inline void store(T* p, typename Simd<T>::type v) {
  std::memcpy(p, &v, sizeof(v));
}

template <typename T>
inline T dot(const T* a, const T* b, std::size_t n) {
  using V = typename Simd<T>::type;
  constexpr std::size_t W = Simd<T>::lanes;
  V acc0{}, acc1{};
  std::size_t k = 0;
  for (; k + 2 * W <= n; k += 2 * W) {
    acc0 += load(a + k) * load(b + k);
    acc1 += load(a + k + W) * load(b + k + W);
  }
  for (; k + W <= n; k += W) acc0 += load(a + k) * load(b + k);
  const V acc = acc0 + acc1;
  T s = T(0);
  for (std::size_t l = 0; l < W; ++l) s += acc[l];
  for (; k < n; ++k) s += a[k] * b[k];
  return s;
}

// y += alpha * x
template <typename T>
inline void axpy(T alpha, const T* x, T* y, std::size_t n) {
  using V = typename Simd<T>::type;
  constexpr std::size_t W = Simd<T>::lanes;
  V va{};
  va += alpha;  // broadcast
  std::size_t k = 0;
  for (; k + W <= n; k += W) store(y + k, load(y + k) + va * load(x + k));
  for (; k < n; ++k) y[k] += alpha * x[k];
}

// y[M x N] = x[M x K] * w[K x N]; accumulates when accumulate is set.
template <typename T>
inline void matmul(const T* x, const T* w, T* y, std::size_t M, std::size_t K, std::size_t N,
                   bool accumulate = false) {
  for (std::size_t m = 0; m < M; ++m) {
    T* y_row = y + m * N;
    if (!accumulate) {
      for (std::size_t j = 0; j < N; ++j) y_row[j] = T(0);
    }
    const T* x_row = x + m * K;
    for (std::size_t k = 0; k < K; ++k) {
      if (x_row[k] != T(0)) axpy(x_row[k], w + k * N, y_row, N);
    }
  }
}

// dw[K x N] += x^T * dy, with x [M x K], dy [M x N].
template <typename T>
inline void matmul_at_b_accum(const T* x, const T* dy, T* dw, std::size_t M, std::size_t K,
                              std::size_t N) {
  for (std::size_t m = 0; m < M; ++m) {
    const T* x_row = x + m * K;
    const T* dy_row = dy + m * N;
    for (std::size_t k = 0; k < K; ++k) {
      if (x_row[k] != T(0)) axpy(x_row[k], dy_row, dw + k * N, N);
    }
  }
}

// dx[M x K] += dy[M x N] * w^T, with w stored [K x N].
template <typename T>
inline void matmul_bt_accum(const T* dy, const T* w, T* dx, std::size_t M, std::size_t N,
                            std::size_t K) {
  for (std::size_t m = 0; m < M; ++m) {
    const T* dy_row = dy + m * N;
    T* dx_row = dx + m * K;
    for (std::size_t k = 0; k < K; ++k) dx_row[k] += dot(dy_row, w + k * N, N);
  }
}

}  // namespace coca::detail
