#pragma once

#include <array>
#include <cassert>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace coca {

// Dense row-major tensor of rank <= 4. Deliberately minimal: shape + flat
// storage + checked indexing in debug builds. All kernels work on raw rows.
template <typename T>
class Tensor {
 public:
  Tensor() = default;
  Tensor(std::initializer_list<std::size_t> dims) { reshape(dims); }

  void reshape(std::initializer_list<std::size_t> dims) {
    reshape(std::span<const std::size_t>(dims.begin(), dims.size()));
  }

  void reshape(std::span<const std::size_t> dims) {
    assert(dims.size() >= 1 && dims.size() <= 4);
    rank_ = static_cast<int>(dims.size());
    dims_ = {1, 1, 1, 1};
    for (int i = 0; i < rank_; ++i) dims_[static_cast<std::size_t>(i)] = dims[static_cast<std::size_t>(i)];
    strides_[3] = 1;
    strides_[2] = dims_[3];
    strides_[1] = dims_[2] * dims_[3];
    strides_[0] = dims_[1] * dims_[2] * dims_[3];
    data_.assign(dims_[0] * strides_[0], T(0));
  }

  int rank() const { return rank_; }
  std::size_t dim(int i) const {
    assert(i >= 0 && i < rank_);
    // Leading axes are padded with 1s, so dim(i) of a rank-r tensor lives at 4-r+i.
    return dims_[static_cast<std::size_t>(4 - rank_ + i)];
  }
  std::size_t size() const { return data_.size(); }
  bool empty() const { return data_.empty(); }

  T* data() { return data_.data(); }
  const T* data() const { return data_.data(); }
  std::vector<T>& vec() { return data_; }
  const std::vector<T>& vec() const { return data_; }

  void fill(T v) { data_.assign(data_.size(), v); }

  T& operator()(std::size_t i) {
    assert(rank_ == 1 && i < dims_[3]);
    return data_[i];
  }
  const T& operator()(std::size_t i) const {
    assert(rank_ == 1 && i < dims_[3]);
    return data_[i];
  }
  T& operator()(std::size_t i, std::size_t j) {
    assert(rank_ == 2 && i < dims_[2] && j < dims_[3]);
    return data_[i * strides_[2] + j];
  }
  const T& operator()(std::size_t i, std::size_t j) const {
    assert(rank_ == 2 && i < dims_[2] && j < dims_[3]);
    return data_[i * strides_[2] + j];
  }
  T& operator()(std::size_t i, std::size_t j, std::size_t k) {
    assert(rank_ == 3 && i < dims_[1] && j < dims_[2] && k < dims_[3]);
    return data_[i * strides_[1] + j * strides_[2] + k];
  }
  const T& operator()(std::size_t i, std::size_t j, std::size_t k) const {
    assert(rank_ == 3 && i < dims_[1] && j < dims_[2] && k < dims_[3]);
    return data_[i * strides_[1] + j * strides_[2] + k];
  }
  T& operator()(std::size_t i, std::size_t j, std::size_t k, std::size_t l) {
    assert(rank_ == 4);
    return data_[i * strides_[0] + j * strides_[1] + k * strides_[2] + l];
  }
  const T& operator()(std::size_t i, std::size_t j, std::size_t k, std::size_t l) const {
    assert(rank_ == 4);
    return data_[i * strides_[0] + j * strides_[1] + k * strides_[2] + l];
  }

  // Contiguous row of the last axis; index spans all leading axes flattened.
  std::span<T> last_axis_row(std::size_t flat_row) {
    const std::size_t w = dims_[3];
    assert((flat_row + 1) * w <= data_.size());
    return std::span<T>(data_.data() + flat_row * w, w);
  }
  std::span<const T> last_axis_row(std::size_t flat_row) const {
    const std::size_t w = dims_[3];
    assert((flat_row + 1) * w <= data_.size());
    return std::span<const T>(data_.data() + flat_row * w, w);
  }

  bool same_shape(const Tensor& o) const { return rank_ == o.rank_ && dims_ == o.dims_; }

 private:
  std::vector<T> data_;
  std::array<std::size_t, 4> dims_{1, 1, 1, 1};
  std::array<std::size_t, 4> strides_{1, 1, 1, 1};
  int rank_ = 0;
};

}  // namespace coca
