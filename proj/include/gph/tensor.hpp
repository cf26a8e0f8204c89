#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace gph {

using cplx = std::complex<double>;

/// Dense row-major complex tensor. Every numerical object in this project
/// (wave functions, many-body states, density kernels) is one of these.
class Tensor {
 public:
  Tensor() = default;
  explicit Tensor(std::vector<std::size_t> shape);

  const std::vector<std::size_t>& shape() const { return shape_; }
  std::size_t rank() const { return shape_.size(); }
  std::size_t size() const { return data_.size(); }

  cplx* data() { return data_.data(); }
  const cplx* data() const { return data_.data(); }
  cplx& operator[](std::size_t i) { return data_[i]; }
  const cplx& operator[](std::size_t i) const { return data_[i]; }

  /// Row-major strides, in elements.
  const std::vector<std::size_t>& strides() const { return strides_; }

  std::size_t flat_index(std::span<const std::size_t> idx) const;

  bool same_shape(const Tensor& o) const { return shape_ == o.shape_; }

  Tensor& operator+=(const Tensor& o);
  Tensor& operator-=(const Tensor& o);
  Tensor& operator*=(cplx s);
  friend Tensor operator+(Tensor a, const Tensor& b) { a += b; return a; }
  friend Tensor operator-(Tensor a, const Tensor& b) { a -= b; return a; }
  friend Tensor operator*(Tensor a, cplx s) { a *= s; return a; }

  /// Plain l2 norm of the entries, no measure weight.
  double norm() const;
  double max_abs() const;
  bool all_finite() const;

 private:
  std::vector<std::size_t> shape_;
  std::vector<std::size_t> strides_;
  std::vector<cplx> data_;
};

/// <conj a, b> * weight.
cplx inner(const Tensor& a, const Tensor& b, double weight = 1.0);

/// Calls f(flat, idx) for every element of a row-major shape, in order.
template <class F>
void for_each_index(const std::vector<std::size_t>& shape, F&& f) {
  std::vector<std::size_t> idx(shape.size(), 0);
  std::size_t total = 1;
  for (auto s : shape) total *= s;
  for (std::size_t flat = 0; flat < total; ++flat) {
    f(flat, idx);
    for (std::size_t a = shape.size(); a-- > 0;) {
      if (++idx[a] < shape[a]) break;
      idx[a] = 0;
    }
  }
}

}  // namespace gph
