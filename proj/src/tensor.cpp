#include "gph/tensor.hpp"

#include <cmath>
#include <stdexcept>

namespace gph {

Tensor::Tensor(std::vector<std::size_t> shape) : shape_(std::move(shape)) {
  if (shape_.empty()) throw std::invalid_argument("Tensor: empty shape");
  std::size_t total = 1;
  for (auto s : shape_) {
    if (s == 0) throw std::invalid_argument("Tensor: zero axis length");
    total *= s;
  }
  strides_.assign(shape_.size(), 1);
  for (std::size_t a = shape_.size() - 1; a-- > 0;)
    strides_[a] = strides_[a + 1] * shape_[a + 1];
  data_.assign(total, cplx{0.0, 0.0});
}

std::size_t Tensor::flat_index(std::span<const std::size_t> idx) const {
  std::size_t flat = 0;
  for (std::size_t a = 0; a < strides_.size(); ++a) flat += idx[a] * strides_[a];
  return flat;
}

Tensor& Tensor::operator+=(const Tensor& o) {
  if (!same_shape(o)) throw std::invalid_argument("Tensor: shape mismatch in +=");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += o.data_[i];
  return *this;
}

Tensor& Tensor::operator-=(const Tensor& o) {
  if (!same_shape(o)) throw std::invalid_argument("Tensor: shape mismatch in -=");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= o.data_[i];
  return *this;
}

Tensor& Tensor::operator*=(cplx s) {
  for (auto& v : data_) v *= s;
  return *this;
}

double Tensor::norm() const {
  double acc = 0.0;
  for (const auto& v : data_) acc += std::norm(v);
  return std::sqrt(acc);
}

double Tensor::max_abs() const {
  double m = 0.0;
  for (const auto& v : data_) m = std::max(m, std::abs(v));
  return m;
}

bool Tensor::all_finite() const {
  for (const auto& v : data_)
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return false;
  return true;
}

cplx inner(const Tensor& a, const Tensor& b, double weight) {
  if (!a.same_shape(b)) throw std::invalid_argument("inner: shape mismatch");
  cplx acc{0.0, 0.0};
  for (std::size_t i = 0; i < a.size(); ++i) acc += std::conj(a[i]) * b[i];
  return acc * weight;
}

}  // namespace gph
