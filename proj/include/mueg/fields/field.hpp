#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <vector>

#include "mueg/errors.hpp"
#include "mueg/fields/grid.hpp"

namespace mueg {

enum class Rank { scalar, vector, tensor };

namespace detail {
inline bool is_finite(double v) { return std::isfinite(v); }
inline bool is_finite(const cplx& v) { return std::isfinite(v.real()) && std::isfinite(v.imag()); }
}  // namespace detail

// Dense sampled field; components of one point are contiguous, points x-fastest.
// Tensor component (a, b) is stored at a * dim + b.
template <class T, Rank R>
class Field {
 public:
  using value_type = T;
  static constexpr Rank rank = R;

  Field() = default;
  explicit Field(const GridSpec& g, T fill = T{}) : grid_(g), values_(g.size() * components_for(g.dim), fill) {}

  static int components_for(int d) { return R == Rank::scalar ? 1 : (R == Rank::vector ? d : d * d); }

  const GridSpec& grid() const { return grid_; }
  int dim() const { return grid_.dim; }
  int components() const { return components_for(grid_.dim); }
  std::size_t size() const { return grid_.size(); }

  T& operator()(std::size_t p, int c = 0) { return values_[p * components() + c]; }
  const T& operator()(std::size_t p, int c = 0) const { return values_[p * components() + c]; }
  T& at(std::size_t p, int a, int b) { return values_[p * components() + a * grid_.dim + b]; }
  const T& at(std::size_t p, int a, int b) const { return values_[p * components() + a * grid_.dim + b]; }

  std::vector<T>& values() { return values_; }
  const std::vector<T>& values() const { return values_; }

  bool finite() const {
    for (const auto& v : values_)
      if (!detail::is_finite(v)) return false;
    return true;
  }

  // Vector access padded to three components.
  Eigen::Matrix<T, 3, 1> vec(std::size_t p) const {
    static_assert(R == Rank::vector);
    Eigen::Matrix<T, 3, 1> v = Eigen::Matrix<T, 3, 1>::Zero();
    for (int a = 0; a < grid_.dim; ++a) v(a) = (*this)(p, a);
    return v;
  }
  void set_vec(std::size_t p, const Eigen::Matrix<T, 3, 1>& v) {
    static_assert(R == Rank::vector);
    for (int a = 0; a < grid_.dim; ++a) (*this)(p, a) = v(a);
  }
  Eigen::Matrix<T, 3, 3> mat(std::size_t p) const {
    static_assert(R == Rank::tensor);
    Eigen::Matrix<T, 3, 3> m = Eigen::Matrix<T, 3, 3>::Zero();
    for (int a = 0; a < grid_.dim; ++a)
      for (int b = 0; b < grid_.dim; ++b) m(a, b) = at(p, a, b);
    return m;
  }
  void set_mat(std::size_t p, const Eigen::Matrix<T, 3, 3>& m) {
    static_assert(R == Rank::tensor);
    for (int a = 0; a < grid_.dim; ++a)
      for (int b = 0; b < grid_.dim; ++b) at(p, a, b) = m(a, b);
  }

 private:
  GridSpec grid_;
  std::vector<T> values_;
};

using ScalarField = Field<double, Rank::scalar>;
using VectorField = Field<double, Rank::vector>;
using TensorField = Field<double, Rank::tensor>;
using ComplexScalarField = Field<cplx, Rank::scalar>;
using ComplexVectorField = Field<cplx, Rank::vector>;
using ComplexTensorField = Field<cplx, Rank::tensor>;

template <class F>
ScalarField sample_scalar(const GridSpec& g, F&& f) {
  ScalarField out(g);
  for (std::size_t p = 0; p < g.size(); ++p) out(p) = f(g.point(p));
  return out;
}

template <class F>
VectorField sample_vector(const GridSpec& g, F&& f) {
  VectorField out(g);
  for (std::size_t p = 0; p < g.size(); ++p) out.set_vec(p, f(g.point(p)));
  return out;
}

template <class F>
ComplexScalarField sample_complex(const GridSpec& g, F&& f) {
  ComplexScalarField out(g);
  for (std::size_t p = 0; p < g.size(); ++p) out(p) = f(g.point(p));
  return out;
}

}  // namespace mueg
