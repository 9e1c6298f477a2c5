#pragma once

#include <functional>
#include <optional>

#include "mueg/fields/field.hpp"
#include "mueg/rdm/rdm.hpp"

namespace mueg {

// Scalar input with its gradient.
class SmoothScalar {
 public:
  using Eval = std::function<void(const Vec3&, double&, Vec3&)>;
  explicit SmoothScalar(Eval e) : eval_(std::move(e)) {}

  // mass * (2 pi sigma^2)^{-d/2} exp(-|x - c|^2 / (2 sigma^2)) on the first d axes.
  static SmoothScalar gaussian(double mass, double sigma, int d = 3, const Vec3& center = Vec3::Zero());
  static SmoothScalar constant(double c);
  static SmoothScalar from_field(const ScalarField& f);

  void evaluate(const Vec3& x, double& v, Vec3& g) const { eval_(x, v, g); }
  double value(const Vec3& x) const;
  Vec3 gradient(const Vec3& x) const;

 private:
  Eval eval_;
};

// Vector input with its Jacobian, J(a, b) = d_b v_a.
class SmoothVector {
 public:
  using Eval = std::function<void(const Vec3&, Vec3&, Mat3&)>;
  explicit SmoothVector(Eval e) : eval_(std::move(e)) {}

  static SmoothVector zero() { return constant(Vec3::Zero()); }
  static SmoothVector constant(const Vec3& k);
  // v(x) = A x + b
  static SmoothVector linear(const Mat3& a, const Vec3& b = Vec3::Zero());
  // v(x) = nu x x / 2
  static SmoothVector rotation(const Vec3& nu);
  static SmoothVector from_field(const VectorField& f);

  void evaluate(const Vec3& x, Vec3& v, Mat3& jac) const { eval_(x, v, jac); }
  Vec3 value(const Vec3& x) const;
  Mat3 jacobian(const Vec3& x) const;

 private:
  Eval eval_;
};

// Velocity split v = grad g + w.
struct CurrentDecomposition {
  std::optional<GaugeFunction> g;
  SmoothVector w = SmoothVector::zero();

  Vec3 velocity(const Vec3& x) const;
  // Throws DomainError unless rho >= 0 and rho |v|^2, rho |Dw| are finite on the grid.
  void check_membership(const SmoothScalar& rho, const GridSpec& grid) const;
};

}  // namespace mueg
