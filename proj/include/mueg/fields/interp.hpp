#pragma once

#include "mueg/fields/field.hpp"

namespace mueg {

// Local tensor-product Lagrange interpolation on the five nodes nearest to x per axis.
// Inside a half cell around a node the interpolant is one polynomial, and its derivative at
// the node equals the fourth-order central difference. Points outside the grid box give 0.
class LocalInterpolant {
 public:
  explicit LocalInterpolant(ScalarField f);
  double value(const Vec3& x) const;
  Vec3 gradient(const Vec3& x) const;
  void evaluate(const Vec3& x, double& value, Vec3& gradient) const;
  const ScalarField& field() const { return f_; }

 private:
  ScalarField f_;
};

}  // namespace mueg
