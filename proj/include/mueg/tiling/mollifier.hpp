#pragma once

#include "mueg/fields/field.hpp"
#include "mueg/tiling/geometry.hpp"

namespace mueg {

enum class SmearCase { one, zero, transition };

// Radial bump c exp(-1/(1 - |x|^2)) on the unit ball with unit mass, rescaled to
// eta_delta(x) = (10/delta)^3 eta(10 x / delta), supported in the ball of radius delta/10.
class Mollifier {
 public:
  explicit Mollifier(double delta);

  double delta() const { return delta_; }
  double radius() const { return 0.1 * delta_; }
  double value(const Vec3& x) const;
  // Mass and first moment by spherical Gauss-Legendre quadrature.
  double mass(int order = 32) const;
  Vec3 first_moment(int order = 32) const;
  // Integral of x x^T eta_delta.
  Mat3 second_moment(int order = 32) const;

  SmearCase classify(const ConvexPolyhedron& omega, const Vec3& x) const;
  // (1_omega * eta_delta)(x). Interior and exterior cases return exactly 1 and 0; otherwise the
  // convolution is reduced by the divergence theorem to one-dimensional integrals along face edges.
  double smeared_indicator(const ConvexPolyhedron& omega, const Vec3& x) const;
  ScalarField smeared_indicator(const ConvexPolyhedron& omega, const GridSpec& g) const;
  // Gradient of the smeared indicator, as the flux of eta_delta through the faces.
  Vec3 smeared_indicator_gradient(const ConvexPolyhedron& omega, const Vec3& x) const;

 private:
  double delta_;
};

// Moments of 1_omega * eta_delta, by Fubini: body moments by collapsed Gauss-Legendre on a fan of
// tetrahedra, mollifier moments by spherical quadrature.
struct SmearedMoments {
  double mass = 0.0;
  Vec3 first = Vec3::Zero();
  Mat3 second = Mat3::Zero();
};
SmearedMoments smeared_moments(const ConvexPolyhedron& omega, const Mollifier& m, int order = 8);

// Unit-ball profile and its radial integrals, exposed for tests.
namespace bump {
double density(double r);
// F(r) = int_0^r density(t) t^2 dt.
double radial_mass(double r);
// K(r) = int_0^r F(s) / s^2 ds.
double radial_potential(double r);
}  // namespace bump

}  // namespace mueg
