#pragma once

#include <string>

#include "mueg/fields/grid.hpp"
#include "mueg/fields/quadrature.hpp"
#include "mueg/report.hpp"

namespace mueg {

struct ThetaMoments {
  double mass = 0.0;
  Vec3 mean = Vec3::Zero();
  Vec3 gradient_mean = Vec3::Zero();
  double second_moment = 0.0;
  // Integral of |grad theta|^2 / (4 theta).
  double fisher = 0.0;
  // The bound d^3 / (4 delta) the kinetic estimate is allowed to use.
  double fisher_bound = 0.0;
};

// Centred Gaussian momentum profile with per-axis variance delta/d, so the second moment is delta.
class ThetaProfile {
 public:
  ThetaProfile(double delta, int d);

  double width() const { return delta_; }
  int dim() const { return d_; }
  double variance() const { return delta_ / d_; }
  double value(const Vec3& u) const;
  Vec3 gradient(const Vec3& u) const;
  // Moments by tensor Gauss-Legendre over a box of half-width 12 standard deviations.
  ThetaMoments moments(int order = 48) const;

 private:
  double delta_;
  int d_;
};

struct EtaConstants {
  double mass = 0.0;
  double inv_moment = 0.0;
  double tf_factor = 0.0;
  double weiz_factor = 0.0;
  // Integral of t eta'(t); equals -1 for any normalized compactly supported profile.
  double ibp_moment = 0.0;
};

// Smooth bump c exp(-1/(1-s^2)) on [a, b], s = (2t - a - b)/(b - a), normalized to unit mass.
class EtaProfile {
 public:
  EtaProfile(double a = 1.0, double b = 2.0);
  // Profile on [1, 1 + eps].
  static EtaProfile epsilon_family(double eps);

  double lower() const { return a_; }
  double upper() const { return b_; }
  double value(double t) const;
  double derivative(double t) const;
  // eta'/eta on the open support.
  double log_derivative(double t) const;
  EtaConstants constants(int d) const;
  // Gauss-Legendre rule on the support.
  QuadratureRule rule(int order) const { return gauss_legendre(order, a_, b_); }

 private:
  double a_, b_;
  double norm_ = 1.0;
};

Report kernel_constants_report(int d, const ThetaProfile& theta, const EtaProfile& eta);

}  // namespace mueg
