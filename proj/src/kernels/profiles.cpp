#include "mueg/kernels/profiles.hpp"

#include <cmath>
#include <numbers>

#include "mueg/errors.hpp"
#include "mueg/kernels/constants.hpp"

namespace mueg {

ThetaProfile::ThetaProfile(double delta, int d) : delta_(delta), d_(d) {
  if (!(delta > 0.0) || !std::isfinite(delta)) throw DomainError("theta width must be positive");
  if (d < 1 || d > 3) throw DimensionError("theta dimension must be 1..3");
}

double ThetaProfile::value(const Vec3& u) const {
  const double var = variance();
  return std::pow(2.0 * std::numbers::pi * var, -0.5 * d_) * std::exp(-0.5 * u.head(d_).squaredNorm() / var);
}

Vec3 ThetaProfile::gradient(const Vec3& u) const {
  Vec3 g = Vec3::Zero();
  g.head(d_) = -value(u) / variance() * u.head(d_);
  return g;
}

ThetaMoments ThetaProfile::moments(int order) const {
  const double half = 12.0 * std::sqrt(variance());
  const QuadratureRule r = gauss_legendre(order, -half, half);
  const int n1 = order, n2 = d_ >= 2 ? order : 1, n3 = d_ >= 3 ? order : 1;
  ThetaMoments m;
  for (int k = 0; k < n3; ++k)
    for (int j = 0; j < n2; ++j)
      for (int i = 0; i < n1; ++i) {
        Vec3 u(r.nodes[i], d_ >= 2 ? r.nodes[j] : 0.0, d_ >= 3 ? r.nodes[k] : 0.0);
        double w = r.weights[i] * (d_ >= 2 ? r.weights[j] : 1.0) * (d_ >= 3 ? r.weights[k] : 1.0);
        const double th = value(u);
        const Vec3 gr = gradient(u);
        m.mass += w * th;
        m.mean += w * th * u;
        m.gradient_mean += w * gr;
        m.second_moment += w * th * u.squaredNorm();
        if (th > 0.0) m.fisher += w * gr.squaredNorm() / (4.0 * th);
      }
  m.fisher_bound = std::pow(d_, 3) / (4.0 * delta_);
  return m;
}

EtaProfile::EtaProfile(double a, double b) : a_(a), b_(b) {
  if (!(a > 0.0) || !(b > a)) throw DomainError("eta support must satisfy 0 < a < b");
  norm_ = 1.0;
  const QuadratureRule r = rule(400);
  double s = 0.0;
  for (int i = 0; i < r.order(); ++i) s += r.weights[i] * value(r.nodes[i]);
  norm_ = 1.0 / s;
  double inv = 0.0;
  for (int i = 0; i < r.order(); ++i) inv += r.weights[i] * value(r.nodes[i]) / r.nodes[i];
  if (inv > 1.0) throw DomainError("inadmissible eta profile: integral of eta(t)/t exceeds 1");
}

EtaProfile EtaProfile::epsilon_family(double eps) {
  if (!(eps > 0.0)) throw DomainError("epsilon must be positive");
  return EtaProfile(1.0, 1.0 + eps);
}

double EtaProfile::value(double t) const {
  if (t <= a_ || t >= b_) return 0.0;
  const double s = (2.0 * t - a_ - b_) / (b_ - a_);
  return norm_ * std::exp(-1.0 / (1.0 - s * s));
}

double EtaProfile::log_derivative(double t) const {
  const double s = (2.0 * t - a_ - b_) / (b_ - a_);
  const double q = 1.0 - s * s;
  return -2.0 * s / (q * q) * 2.0 / (b_ - a_);
}

double EtaProfile::derivative(double t) const {
  if (t <= a_ || t >= b_) return 0.0;
  return value(t) * log_derivative(t);
}

EtaConstants EtaProfile::constants(int d) const {
  const QuadratureRule r = rule(200);
  EtaConstants c;
  for (int i = 0; i < r.order(); ++i) {
    const double t = r.nodes[i], w = r.weights[i];
    const double e = value(t);
    const double ld = log_derivative(t);
    c.mass += w * e;
    c.inv_moment += w * e / t;
    c.tf_factor += w * e * std::pow(t, 2.0 / d);
    c.weiz_factor += w * t * t * e * ld * ld;
    c.ibp_moment += w * t * e * ld;
  }
  return c;
}

Report kernel_constants_report(int d, const ThetaProfile& theta, const EtaProfile& eta) {
  Report r;
  r.section("constants");
  r.add("dim", d);
  r.add("unit_ball_volume", unit_ball_volume(d));
  r.add("thomas_fermi_constant", thomas_fermi_constant(d));
  r.add("strain_constant", strain_constant(d));
  r.add("spin_states", 1);
  r.section("theta");
  const ThetaMoments m = theta.moments();
  r.add("width", theta.width());
  r.add("mass", m.mass);
  r.add("mean_norm", m.mean.norm());
  r.add("second_moment", m.second_moment);
  r.add("fisher", m.fisher);
  r.add("fisher_bound", m.fisher_bound);
  r.section("eta");
  const EtaConstants c = eta.constants(d);
  r.add("support_lower", eta.lower());
  r.add("support_upper", eta.upper());
  r.add("mass", c.mass);
  r.add("inv_moment", c.inv_moment);
  r.add("tf_factor", c.tf_factor);
  r.add("weiz_factor", c.weiz_factor);
  r.add("ibp_moment", c.ibp_moment);
  return r;
}

}  // namespace mueg
