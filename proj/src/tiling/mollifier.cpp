#include "mueg/tiling/mollifier.hpp"

#include <cmath>
#include <functional>
#include <numbers>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "mueg/errors.hpp"
#include "mueg/fields/parallel.hpp"
#include "mueg/fields/quadrature.hpp"
#include "mueg/report.hpp"

namespace mueg {

namespace {

constexpr int kPanels = 64;
constexpr int kDegree = 20;

double raw_bump(double r) { return r < 1.0 ? std::exp(-1.0 / (1.0 - r * r)) : 0.0; }

// Piecewise Chebyshev interpolant on [0, 1] with equal panels.
class ChebyshevTable {
 public:
  explicit ChebyshevTable(const std::function<double(double)>& f) : coef_(kPanels * kDegree) {
    std::vector<double> fx(kDegree);
    for (int p = 0; p < kPanels; ++p) {
      const double a = static_cast<double>(p) / kPanels, b = static_cast<double>(p + 1) / kPanels;
      for (int k = 0; k < kDegree; ++k) {
        const double t = std::cos(std::numbers::pi * (k + 0.5) / kDegree);
        fx[k] = f(0.5 * (a + b) + 0.5 * (b - a) * t);
      }
      for (int j = 0; j < kDegree; ++j) {
        double s = 0.0;
        for (int k = 0; k < kDegree; ++k) s += fx[k] * std::cos(std::numbers::pi * j * (k + 0.5) / kDegree);
        coef_[p * kDegree + j] = (j == 0 ? 1.0 : 2.0) * s / kDegree;
      }
    }
  }

  double operator()(double x) const {
    const int p = std::min(kPanels - 1, std::max(0, static_cast<int>(x * kPanels)));
    const double a = static_cast<double>(p) / kPanels;
    const double t = 2.0 * (x - a) * kPanels - 1.0;
    double b1 = 0.0, b2 = 0.0;
    const double* c = &coef_[p * kDegree];
    for (int j = kDegree - 1; j >= 1; --j) {
      const double b0 = 2.0 * t * b1 - b2 + c[j];
      b2 = b1;
      b1 = b0;
    }
    return t * b1 - b2 + c[0];
  }

 private:
  std::vector<double> coef_;
};

// Running integral of f on [0, 1] evaluated by Gauss-Legendre per panel.
class CumulativeIntegral {
 public:
  explicit CumulativeIntegral(std::function<double(double)> f) : f_(std::move(f)), rule_(gauss_legendre(24)) {
    starts_.assign(kPanels + 1, 0.0);
    for (int p = 0; p < kPanels; ++p)
      starts_[p + 1] = starts_[p] + piece(static_cast<double>(p) / kPanels, static_cast<double>(p + 1) / kPanels);
  }
  double operator()(double x) const {
    const int p = std::min(kPanels - 1, std::max(0, static_cast<int>(x * kPanels)));
    return starts_[p] + piece(static_cast<double>(p) / kPanels, x);
  }
  double total() const { return starts_[kPanels]; }

 private:
  double piece(double a, double b) const {
    double s = 0.0;
    for (int i = 0; i < rule_.order(); ++i) {
      const double t = 0.5 * (a + b) + 0.5 * (b - a) * rule_.nodes[i];
      s += rule_.weights[i] * f_(t);
    }
    return 0.5 * (b - a) * s;
  }
  std::function<double(double)> f_;
  QuadratureRule rule_;
  std::vector<double> starts_;
};

struct BumpTables {
  double norm;
  double mass_total;
  double potential_at_one;
  double flux_total;
  ChebyshevTable mass;
  ChebyshevTable potential;
  ChebyshevTable flux;

  static const BumpTables& get() {
    static const BumpTables t = make();
    return t;
  }

 private:
  static BumpTables make() {
    const CumulativeIntegral raw([](double r) { return raw_bump(r) * r * r; });
    const double norm = 1.0 / (4.0 * std::numbers::pi * raw.total());
    const CumulativeIntegral fcum([&](double r) { return norm * raw_bump(r) * r * r; });
    ChebyshevTable mass([&](double r) { return fcum(r); });
    const CumulativeIntegral kcum([&](double s) { return mass(s) / (s * s); });
    ChebyshevTable potential([&](double r) { return kcum(r); });
    const CumulativeIntegral gcum([&](double r) { return norm * raw_bump(r) * r; });
    ChebyshevTable flux([&](double r) { return gcum(r); });
    return BumpTables{norm,           fcum.total(),         kcum.total(), gcum.total(),
                      std::move(mass), std::move(potential), std::move(flux)};
  }
};

double potential(double r) {
  const BumpTables& t = BumpTables::get();
  if (r >= 1.0) return t.potential_at_one + t.mass_total * (1.0 - 1.0 / r);
  return t.potential(r);
}

// Integral of K(R(psi)) - K(|h|) over [lo, hi] with R = sqrt(h^2 + d^2 / cos^2 psi), unit mollifier.
double edge_integral(double h, double d, double lo, double hi) {
  const BumpTables& t = BumpTables::get();
  const double ah = std::abs(h), kh = potential(ah);
  const double a = std::sqrt(h * h + d * d);
  auto far_primitive = [&](double psi) {
    const double u = std::sin(psi);
    return ah > 1e-8 ? std::asin(std::clamp(ah * u / a, -1.0, 1.0)) / ah : u / a;
  };
  auto far = [&](double x0, double x1) {
    return (t.potential_at_one + t.mass_total - kh) * (x1 - x0) - t.mass_total * (far_primitive(x1) - far_primitive(x0));
  };
  // In the edge coordinate t = d tan(psi) the Jacobian d / (d^2 + t^2) is cancelled by K(R) - K(|h|) ~ d^2 + t^2,
  // so the integrand stays smooth when d is small.
  auto near = [&](double x0, double x1) {
    auto f = [&](double s) {
      const double r2 = h * h + d * d + s * s;
      return (potential(std::sqrt(r2)) - kh) * d / (d * d + s * s);
    };
    double err = 0.0;
    const double v = boost::math::quadrature::gauss_kronrod<double, 21>::integrate(f, d * std::tan(x0), d * std::tan(x1),
                                                                                   15, 1e-11, &err);
    if (!(err <= 1e-11)) throw NumericalError("smeared indicator quadrature did not converge");
    return v;
  };
  if (ah >= 1.0 || d * d >= 1.0 - h * h) return far(lo, hi);
  const double star = std::acos(d / std::sqrt(1.0 - h * h));
  const double cuts[4] = {lo, std::clamp(-star, lo, hi), std::clamp(star, lo, hi), hi};
  double s = 0.0;
  for (int i = 0; i < 3; ++i) {
    if (cuts[i + 1] <= cuts[i]) continue;
    const double mid = 0.5 * (cuts[i] + cuts[i + 1]);
    s += std::abs(mid) < star ? near(cuts[i], cuts[i + 1]) : far(cuts[i], cuts[i + 1]);
  }
  return s;
}

double flux_primitive(double r) {
  const BumpTables& t = BumpTables::get();
  return r >= 1.0 ? t.flux_total : t.flux(r);
}

// Integral of G(R(psi)) - G(|h|) over [lo, hi] with G(r) = int_0^r density(s) s ds, unit mollifier.
double edge_flux(double h, double d, double lo, double hi) {
  const BumpTables& t = BumpTables::get();
  const double ah = std::abs(h), gh = flux_primitive(ah);
  if (ah >= 1.0) return 0.0;
  auto near = [&](double x0, double x1) {
    auto f = [&](double s) {
      const double r2 = h * h + d * d + s * s;
      return (flux_primitive(std::sqrt(r2)) - gh) * d / (d * d + s * s);
    };
    using gk = boost::math::quadrature::gauss_kronrod<double, 21>;
    const double t0 = d * std::tan(x0), t1 = d * std::tan(x1);
    // Flux integrals can be tiny; aim at an absolute error of 1e-13.
    const double coarse = std::abs(gk::integrate(f, t0, t1, 0));
    double err = 0.0;
    const double v = gk::integrate(f, t0, t1, 15, std::clamp(1e-13 / coarse, 1e-11, 1e-3), &err);
    if (!(err <= 1e-11)) throw NumericalError("smeared indicator gradient quadrature did not converge");
    return v;
  };
  if (d * d >= 1.0 - h * h) return (t.flux_total - gh) * (hi - lo);
  const double star = std::acos(d / std::sqrt(1.0 - h * h));
  const double cuts[4] = {lo, std::clamp(-star, lo, hi), std::clamp(star, lo, hi), hi};
  double s = 0.0;
  for (int i = 0; i < 3; ++i) {
    if (cuts[i + 1] <= cuts[i]) continue;
    const double mid = 0.5 * (cuts[i] + cuts[i + 1]);
    s += std::abs(mid) < star ? near(cuts[i], cuts[i + 1]) : (t.flux_total - gh) * (cuts[i + 1] - cuts[i]);
  }
  return s;
}

}  // namespace

namespace bump {
double density(double r) { return BumpTables::get().norm * raw_bump(r); }
double radial_mass(double r) { return r >= 1.0 ? BumpTables::get().mass_total : BumpTables::get().mass(r); }
double radial_potential(double r) { return potential(r); }
}  // namespace bump

Mollifier::Mollifier(double delta) : delta_(delta) {
  if (!(delta > 0.0) || !std::isfinite(delta)) throw DomainError("mollifier width must be positive");
}

double Mollifier::value(const Vec3& x) const {
  const double e = radius();
  return bump::density(x.norm() / e) / (e * e * e);
}

namespace {

// Gauss-Legendre on 8 equal panels of [0, radius].
QuadratureRule radial_rule(double radius, int order) {
  QuadratureRule out;
  constexpr int panels = 8;
  for (int p = 0; p < panels; ++p) {
    const QuadratureRule g = gauss_legendre(order, radius * p / panels, radius * (p + 1) / panels);
    out.nodes.insert(out.nodes.end(), g.nodes.begin(), g.nodes.end());
    out.weights.insert(out.weights.end(), g.weights.begin(), g.weights.end());
  }
  return out;
}

// Spherical product rule on the support ball: Gauss-Legendre in r and cos(theta), midpoints in phi.
template <class F>
void for_each_ball_node(double radius, int order, F&& f) {
  const QuadratureRule r = radial_rule(radius, order);
  const QuadratureRule mu = gauss_legendre(order, -1.0, 1.0);
  const double dphi = 2.0 * std::numbers::pi / (2 * order);
  for (int i = 0; i < r.order(); ++i)
    for (int j = 0; j < order; ++j)
      for (int k = 0; k < 2 * order; ++k) {
        const double phi = dphi * (k + 0.5);
        const double st = std::sqrt(1.0 - mu.nodes[j] * mu.nodes[j]);
        const Vec3 x = r.nodes[i] * Vec3(st * std::cos(phi), st * std::sin(phi), mu.nodes[j]);
        f(x, r.weights[i] * mu.weights[j] * dphi * r.nodes[i] * r.nodes[i]);
      }
}

}  // namespace

double Mollifier::mass(int order) const {
  const QuadratureRule r = radial_rule(1.0, order);
  double s = 0.0;
  for (int i = 0; i < r.order(); ++i) s += r.weights[i] * bump::density(r.nodes[i]) * r.nodes[i] * r.nodes[i];
  return 4.0 * std::numbers::pi * s;
}

Vec3 Mollifier::first_moment(int order) const {
  Vec3 s = Vec3::Zero();
  for_each_ball_node(radius(), order, [&](const Vec3& x, double w) { s += w * value(x) * x; });
  return s;
}

Mat3 Mollifier::second_moment(int order) const {
  Mat3 s = Mat3::Zero();
  for_each_ball_node(radius(), order, [&](const Vec3& x, double w) { s += w * value(x) * x * x.transpose(); });
  return s;
}

SmearedMoments smeared_moments(const ConvexPolyhedron& omega, const Mollifier& m, int order) {
  double vol = 0.0;
  Vec3 first = Vec3::Zero();
  Mat3 second = Mat3::Zero();
  const auto& v = omega.vertices();
  for (const auto& face : omega.faces())
    for (std::size_t i = 1; i + 1 < face.size(); ++i) {
      const CubatureRule r = tetrahedron_rule({v[0], v[face[0]], v[face[i]], v[face[i + 1]]}, order);
      for (std::size_t k = 0; k < r.weights.size(); ++k) {
        vol += r.weights[k];
        first += r.weights[k] * r.nodes[k];
        second += r.weights[k] * r.nodes[k] * r.nodes[k].transpose();
      }
    }
  const double m0 = m.mass(16);
  const Vec3 m1 = m.first_moment(16);
  const Mat3 m2 = m.second_moment(16);
  SmearedMoments out;
  out.mass = vol * m0;
  out.first = first * m0 + vol * m1;
  out.second = second * m0 + first * m1.transpose() + m1 * first.transpose() + vol * m2;
  return out;
}

SmearCase Mollifier::classify(const ConvexPolyhedron& omega, const Vec3& x) const {
  if (omega.inner_distance(x) >= radius()) return SmearCase::one;
  if (omega.distance(x) >= radius()) return SmearCase::zero;
  return SmearCase::transition;
}

double Mollifier::smeared_indicator(const ConvexPolyhedron& omega, const Vec3& x) const {
  switch (classify(omega, x)) {
    case SmearCase::one:
      return 1.0;
    case SmearCase::zero:
      return 0.0;
    case SmearCase::transition:
      break;
  }
  // Work in units of the support radius with x at the origin.
  const double e = radius();
  const auto& verts = omega.vertices();
  double total = 0.0;
  for (std::size_t f = 0; f < omega.faces().size(); ++f) {
    const Plane& pl = omega.planes()[f];
    const double h = pl.depth(x) / e;
    if (std::abs(h) < 1e-300) continue;
    const Vec3 foot = h * pl.n;
    const auto& face = omega.faces()[f];
    double s = 0.0;
    for (std::size_t i = 0; i < face.size(); ++i) {
      const Vec3 a = (verts[face[i]] - x) / e - foot;
      const Vec3 b = (verts[face[(i + 1) % face.size()]] - x) / e - foot;
      const Vec3 u = (b - a).normalized();
      const double ta = a.dot(u), tb = b.dot(u);
      const double d = (a - ta * u).norm();
      if (d < 1e-14) continue;
      const double sign = pl.n.dot(a.cross(b)) >= 0.0 ? 1.0 : -1.0;
      s += sign * edge_integral(h, d, std::atan2(ta, d), std::atan2(tb, d));
    }
    total += h * s;
  }
  return total;
}

Vec3 Mollifier::smeared_indicator_gradient(const ConvexPolyhedron& omega, const Vec3& x) const {
  if (classify(omega, x) != SmearCase::transition) return Vec3::Zero();
  // grad (1_omega * eta)(x) = -sum_f n_f int_f eta(y - x) dS(y), each face integral split over its edges.
  const double e = radius();
  const auto& verts = omega.vertices();
  Vec3 total = Vec3::Zero();
  for (std::size_t f = 0; f < omega.faces().size(); ++f) {
    const Plane& pl = omega.planes()[f];
    const double h = pl.depth(x) / e;
    if (std::abs(h) >= 1.0) continue;
    const Vec3 foot = h * pl.n;
    const auto& face = omega.faces()[f];
    double s = 0.0;
    for (std::size_t i = 0; i < face.size(); ++i) {
      const Vec3 a = (verts[face[i]] - x) / e - foot;
      const Vec3 b = (verts[face[(i + 1) % face.size()]] - x) / e - foot;
      const Vec3 u = (b - a).normalized();
      const double ta = a.dot(u), tb = b.dot(u);
      const double d = (a - ta * u).norm();
      if (d < 1e-14) continue;
      const double sign = pl.n.dot(a.cross(b)) >= 0.0 ? 1.0 : -1.0;
      s += sign * edge_flux(h, d, std::atan2(ta, d), std::atan2(tb, d));
    }
    total -= s / e * pl.n;
  }
  return total;
}

ScalarField Mollifier::smeared_indicator(const ConvexPolyhedron& omega, const GridSpec& g) const {
  if (g.dim != 3) throw DimensionError("smeared indicators need a three-dimensional grid");
  ScalarField out(g);
  parallel_for(g.size(), [&](std::size_t b, std::size_t e) {
    for (std::size_t p = b; p < e; ++p) out(p) = smeared_indicator(omega, g.point(p));
  });
  return out;
}

}  // namespace mueg
