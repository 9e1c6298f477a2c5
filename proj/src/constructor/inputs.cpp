#include "mueg/constructor/inputs.hpp"

#include <cmath>
#include <memory>
#include <numbers>

#include "mueg/fields/interp.hpp"

namespace mueg {

SmoothScalar SmoothScalar::gaussian(double mass, double sigma, int d, const Vec3& center) {
  if (!(sigma > 0.0)) throw DomainError("Gaussian width must be positive");
  const double norm = mass * std::pow(2.0 * std::numbers::pi * sigma * sigma, -0.5 * d);
  return SmoothScalar([=](const Vec3& x, double& v, Vec3& g) {
    Vec3 y = x - center;
    for (int a = d; a < 3; ++a) y(a) = 0.0;
    v = norm * std::exp(-y.squaredNorm() / (2.0 * sigma * sigma));
    g = -v * y / (sigma * sigma);
  });
}

SmoothScalar SmoothScalar::constant(double c) {
  return SmoothScalar([c](const Vec3&, double& v, Vec3& g) {
    v = c;
    g.setZero();
  });
}

SmoothScalar SmoothScalar::from_field(const ScalarField& f) {
  auto ip = std::make_shared<LocalInterpolant>(f);
  return SmoothScalar([ip](const Vec3& x, double& v, Vec3& g) { ip->evaluate(x, v, g); });
}

double SmoothScalar::value(const Vec3& x) const {
  double v;
  Vec3 g;
  eval_(x, v, g);
  return v;
}

Vec3 SmoothScalar::gradient(const Vec3& x) const {
  double v;
  Vec3 g;
  eval_(x, v, g);
  return g;
}

SmoothVector SmoothVector::constant(const Vec3& k) {
  return SmoothVector([k](const Vec3&, Vec3& v, Mat3& j) {
    v = k;
    j.setZero();
  });
}

SmoothVector SmoothVector::linear(const Mat3& a, const Vec3& b) {
  return SmoothVector([a, b](const Vec3& x, Vec3& v, Mat3& j) {
    v = a * x + b;
    j = a;
  });
}

SmoothVector SmoothVector::rotation(const Vec3& nu) {
  Mat3 a;
  a << 0.0, -nu(2), nu(1), nu(2), 0.0, -nu(0), -nu(1), nu(0), 0.0;
  return linear(0.5 * a);
}

SmoothVector SmoothVector::from_field(const VectorField& f) {
  const int d = f.dim();
  std::vector<std::shared_ptr<LocalInterpolant>> ip;
  for (int a = 0; a < d; ++a) {
    ScalarField c(f.grid());
    for (std::size_t p = 0; p < f.size(); ++p) c(p) = f(p, a);
    ip.push_back(std::make_shared<LocalInterpolant>(std::move(c)));
  }
  return SmoothVector([ip, d](const Vec3& x, Vec3& v, Mat3& j) {
    v.setZero();
    j.setZero();
    for (int a = 0; a < d; ++a) {
      double va;
      Vec3 ga;
      ip[a]->evaluate(x, va, ga);
      v(a) = va;
      j.row(a) = ga.transpose();
    }
  });
}

Vec3 SmoothVector::value(const Vec3& x) const {
  Vec3 v;
  Mat3 j;
  eval_(x, v, j);
  return v;
}

Mat3 SmoothVector::jacobian(const Vec3& x) const {
  Vec3 v;
  Mat3 j;
  eval_(x, v, j);
  return j;
}

Vec3 CurrentDecomposition::velocity(const Vec3& x) const {
  Vec3 v = w.value(x);
  if (g) v += g->gradient(x);
  return v;
}

void CurrentDecomposition::check_membership(const SmoothScalar& rho, const GridSpec& grid) const {
  for (std::size_t p = 0; p < grid.size(); ++p) {
    const Vec3 x = grid.point(p);
    const double r = rho.value(x);
    if (!(r >= 0.0) || !std::isfinite(r)) throw DomainError("density must be finite and nonnegative");
    const double kin = r * velocity(x).squaredNorm();
    const double strain = r * w.jacobian(x).norm();
    if (!std::isfinite(kin) || !std::isfinite(strain))
      throw DomainError("rho |v|^2 or rho |Dw| is not finite on the grid");
  }
}

}  // namespace mueg
