#include "mueg/kernels/fermi.hpp"

#include <cmath>
#include <numbers>

#include "mueg/errors.hpp"
#include "mueg/kernels/constants.hpp"

namespace mueg {

namespace {

constexpr double pi = std::numbers::pi;

// (sin x - x cos x) / x^3 and its derivative divided by x.
double ball3(double x) {
  if (x < 0.2) {
    const double x2 = x * x;
    return 1.0 / 3.0 + x2 * (-1.0 / 30.0 + x2 * (1.0 / 840.0 + x2 * (-1.0 / 45360.0 + x2 / 3991680.0)));
  }
  return (std::sin(x) - x * std::cos(x)) / (x * x * x);
}

double ball3_prime_over_x(double x) {
  if (x < 0.2) {
    const double x2 = x * x;
    return -1.0 / 15.0 + x2 * (1.0 / 210.0 + x2 * (-1.0 / 7560.0 + x2 * (1.0 / 498960.0 - x2 / 51891840.0)));
  }
  const double s = std::sin(x), c = std::cos(x);
  return (s / (x * x) - 3.0 * (s - x * c) / (x * x * x * x)) / x;
}

// sin(x)/x and (x cos x - sin x)/x^3.
double sinc(double x) {
  if (std::abs(x) < 1e-3) {
    const double x2 = x * x;
    return 1.0 - x2 / 6.0 + x2 * x2 / 120.0;
  }
  return std::sin(x) / x;
}

double sinc_prime_over_x(double x) {
  if (std::abs(x) < 1e-2) {
    const double x2 = x * x;
    return -1.0 / 3.0 + x2 / 30.0 - x2 * x2 / 840.0;
  }
  return (x * std::cos(x) - std::sin(x)) / (x * x * x);
}

// J1(x)/x and J2(x)/x^2.
double bessel1_over_x(double x) {
  if (x < 1e-3) {
    const double x2 = x * x;
    return 0.5 - x2 / 16.0 + x2 * x2 / 384.0;
  }
  return std::cyl_bessel_j(1.0, x) / x;
}

double bessel2_over_x2(double x) {
  if (x < 1e-2) {
    const double x2 = x * x;
    return 1.0 / 8.0 - x2 / 96.0 + x2 * x2 / 3072.0;
  }
  return std::cyl_bessel_j(2.0, x) / (x * x);
}

}  // namespace

FermiKernel::FermiKernel(double t, int d) : t_(t), d_(d) {
  if (d < 1 || d > 3) throw DimensionError("Fermi kernel dimension must be 1..3");
  if (!(t >= 0.0)) throw DomainError("Fermi kernel density must be nonnegative");
  kf_ = 2.0 * pi * std::pow(t / unit_ball_volume(d), 1.0 / d);
}

double FermiKernel::radial(double r) const {
  if (t_ == 0.0) return 0.0;
  const double x = kf_ * r;
  switch (d_) {
    case 1:
      return kf_ / pi * sinc(x);
    case 2:
      return kf_ * kf_ / (2.0 * pi) * bessel1_over_x(x);
    default:
      return kf_ * kf_ * kf_ / (2.0 * pi * pi) * ball3(x);
  }
}

double FermiKernel::value(const Vec3& z) const { return radial(z.head(d_).norm()); }

Vec3 FermiKernel::gradient(const Vec3& z) const {
  Vec3 g = Vec3::Zero();
  if (t_ == 0.0) return g;
  const double r = z.head(d_).norm();
  const double x = kf_ * r;
  double scale;
  switch (d_) {
    case 1:
      scale = kf_ * kf_ * kf_ / pi * sinc_prime_over_x(x);
      break;
    case 2:
      scale = -std::pow(kf_, 4) / (2.0 * pi) * bessel2_over_x2(x);
      break;
    default:
      scale = std::pow(kf_, 5) / (2.0 * pi * pi) * ball3_prime_over_x(x);
  }
  g.head(d_) = scale * z.head(d_);
  return g;
}

double FermiKernel::diagonal_kinetic_density() const {
  return thomas_fermi_constant(d_) * std::pow(t_, 1.0 + 2.0 / d_);
}

cplx ShiftedFermiKernel::value(const Vec3& z) const {
  const int d = base_.dim();
  const double phase = u_.head(d).dot(z.head(d));
  return std::polar(base_.value(z), phase);
}

KernelObservables shifted_kernel_observables(const ShiftedFermiKernel& k) {
  const int d = k.base().dim();
  const double t = k.base().density();
  KernelObservables o;
  o.density = t;
  o.current = Vec3::Zero();
  o.current.head(d) = t * k.shift().head(d);
  o.kinetic_density = t * k.shift().head(d).squaredNorm() + k.base().diagonal_kinetic_density();
  return o;
}

}  // namespace mueg
