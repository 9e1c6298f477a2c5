#include <cmath>
#include <numbers>
#include <functional>
#include <random>

#include "doctest.h"
#include "mueg/errors.hpp"
#include "mueg/fields/quadrature.hpp"
#include "mueg/kernels/constants.hpp"
#include "mueg/kernels/fermi.hpp"
#include "mueg/kernels/profiles.hpp"

using namespace mueg;
constexpr double pi = std::numbers::pi;

namespace {

// (2 pi)^{-3} times the integral of e^{i k.z} over the ball |k| <= kf, in spherical coordinates
// about a fixed axis unrelated to z.
double ball_oracle_3d(double kf, const Vec3& z) {
  const auto rk = gauss_legendre(60, 0.0, kf);
  const auto rm = gauss_legendre(60, -1.0, 1.0);
  const int nphi = 64;
  double s = 0.0;
  for (int i = 0; i < rk.order(); ++i)
    for (int j = 0; j < rm.order(); ++j) {
      const double k = rk.nodes[i], mu = rm.nodes[j], st = std::sqrt(1 - mu * mu);
      double inner = 0.0;
      for (int p = 0; p < nphi; ++p) {
        const double phi = 2 * pi * p / nphi;
        const Vec3 kv(k * st * std::cos(phi), k * st * std::sin(phi), k * mu);
        inner += std::cos(kv.dot(z));
      }
      s += rk.weights[i] * rm.weights[j] * k * k * inner * (2 * pi / nphi);
    }
  return s / std::pow(2 * pi, 3);
}

double line_oracle_1d(double kf, double z) {
  const auto r = gauss_legendre(80, -kf, kf);
  double s = 0.0;
  for (int i = 0; i < r.order(); ++i) s += r.weights[i] * std::cos(r.nodes[i] * z);
  return s / (2 * pi);
}

double disc_oracle_2d(double kf, const Vec3& z) {
  const auto rk = gauss_legendre(60, 0.0, kf);
  const int nphi = 96;
  double s = 0.0;
  for (int i = 0; i < rk.order(); ++i) {
    double inner = 0.0;
    for (int p = 0; p < nphi; ++p) {
      const double phi = 2 * pi * p / nphi;
      inner += std::cos(rk.nodes[i] * (std::cos(phi) * z(0) + std::sin(phi) * z(1)));
    }
    s += rk.weights[i] * rk.nodes[i] * inner * (2 * pi / nphi);
  }
  return s / (4 * pi * pi);
}

double fd_minus_laplacian_at_zero(const std::function<cplx(const Vec3&)>& f, int d, double h) {
  cplx lap = 0.0;
  for (int a = 0; a < d; ++a) {
    Vec3 e = Vec3::Zero();
    e(a) = h;
    lap += (-f(2 * e) + 16.0 * f(e) - 30.0 * f(Vec3::Zero()) + 16.0 * f(-e) - f(-2 * e)) / (12.0 * h * h);
  }
  return -lap.real();
}

}  // namespace

TEST_CASE("Thomas-Fermi and strain constants") {
  CHECK(thomas_fermi_constant(3) == doctest::Approx(0.6 * std::pow(6 * pi * pi, 2.0 / 3.0)).epsilon(1e-13));
  CHECK(thomas_fermi_constant(3) == doctest::Approx(9.1156).epsilon(1e-5));
  CHECK(thomas_fermi_constant(1) == doctest::Approx(pi * pi / 3.0).epsilon(1e-14));
  CHECK(thomas_fermi_constant(2) == doctest::Approx(2 * pi).epsilon(1e-14));
  CHECK(strain_constant(3) == 7.75);
  CHECK_THROWS_AS(thomas_fermi_constant(4), DimensionError);
}

TEST_CASE("Fermi radius matches the density") {
  for (int d = 1; d <= 3; ++d) {
    FermiKernel k(0.7, d);
    const double kf2 = (d + 2.0) / d * thomas_fermi_constant(d) * std::pow(0.7, 2.0 / d);
    CHECK(k.fermi_radius() * k.fermi_radius() == doctest::Approx(kf2).epsilon(1e-13));
    CHECK(k.value(Vec3::Zero()) == doctest::Approx(0.7).epsilon(1e-14));
  }
  FermiKernel k3(1.0 / (6 * pi * pi), 3);
  CHECK(k3.fermi_radius() == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(k3.value(Vec3(pi, 0, 0)) == doctest::Approx(1.0 / (2 * std::pow(pi, 4))).epsilon(1e-13));
  FermiKernel zero(0.0, 3);
  CHECK(zero.value(Vec3(0.3, 0.1, 0.0)) == 0.0);
  CHECK(zero.diagonal_kinetic_density() == 0.0);
}

TEST_CASE("closed forms agree with brute-force momentum-space quadrature") {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> ut(0.05, 2.0), uz(-1.0, 1.0);
  for (int trial = 0; trial < 12; ++trial) {
    const double t = ut(rng);
    FermiKernel k(t, 3);
    Vec3 z(uz(rng), uz(rng), uz(rng));
    z *= 4.0 / k.fermi_radius();
    const double oracle = ball_oracle_3d(k.fermi_radius(), z);
    CHECK(std::abs(k.value(z) - oracle) <= 1e-8 * std::max(std::abs(oracle), 1e-3 * t));
  }
  for (int trial = 0; trial < 8; ++trial) {
    const double t = ut(rng);
    FermiKernel k1(t, 1);
    const double z = 5.0 * uz(rng) / k1.fermi_radius();
    const double o1 = line_oracle_1d(k1.fermi_radius(), z);
    CHECK(std::abs(k1.value(Vec3(z, 0, 0)) - o1) <= 1e-10 * std::max(std::abs(o1), 1e-3 * t));
    FermiKernel k2(t, 2);
    Vec3 z2(uz(rng), uz(rng), 0.0);
    z2 *= 5.0 / k2.fermi_radius();
    const double o2 = disc_oracle_2d(k2.fermi_radius(), z2);
    CHECK(std::abs(k2.value(z2) - o2) <= 1e-10 * std::max(std::abs(o2), 1e-3 * t));
  }
}

TEST_CASE("kernel gradient and diagonal kinetic density by finite differences") {
  for (int d = 1; d <= 3; ++d) {
    FermiKernel k(2.0, d);
    const double h = 1e-3 / k.fermi_radius();
    CHECK(k.gradient(Vec3::Zero()).norm() == 0.0);
    Vec3 z(0.3, -0.2, 0.5);
    if (d < 3) z(2) = 0.0;
    if (d < 2) z(1) = 0.0;
    const Vec3 g = k.gradient(z);
    for (int a = 0; a < d; ++a) {
      Vec3 e = Vec3::Zero();
      e(a) = h;
      const double fd = (-k.value(z + 2 * e) + 8 * k.value(z + e) - 8 * k.value(z - e) + k.value(z - 2 * e)) / (12 * h);
      CHECK(g(a) == doctest::Approx(fd).epsilon(1e-7));
    }
    const double lap = fd_minus_laplacian_at_zero([&](const Vec3& x) { return cplx(k.value(x)); }, d, 1e-2 / k.fermi_radius());
    CHECK(lap == doctest::Approx(k.diagonal_kinetic_density()).epsilon(1e-6));
  }
  FermiKernel k(2.0, 3);
  CHECK(k.diagonal_kinetic_density() == doctest::Approx(thomas_fermi_constant(3) * std::pow(2.0, 5.0 / 3.0)).epsilon(1e-14));
}

TEST_CASE("shifted kernel observables") {
  ShiftedFermiKernel s(FermiKernel(1.0, 3), Vec3(0, 0, 3));
  auto o = shifted_kernel_observables(s);
  CHECK(o.density == 1.0);
  CHECK((o.current - Vec3(0, 0, 3)).norm() < 1e-15);
  CHECK(o.kinetic_density == doctest::Approx(9.0 + thomas_fermi_constant(3)).epsilon(1e-14));

  auto f = [&](const Vec3& z) { return s.value(z); };
  const double h = 1e-2 / s.base().fermi_radius();
  CHECK(std::abs(f(Vec3::Zero()) - 1.0) < 1e-15);
  cplx dz = (-f(Vec3(0, 0, 2 * h)) + 8.0 * f(Vec3(0, 0, h)) - 8.0 * f(Vec3(0, 0, -h)) + f(Vec3(0, 0, -2 * h))) / (12 * h);
  CHECK(dz.imag() == doctest::Approx(3.0).epsilon(1e-6));
  CHECK(fd_minus_laplacian_at_zero(f, 3, h) == doctest::Approx(o.kinetic_density).epsilon(1e-6));

  auto unshifted = shifted_kernel_observables(ShiftedFermiKernel(FermiKernel(1.0, 3), Vec3::Zero()));
  CHECK(unshifted.kinetic_density == doctest::Approx(FermiKernel(1.0, 3).diagonal_kinetic_density()));

  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-2, 2);
  for (int i = 0; i < 20; ++i) {
    Vec3 z(u(rng), u(rng), u(rng));
    CHECK(std::abs(s.value(-z) - std::conj(s.value(z))) < 1e-14);
  }
}

TEST_CASE("theta profile moments") {
  for (int d = 1; d <= 3; ++d) {
    ThetaProfile th(1.0, d);
    auto m = th.moments();
    CHECK(m.mass == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(m.mean.norm() < 1e-14);
    CHECK(m.gradient_mean.norm() < 1e-12);
    CHECK(m.second_moment == doctest::Approx(1.0).epsilon(1e-10));
    // Gauss-Hermite oracle: grad log theta = -(d/delta) u, so the Fisher integral is E[(d/delta)^2 |u|^2]/4.
    const auto gh = gauss_hermite_tensor(d, 10);
    double fisher = 0.0;
    for (std::size_t i = 0; i < gh.weights.size(); ++i) {
      double u2 = 0.0;
      for (int a = 0; a < d; ++a) u2 += th.variance() * gh.nodes[i][a] * gh.nodes[i][a];
      fisher += gh.weights[i] * d * d * u2 / 4.0;
    }
    CHECK(m.fisher == doctest::Approx(fisher).epsilon(1e-10));
    CHECK(m.fisher <= m.fisher_bound * (1 + 1e-10));
  }
  ThetaProfile t3(1.0, 3);
  CHECK(t3.moments().fisher == doctest::Approx(2.25).epsilon(1e-10));
  CHECK(t3.moments().fisher_bound == 6.75);
  CHECK_THROWS_AS(ThetaProfile(0.0, 3), DomainError);
}

TEST_CASE("eta profile constants") {
  EtaProfile eta;
  auto c = eta.constants(3);
  CHECK(c.mass == doctest::Approx(1.0).epsilon(1e-10));
  // Independent composite Simpson oracle on the closed form.
  const int n = 20000;
  double inv = 0.0, tf = 0.0;
  for (int i = 0; i <= n; ++i) {
    const double t = 1.0 + static_cast<double>(i) / n;
    const double w = (i == 0 || i == n) ? 1.0 : (i % 2 ? 4.0 : 2.0);
    inv += w * eta.value(t) / t;
    tf += w * eta.value(t) * std::pow(t, 2.0 / 3.0);
  }
  inv /= 3.0 * n;
  tf /= 3.0 * n;
  CHECK(c.inv_moment == doctest::Approx(inv).epsilon(1e-10));
  CHECK(c.tf_factor == doctest::Approx(tf).epsilon(1e-10));
  CHECK(c.inv_moment > 0.5);
  CHECK(c.inv_moment < 1.0);
  CHECK(c.tf_factor > 1.0);
  CHECK(c.tf_factor < std::pow(2.0, 2.0 / 3.0));
  CHECK(c.ibp_moment == doctest::Approx(-1.0).epsilon(1e-10));
  CHECK(std::isfinite(c.weiz_factor));
  CHECK(c.weiz_factor > 0.0);
  const double t = 1.37, h = 1e-5;
  CHECK(eta.derivative(t) == doctest::Approx((eta.value(t + h) - eta.value(t - h)) / (2 * h)).epsilon(1e-8));
  CHECK_THROWS_AS(EtaProfile(0.5, 1.0), DomainError);
  CHECK_THROWS_AS(EtaProfile(2.0, 1.0), DomainError);

  for (double eps : {0.1, 0.3, 1.0}) {
    auto ce = EtaProfile::epsilon_family(eps).constants(3);
    CHECK(ce.mass == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(ce.tf_factor > 1.0);
    CHECK(ce.tf_factor < std::pow(1.0 + eps, 2.0 / 3.0));
  }
}
