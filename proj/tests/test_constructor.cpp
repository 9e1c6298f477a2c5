#include <chrono>
#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "mueg/constructor/constructor.hpp"
#include "mueg/constructor/ledger.hpp"
#include "mueg/errors.hpp"
#include "mueg/fields/integrate.hpp"
#include "mueg/kernels/constants.hpp"

using namespace mueg;
constexpr double pi = std::numbers::pi;

namespace {

CurrentDecomposition velocity_only(const SmoothVector& w) {
  CurrentDecomposition d;
  d.w = w;
  return d;
}

const SmoothScalar kRho = SmoothScalar::gaussian(2.0, 1.0);

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

TEST_CASE("constructed kernel is Hermitian and reproduces the density on the diagonal") {
  auto gamma = build_rdm(kRho, velocity_only(SmoothVector::rotation(Vec3(0.3, -0.2, 0.8))), {});
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-1.5, 1.5);
  for (int k = 0; k < 20; ++k) {
    const Vec3 x(u(rng), u(rng), u(rng)), y(u(rng), u(rng), u(rng));
    const cplx a = gamma->kernel(x, y), b = gamma->kernel(y, x);
    CHECK(std::abs(a - std::conj(b)) < 1e-12 * kRho.value(Vec3::Zero()));
    CHECK(gamma->kernel(x, x).real() == doctest::Approx(kRho.value(x)).epsilon(1e-7));
    CHECK(std::abs(gamma->kernel(x, x).imag()) < 1e-16);
  }
}

TEST_CASE("marginals for constant and rotational velocity") {
  const GridSpec g = GridSpec::box(3, -3.0, 3.0, 12);
  SUBCASE("constant velocity") {
    auto gamma = build_rdm(kRho, velocity_only(SmoothVector::constant(Vec3(0.4, -0.7, 0.2))), {});
    const auto m = verify_marginals(*gamma, g);
    MESSAGE("constant: density " << m.density_error << " current " << m.current_error);
    CHECK(m.pass);
    const auto c = marginal_convergence(*gamma, g);
    MESSAGE("ratios " << c.density_ratios[0] << " " << c.current_ratios[0]);
    CHECK(c.pass);
  }
  SUBCASE("rotation") {
    auto gamma = build_rdm(kRho, velocity_only(SmoothVector::rotation(Vec3(0.0, 0.0, 1.0))), {});
    const auto m = verify_marginals(*gamma, g);
    MESSAGE("rotation: density " << m.density_error << " current " << m.current_error);
    CHECK(m.pass);
    const auto c = marginal_convergence(*gamma, g);
    MESSAGE("ratios " << c.density_ratios[0] << " " << c.current_ratios[0]);
    CHECK(c.pass);
  }
  SUBCASE("zero velocity carries no current") {
    auto gamma = build_rdm(kRho, {}, {});
    const auto m = verify_marginals(*gamma, g);
    CHECK(m.current_error == 0.0);
  }
}

TEST_CASE("operator bound on sampled lattices") {
  const double rho_max = kRho.value(Vec3::Zero());
  const auto lattice = sampling_lattice(rho_max, 2.0, Vec3::Zero(), 8);
  auto gamma = build_rdm(kRho, velocity_only(SmoothVector::rotation(Vec3(0.0, 0.0, 1.0))), {});
  const auto t0 = std::chrono::steady_clock::now();
  const auto r = operator_bound(*gamma, lattice);
  MESSAGE("eigenvalues in [" << r.lhs << ", " << r.rhs << "] in " << seconds_since(t0) << " s");
  CHECK(r.pass);
  const FermiRdm f(ShiftedFermiKernel(FermiKernel(2 * rho_max, 3), Vec3(0.3, 0.1, -0.2)));
  const auto rf = operator_bound(f, lattice);
  MESSAGE("Fermi eigenvalues in [" << rf.lhs << ", " << rf.rhs << "]");
  CHECK(rf.pass);
}

TEST_CASE("ledger") {
  const GridSpec g = GridSpec::box(3, -4.0, 4.0, 16);
  SUBCASE("zero velocity") {
    auto gamma = build_rdm(kRho, {}, {});
    const auto t0 = std::chrono::steady_clock::now();
    const auto l = kinetic_bound_ledger(*gamma, g);
    MESSAGE(l.to_report().str() << "time " << seconds_since(t0));
    CHECK(l.pass);
    CHECK(l.terms.gauge_term == 0.0);
    CHECK(l.terms.strain_vorticity_term == 0.0);
  }
  SUBCASE("rotation") {
    const Vec3 nu(0.0, 0.0, 1.0);
    auto gamma = build_rdm(kRho, velocity_only(SmoothVector::rotation(nu)), {});
    const auto l = kinetic_bound_ledger(*gamma, g);
    MESSAGE(l.to_report().str());
    CHECK(l.pass);
    const double mass = integrate(sample_scalar(g, [](const Vec3& x) { return kRho.value(x); }));
    CHECK(l.terms.strain_vorticity_term == doctest::Approx(strain_constant(3) * std::sqrt(0.5) * mass).epsilon(1e-12));
  }
}

TEST_CASE("constant density without current is a mixture of Fermi kernels") {
  auto gamma = build_rdm(SmoothScalar::constant(0.3), {}, {});
  const Vec3 x(0.2, -0.4, 0.1);
  CHECK(gamma->kernel(x, x).real() == doctest::Approx(0.3).epsilon(1e-9));
  // Translation invariance: the kernel depends on x - y only.
  const Vec3 z(0.5, 0.1, -0.3);
  CHECK(std::abs(gamma->kernel(x + z, x) - gamma->kernel(Vec3::Zero() + z, Vec3::Zero())) < 1e-15);
  CHECK(gamma->kernel(x + z, x).imag() == 0.0);
}

TEST_CASE("rotational velocity produces the prescribed vorticity") {
  const Vec3 nu(0.2, -0.3, 1.0);
  auto gamma = build_rdm(kRho, velocity_only(SmoothVector::rotation(nu)), {});
  const GridSpec g = GridSpec::box(3, -1.5, 1.5, 10);
  ObservableOptions opt;
  opt.kinetic = false;
  const auto obs = gamma->observables(g, opt);
  double err = 0.0;
  for (std::size_t p = 0; p < g.size(); ++p)
    if (g.interior(p) && obs.valid[p]) err = std::max(err, (obs.vorticity.vec(p) - nu).norm());
  CHECK(err < 1e-6 * nu.norm());
}

TEST_CASE("gauge transforming a build with (g, w) by g gives the build with (0, w)") {
  Mat3 q;
  q << 0.4, 0.1, 0.0, 0.1, -0.2, 0.3, 0.0, 0.3, 0.1;
  const GaugeFunction gf = GaugeFunction::quadratic(q, Vec3(0.1, 0.0, -0.2));
  CurrentDecomposition with_g = velocity_only(SmoothVector::rotation(Vec3(0, 0.5, 1)));
  with_g.g = gf;
  auto gamma = build_rdm(kRho, with_g, {});
  auto plain = build_rdm(kRho, velocity_only(SmoothVector::rotation(Vec3(0, 0.5, 1))), {});
  const RdmPtr back = gauge_transform(gamma, gf);
  const GridSpec g = GridSpec::box(3, -1.0, 1.0, 4);
  const auto a = back->observables(g), b = plain->observables(g);
  for (std::size_t p = 0; p < g.size(); ++p) {
    CHECK(a.rho(p) == doctest::Approx(b.rho(p)).epsilon(1e-6));
    CHECK((a.jp.vec(p) - b.jp.vec(p)).norm() < 1e-6 * b.rho(p));
    CHECK(a.tau(p) == doctest::Approx(b.tau(p)).epsilon(1e-6));
  }
  // The built state itself carries the full current rho (grad g + w).
  const auto c = gamma->observables(g);
  for (std::size_t p = 0; p < g.size(); ++p) {
    const Vec3 v = with_g.velocity(g.point(p));
    CHECK((c.jp.vec(p) - c.rho(p) * v).norm() < 1e-6 * c.rho(p) * v.norm());
    CHECK(c.tau(p) == doctest::Approx(c.tau_analytic(p)).epsilon(1e-5));
  }
}

TEST_CASE("Landau and symmetric decompositions differ only in the strain term") {
  const GridSpec g = GridSpec::box(3, -4.0, 4.0, 16);
  Mat3 landau = Mat3::Zero();
  landau(1, 0) = 1.0;  // v = (0, x1, 0)
  Mat3 q = Mat3::Zero();
  q(0, 1) = q(1, 0) = 0.5;  // g = x1 x2 / 2
  CurrentDecomposition a = velocity_only(SmoothVector::linear(landau));
  CurrentDecomposition b = velocity_only(SmoothVector::rotation(Vec3(0, 0, 1)));
  b.g = GaugeFunction::quadratic(q);
  for (const Vec3& x : {Vec3(0.3, -1.2, 0.5), Vec3(2.0, 1.0, -1.0)})
    CHECK((a.velocity(x) - b.velocity(x)).norm() < 1e-15);
  const auto ga = build_rdm(kRho, a, {}), gb = build_rdm(kRho, b, {});
  const auto la = kinetic_bound_ledger(*ga, g), lb = kinetic_bound_ledger(*gb, g);
  CHECK(la.pass);
  CHECK(lb.pass);
  CHECK(la.terms.tf_term == lb.terms.tf_term);
  CHECK(la.terms.weizsacker_term == lb.terms.weizsacker_term);
  CHECK(la.terms.gauge_term == doctest::Approx(lb.terms.gauge_term).epsilon(1e-14));
  const double mass = integrate(sample_scalar(g, [](const Vec3& x) { return kRho.value(x); }));
  CHECK(la.terms.strain_vorticity_term - lb.terms.strain_vorticity_term ==
        doctest::Approx(strain_constant(3) * mass * (1.0 - std::sqrt(0.5))).epsilon(1e-12));
  // Both states carry the same density and current.
  const GridSpec probe = GridSpec::box(3, -1.0, 1.0, 4);
  ObservableOptions opt;
  opt.kinetic = false;
  const auto oa = ga->observables(probe, opt), ob = gb->observables(probe, opt);
  for (std::size_t p = 0; p < probe.size(); ++p) {
    CHECK(oa.rho(p) == doctest::Approx(ob.rho(p)).epsilon(1e-12));
    CHECK((oa.jp.vec(p) - ob.jp.vec(p)).norm() < 1e-8 * oa.rho(p));
  }
}

TEST_CASE("upper functional") {
  const GridSpec g = GridSpec::box(3, -4.0, 4.0, 16);
  SUBCASE("zero density") {
    const auto u = kinetic_upper_functional(SmoothScalar::constant(0.0), {}, {}, g);
    CHECK(u.value == 0.0);
  }
  SUBCASE("minimum over the epsilon grid") {
    const auto u = kinetic_upper_functional(kRho, velocity_only(SmoothVector::rotation(Vec3(0, 0, 1))), {}, g);
    CHECK(u.values.size() == 3);
    for (double v : u.values) CHECK(u.value <= v);
    CHECK(u.value == doctest::Approx(u.terms.total()).epsilon(1e-15));
    // The bound dominates the kinetic energy of the constructed state at that epsilon.
    ConstructorSpec s;
    s.epsilon = u.epsilon;
    const auto l = kinetic_bound_ledger(*build_rdm(kRho, velocity_only(SmoothVector::rotation(Vec3(0, 0, 1))), s), g);
    CHECK(l.lhs_fd <= u.value);
  }
  SUBCASE("dilation by lambda scales every term by lambda^{2/3}") {
    const double lambda = 0.125, s = std::cbrt(lambda);
    const Vec3 nu(0.0, 0.4, 1.0);
    // rho_l(x) = lambda rho(s x), v_l(x) = s v(s x); for a Gaussian and a rotation these stay in the family.
    const SmoothScalar rho_l = SmoothScalar::gaussian(2.0, 1.0 / s);
    CurrentDecomposition d = velocity_only(SmoothVector::rotation(nu));
    CurrentDecomposition d_l = velocity_only(SmoothVector::rotation(s * s * nu));
    const GridSpec g_l = GridSpec::box(3, -4.0 / s, 4.0 / s, 16);
    const auto t = bound_terms(kRho, d, {}, g), t_l = bound_terms(rho_l, d_l, {}, g_l);
    const double f = std::pow(lambda, 2.0 / 3.0);
    CHECK(t_l.tf_term == doctest::Approx(f * t.tf_term).epsilon(1e-12));
    CHECK(t_l.weizsacker_term == doctest::Approx(f * t.weizsacker_term).epsilon(1e-12));
    CHECK(t_l.gauge_term == doctest::Approx(f * t.gauge_term).epsilon(1e-12));
    CHECK(t_l.strain_vorticity_term == doctest::Approx(f * t.strain_vorticity_term).epsilon(1e-12));
    CHECK(t_l.floor_term == 0.0);
    const auto u = kinetic_upper_functional(kRho, d, {}, g), u_l = kinetic_upper_functional(rho_l, d_l, {}, g_l);
    CHECK(u_l.value == doctest::Approx(f * u.value).epsilon(1e-12));
  }
}

TEST_CASE("specification checks") {
  ConstructorSpec s;
  s.t_order = 4;
  CHECK_THROWS_AS(build_rdm(kRho, {}, s), DomainError);
  s = {};
  s.delta_floor = 0.0;
  CHECK_THROWS_AS(build_rdm(kRho, {}, s), DomainError);
  s = {};
  s.t_order = 8;
  // Eight nodes do not resolve the density profile; the doubling check refuses the build.
  CHECK_THROWS_AS(build_rdm(kRho, {}, s), NumericalError);

  auto gamma = build_rdm(kRho, {}, {});
  for (const Vec3& x : {Vec3(0, 0, 0), Vec3(1, 2, 3)}) CHECK(gamma->width(x) >= 1e-3);
  CHECK(gamma->width(Vec3::Zero()) == 1e-3);

  const GridSpec g = GridSpec::box(3, -2.0, 2.0, 8);
  CHECK_THROWS_AS(build_rdm(ScalarField(g), VectorField(g), nullptr, {}), DomainError);
  ScalarField neg(g, 1.0);
  neg(3) = -1.0;
  CHECK_THROWS_AS(build_rdm(neg, VectorField(g), nullptr, {}), DomainError);
}

TEST_CASE("grid-backed inputs reproduce their interpolated marginals") {
  const GridSpec g = GridSpec::box(3, -5.0, 5.0, 41);
  const Vec3 nu(0.0, 0.0, 0.8);
  const auto rho = sample_scalar(g, [](const Vec3& x) { return kRho.value(x); });
  const auto w = sample_vector(g, [&](const Vec3& x) -> Vec3 { return 0.5 * nu.cross(x); });
  auto gamma = build_rdm(rho, w, nullptr, {});
  const auto m = verify_marginals(*gamma, GridSpec::box(3, -2.0, 2.0, 6));
  CHECK(m.pass);
  auto analytic = build_rdm(kRho, velocity_only(SmoothVector::rotation(nu)), {});
  const Vec3 x(0.3, -0.2, 0.4), y(0.1, 0.5, -0.3);
  CHECK(std::abs(gamma->kernel(x, y) - analytic->kernel(x, y)) < 1e-4 * std::abs(analytic->kernel(x, y)));
}
