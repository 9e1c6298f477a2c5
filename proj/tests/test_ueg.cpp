#include <cmath>
#include <numbers>
#include <sstream>

#include "doctest.h"
#include "mueg/errors.hpp"
#include "mueg/fields/integrate.hpp"
#include "mueg/fields/quadrature.hpp"
#include "mueg/kernels/constants.hpp"
#include "mueg/rdm/coulomb.hpp"
#include "mueg/tiling/tiling.hpp"
#include "mueg/ueg/ueg.hpp"

using namespace mueg;
constexpr double pi = std::numbers::pi;

namespace {

// Integral of |x|^2 eta_delta over R^3 by composite Gauss-Legendre in the radius.
double mollifier_radial_second(double delta) {
  const double e = 0.1 * delta;
  double s = 0.0;
  for (int p = 0; p < 200; ++p) {
    const QuadratureRule r = gauss_legendre(16, p / 200.0, (p + 1) / 200.0);
    for (int i = 0; i < r.order(); ++i) s += r.weights[i] * std::pow(r.nodes[i], 4) * bump::density(r.nodes[i]);
  }
  return 4.0 * pi * e * e * s;
}

GridSpec scaled_grid(const GridSpec& g, double s) {
  GridSpec out = g;
  for (int a = 0; a < 3; ++a) {
    out.origin[a] *= s;
    out.spacing[a] *= s;
  }
  return out;
}

}  // namespace

TEST_CASE("trial domains have barycentre 0") {
  for (DomainKind k : {DomainKind::tetrahedron, DomainKind::box}) {
    const ConvexPolyhedron om = ueg_domain(k, 3.0);
    CHECK(om.barycenter().norm() < 1e-14);
    CHECK(om.volume() == doctest::Approx(k == DomainKind::box ? 27.0 : 27.0 / 24.0).epsilon(1e-13));
  }
  CHECK(parse_domain_kind("box") == DomainKind::box);
  CHECK(parse_domain_kind("tetra") == DomainKind::tetrahedron);
  CHECK_THROWS_AS(parse_domain_kind("sphere"), ParseError);
  CHECK_THROWS_AS(ueg_domain(DomainKind::box, 0.0), DomainError);
}

TEST_CASE("build_trial preconditions") {
  const ConvexPolyhedron om = ueg_domain(DomainKind::box, 1.0);
  CHECK_THROWS_AS(build_trial(-1.0, Vec3::Zero(), om, 0.5), DomainError);
  CHECK_THROWS_AS(build_trial(1.0, Vec3::Zero(), om, 10.0), DomainError);
  CHECK_THROWS_AS(build_trial(1.0, Vec3::Zero(), om, 0.5, GridSpec::box(3, -0.5, 0.5, 8)), DomainError);
  CHECK_NOTHROW(build_trial(1.0, Vec3::Zero(), om, 0.5, GridSpec::box(3, -0.6, 0.6, 8)));
}

TEST_CASE("trial invariants: vorticity, symmetric gauge, barycentre") {
  const UegTrial t = build_trial(1.0, Vec3(0, 0, 1), ueg_domain(DomainKind::box, 1.0), 0.5, std::nullopt, 24);
  const TrialInvariants inv = check_trial_invariants(t);
  CHECK(inv.evaluated > 100);
  CHECK(inv.vorticity_error < 1e-8);
  CHECK(inv.symmetric_strain == 0.0);
  CHECK(inv.jacobian_norm_error < 1e-12);
  CHECK(inv.barycentre_error < 1e-8);
  CHECK(inv.pass);

  SUBCASE("current is rho times the rotation field") {
    const ScalarField rho = t.density_field();
    const VectorField jp = t.current_field();
    double err = 0.0;
    for (std::size_t p = 0; p < rho.size(); ++p)
      err = std::max(err, (jp.vec(p) - rho(p) * 0.5 * Vec3(0, 0, 1).cross(t.grid().point(p))).norm());
    CHECK(err < 1e-15);
  }
  SUBCASE("nu0 = 0 gives zero current") {
    const UegTrial z = build_trial(1.0, Vec3::Zero(), ueg_domain(DomainKind::box, 1.0), 0.5, std::nullopt, 12);
    const VectorField jp = z.current_field();
    for (std::size_t p = 0; p < jp.size(); ++p) CHECK(jp.vec(p).norm() == 0.0);
    CHECK(z.gauge_correction_per_volume() == 0.0);
  }
}

TEST_CASE("gauge correction per volume against box moments") {
  const double l = 3.0, delta = 2.0;
  const Vec3 nu(0.3, -0.5, 0.8);
  const UegTrial t = build_trial(1.7, nu, ueg_domain(DomainKind::box, l), delta, std::nullopt, 8);
  // int (1 * eta) x x^T = |box| (l^2/12 + m2/3) I with m2 = int |x|^2 eta.
  const double s = l * l / 12.0 + mollifier_radial_second(delta) / 3.0;
  const double expected = 1.7 / 4.0 * (3.0 * s - s) * nu.squaredNorm();
  CHECK(t.gauge_correction_per_volume() == doctest::Approx(expected).epsilon(1e-12));
  CHECK(t.moments().mass == doctest::Approx(l * l * l).epsilon(1e-12));
}

TEST_CASE("gauge term scan grows like l^2") {
  const ConvexPolyhedron unit = ueg_domain(DomainKind::tetrahedron, 1.0);
  const GaugeScan s = gauge_term_scan(1.0, Vec3(0, 0, 1), unit, 1.0, {4, 8, 16, 32});
  REQUIRE(s.fitted);
  CHECK(std::abs(s.exponent - 2.0) < 0.05);
  CHECK(s.constant > 0.0);

  SUBCASE("doubling nu0 quadruples the constant") {
    const GaugeScan d = gauge_term_scan(1.0, Vec3(0, 0, 2), unit, 1.0, {4, 8, 16, 32});
    CHECK(d.constant == doctest::Approx(4.0 * s.constant).epsilon(1e-12));
    CHECK(d.exponent == doctest::Approx(s.exponent).epsilon(1e-12));
  }
  SUBCASE("nu0 = 0 and rho0 = 0 skip the fit") {
    for (const GaugeScan& z : {gauge_term_scan(1.0, Vec3::Zero(), unit, 1.0, {4, 8, 16, 32}),
                               gauge_term_scan(0.0, Vec3(0, 0, 1), unit, 1.0, {4, 8, 16, 32})}) {
      CHECK_FALSE(z.fitted);
      for (double v : z.values) CHECK(v == 0.0);
    }
  }
  SUBCASE("scale list errors") {
    CHECK_THROWS_AS(gauge_term_scan(1.0, Vec3(0, 0, 1), unit, 1.0, {4, 8, 16}), DomainError);
    CHECK_THROWS_AS(gauge_term_scan(1.0, Vec3(0, 0, 1), unit, 1.0, {4, 8, 8, 16}), DomainError);
    CHECK_THROWS_AS(gauge_term_scan(1.0, Vec3(0, 0, 1), unit, 1.0, {-4, 8, 16, 32}), DomainError);
  }
}

TEST_CASE("surrogate energies per volume") {
  const double rho0 = 0.8;
  const Vec3 nu(0.0, 0.6, 0.8);
  const UegTrial t = build_trial(rho0, nu, ueg_domain(DomainKind::box, 2.0), 1.0, std::nullopt, 24);
  const EnergyPerVolumeReport r = surrogate_energies(t);
  CHECK(r.surrogate);
  CHECK(r.volume == doctest::Approx(8.0).epsilon(1e-13));
  CHECK(std::isfinite(r.kinetic_per_volume));
  CHECK(r.kinetic_per_volume == doctest::Approx(r.tf_per_volume + r.weizsacker_per_volume + r.gauge_term_per_volume +
                                                r.strain_per_volume + r.floor_per_volume + r.width_gradient_per_volume)
                                    .epsilon(1e-12));

  const ScalarField rho = t.density_field();
  const double grid_mass = integrate(rho) / rho0;

  SUBCASE("Thomas-Fermi term is at most (1 + kappa1 eps) c_TF rho0^{5/3}") {
    const double bound = r.tf_factor * thomas_fermi_constant(3) * std::pow(rho0, 5.0 / 3.0);
    CHECK(r.tf_factor >= 1.0);
    CHECK(r.tf_filling <= 1.0 + 1e-12);
    CHECK(r.tf_per_volume == doctest::Approx(bound * r.tf_filling).epsilon(1e-12));
    CHECK(r.tf_per_volume <= bound * (1.0 + 1e-12));
  }
  SUBCASE("strain term is C3 (sqrt2/2) rho0 |nu0| per unit mass") {
    CHECK(r.strain_per_volume ==
          doctest::Approx(strain_constant(3) * std::sqrt(0.5) * rho0 * nu.norm() * grid_mass / r.volume).epsilon(1e-12));
    CHECK(r.floor_per_volume == 0.0);
    CHECK(r.width_gradient_per_volume == doctest::Approx(0.0).scale(1.0));
  }
  SUBCASE("nu0 = 0 reduces to the nonmagnetic surrogate") {
    const UegTrial z = build_trial(rho0, Vec3::Zero(), ueg_domain(DomainKind::box, 2.0), 1.0, std::nullopt, 24);
    const EnergyPerVolumeReport e = surrogate_energies(z);
    CHECK(e.gauge_term_per_volume == 0.0);
    CHECK(e.gauge_correction_per_volume == 0.0);
    CHECK(e.strain_per_volume == 0.0);
    CHECK(e.tf_per_volume == doctest::Approx(r.tf_per_volume).epsilon(1e-12));
    CHECK(e.weizsacker_per_volume == doctest::Approx(r.weizsacker_per_volume).epsilon(1e-12));
  }
  SUBCASE("rho0 = 0 gives zero energies") {
    const UegTrial z = build_trial(0.0, nu, ueg_domain(DomainKind::box, 2.0), 1.0, std::nullopt, 12);
    SurrogateOptions opt;
    opt.exchange = true;
    opt.exchange_points = 6;
    const EnergyPerVolumeReport e = surrogate_energies(z, opt);
    CHECK(e.kinetic_per_volume == 0.0);
    CHECK(e.gauge_correction_per_volume == 0.0);
    CHECK(e.exchange_per_volume == 0.0);
    CHECK(e.energy_per_volume == 0.0);
  }
  SUBCASE("report rows") {
    std::istringstream h(EnergyPerVolumeReport::tsv_header()), row(r.tsv_row());
    std::string cell;
    int nh = 0, nr = 0;
    while (std::getline(h, cell, '\t')) ++nh;
    while (std::getline(row, cell, '\t')) ++nr;
    CHECK(nh == nr);
    CHECK(r.to_report().get("surrogate") == "true");
  }
}

TEST_CASE("Weizsacker term per volume halves when l delta doubles") {
  const double s = std::sqrt(2.0);
  const ConvexPolyhedron om = ueg_domain(DomainKind::tetrahedron, 2.0);
  const UegTrial a = build_trial(1.0, Vec3(0, 0, 1), om, 1.0, std::nullopt, 24);
  const UegTrial b = build_trial(1.0, Vec3(0, 0, 1), om.scaled(s), s, scaled_grid(a.grid(), s));
  const EnergyPerVolumeReport ra = surrogate_energies(a), rb = surrogate_energies(b);
  CHECK(rb.weizsacker_per_volume / ra.weizsacker_per_volume == doctest::Approx(0.5).epsilon(1e-8));
  CHECK(rb.tf_per_volume == doctest::Approx(ra.tf_per_volume).epsilon(1e-8));
}

TEST_CASE("isometry identity of the kinetic bound") {
  const ConvexPolyhedron om = ueg_domain(DomainKind::tetrahedron, 2.0);
  const UegTrial t = build_trial(1.0, Vec3(0.2, -0.3, 1.0), om, 2.0, std::nullopt, 32);

  SUBCASE("identity map") {
    const IsometryCheck c = isometry_identity_check(t, Mat3::Identity(), Vec3::Zero());
    CHECK(c.grid_exact);
    CHECK(c.discrepancy <= 1e-10);
    CHECK(c.predicted_offset == 0.0);
    CHECK(c.pass);
  }
  SUBCASE("cube rotation with vorticity rotated along") {
    const TetraDecomposition dec;
    for (int j : {5, 13, 22}) {
      const IsometryCheck c = isometry_identity_check(t, dec.rotation(j), Vec3::Zero());
      CHECK(c.grid_exact);
      CHECK(c.discrepancy <= 1e-10);
    }
    Mat3 reflection = Mat3::Identity();
    reflection(1, 1) = -1.0;
    CHECK(isometry_identity_check(t, reflection, Vec3::Zero()).discrepancy <= 1e-10);
  }
  SUBCASE("general rotation is compared on a fresh grid") {
    const Mat3 r = Eigen::AngleAxisd(0.4, Vec3(1, 2, 2).normalized()).toRotationMatrix();
    const IsometryCheck c = isometry_identity_check(t, r, Vec3::Zero(), {}, 1e-2);
    CHECK_FALSE(c.grid_exact);
    CHECK(std::isfinite(c.discrepancy));
  }
  SUBCASE("preconditions") {
    const UegTrial off = build_trial(1.0, Vec3(0, 0, 1), om.translated(Vec3(0.3, 0, 0)), 2.0, std::nullopt, 8);
    CHECK_THROWS_AS(isometry_identity_check(off, Mat3::Identity(), Vec3::Zero()), DomainError);
    CHECK_THROWS_AS(isometry_identity_check(t, 2.0 * Mat3::Identity(), Vec3::Zero()), DomainError);
  }
}

TEST_CASE("translation offset matches (rho0/4)|R nu0 x a|^2 times the mass") {
  const ConvexPolyhedron om = ueg_domain(DomainKind::tetrahedron, 2.0);
  const UegTrial t = build_trial(1.0, Vec3(0, 0, 1), om, 2.0, std::nullopt, 64);
  const TetraDecomposition dec;
  for (const Mat3& r : {Mat3(Mat3::Identity()), dec.rotation(7)}) {
    const IsometryCheck c = isometry_identity_check(t, r, 3.0 * Vec3(0.6, -0.4, 1.0));
    CHECK(c.grid_exact);
    CHECK(c.predicted_offset > 0.0);
    CHECK(c.offset_error <= 1e-6);
    CHECK(c.barycentre_error <= 1e-8);
    CHECK(c.pass);
  }
  // The grid gauge term on the same resolved layer agrees with the moment formula.
  const BoundTerms bt = bound_terms(t.density(), t.decomposition(), {}, t.grid());
  CHECK(bt.gauge_term / t.volume() == doctest::Approx(t.gauge_correction_per_volume()).epsilon(1e-6));
}

TEST_CASE("gauge rule on the constructed trial state") {
  const UegTrial t = build_trial(1.0, Vec3(0, 0, 1), ueg_domain(DomainKind::box, 2.0), 1.0, std::nullopt, 8);
  auto gamma = build_rdm(t.density(), t.decomposition(), {});
  Mat3 q = Mat3::Zero();
  q(0, 1) = q(1, 0) = 0.5;
  const GaugeFunction gf = GaugeFunction::quadratic(q, Vec3(0.2, 0.0, -0.1));
  const GridSpec g = GridSpec::box(3, -0.8, 0.8, 6);
  ObservableOptions opt;
  opt.full_tensor = false;
  const RdmObservables o0 = kernel_fd_observables(*gamma, g, opt);
  const RdmObservables o1 = gauge_transform(gamma, gf)->observables(g, opt);
  const auto& dg = gf.gradient_field(g);
  ScalarField jdg(g), rdg(g);
  double tau_err = 0.0, tau_scale = 0.0;
  for (std::size_t p = 0; p < g.size(); ++p) {
    jdg(p) = o0.jp.vec(p).dot(dg.vec(p));
    rdg(p) = o0.rho(p) * dg.vec(p).squaredNorm();
    tau_err = std::max(tau_err, std::abs(o1.tau(p) - (o0.tau(p) - 2.0 * jdg(p) + rdg(p))));
    tau_scale = std::max(tau_scale, o0.tau(p));
  }
  CHECK(tau_err / tau_scale < 1e-8);
  CHECK(o1.kinetic_energy ==
        doctest::Approx(o0.kinetic_energy - 2.0 * integrate(jdg) + integrate(rdg)).epsilon(1e-8));
}

TEST_CASE("exchange refinement") {
  const UegTrial t = build_trial(1.0, Vec3(0, 0, 1), ueg_domain(DomainKind::box, 2.0), 1.0, std::nullopt, 8);
  SurrogateOptions opt;
  opt.exchange = true;
  opt.exchange_points = 6;
  const EnergyPerVolumeReport r = surrogate_energies(t, opt);
  CHECK(r.exchange_computed);
  CHECK(r.exchange_per_volume > 0.0);
  CHECK(r.energy_per_volume ==
        doctest::Approx(r.kinetic_per_volume - r.gauge_correction_per_volume - r.exchange_per_volume).epsilon(1e-12));
  opt.exchange_points = 25;
  CHECK_THROWS_AS(surrogate_energies(t, opt), DomainError);
}

TEST_CASE("width policy") {
  CHECK(policy_delta(DeltaPolicy::fixed, 0.7, 8.0, 2.0) == 0.7);
  CHECK(policy_delta(DeltaPolicy::thermodynamic, 0.0, 8.0, 1.0) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(policy_delta(DeltaPolicy::thermodynamic, 0.0, 1.0, 512.0) == doctest::Approx(std::pow(2.0, -4.0)).epsilon(1e-14));
  CHECK_THROWS_AS(policy_delta(DeltaPolicy::thermodynamic, 0.0, 1.0, 0.0), DomainError);
}

TEST_CASE("resolving grid size") {
  const ConvexPolyhedron om = ueg_domain(DomainKind::tetrahedron, 8.0);
  for (double ratio : {0.5, 1.0, 3.0}) {
    const int n = resolving_points(om, 1.0, ratio);
    const double r = Mollifier(1.0).radius();
    const GridSpec g = covering_grid(om, 1.0, n);
    const GridSpec coarser = covering_grid(om, 1.0, n - 1);
    CHECK(*std::max_element(g.spacing.begin(), g.spacing.end()) <= ratio * r);
    CHECK(*std::max_element(coarser.spacing.begin(), coarser.spacing.end()) > ratio * r);
  }
  CHECK_THROWS_AS(resolving_points(om, 0.0), DomainError);
}
