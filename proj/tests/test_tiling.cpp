#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>

#include "doctest.h"
#include "mueg/errors.hpp"
#include "mueg/fields/integrate.hpp"
#include "mueg/fields/quadrature.hpp"
#include "mueg/tiling/tiling.hpp"

using namespace mueg;

namespace {

// Composite Gauss-Legendre with 400 panels of 16 nodes.
double composite(const std::function<double(double)>& f, double a, double b) {
  static const QuadratureRule g = gauss_legendre(16);
  const int panels = 400;
  double s = 0.0;
  for (int p = 0; p < panels; ++p) {
    const double lo = a + (b - a) * p / panels, hi = a + (b - a) * (p + 1) / panels;
    for (int i = 0; i < g.order(); ++i) s += 0.5 * (hi - lo) * g.weights[i] * f(0.5 * (lo + hi) + 0.5 * (hi - lo) * g.nodes[i]);
  }
  return s;
}

// Mass of the unit bump in the half-space {y_3 <= h}: 2 pi int eta(r) r (min(r, h) + r)_+ dr.
double half_space_profile(double h) {
  auto f = [h](double r) { return bump::density(r) * r * std::max(0.0, std::min(r, h) + r); };
  const double k = std::clamp(std::abs(h), 0.0, 1.0);
  return 2.0 * std::numbers::pi * (composite(f, 0.0, k) + composite(f, k, 1.0));
}

// Brute-force convolution: for each direction the ray from x is clipped against every face and the radial
// mass of the bump inside the clipped segment is accumulated. Product Gauss-Legendre over the sphere.
double ray_convolution(const ConvexPolyhedron& omega, const Mollifier& m, const Vec3& x, int n) {
  const double e = m.radius();
  const QuadratureRule mu = gauss_legendre(n, -1.0, 1.0);
  double total = 0.0;
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < 2 * n; ++k) {
      const double phi = std::numbers::pi * (k + 0.5) / n, st = std::sqrt(1.0 - mu.nodes[j] * mu.nodes[j]);
      const Vec3 w(st * std::cos(phi), st * std::sin(phi), mu.nodes[j]);
      double lo = 0.0, hi = e;
      for (const auto& p : omega.planes()) {
        const double depth = p.depth(x), rate = p.n.dot(w);
        if (std::abs(rate) < 1e-300) {
          if (depth < 0.0) hi = -1.0;
        } else if (rate > 0.0) {
          hi = std::min(hi, depth / rate);
        } else {
          lo = std::max(lo, depth / rate);
        }
      }
      if (hi > lo) total += mu.weights[j] * (std::numbers::pi / n) * (bump::radial_mass(hi / e) - bump::radial_mass(lo / e));
    }
  return total;
}

Vec3 random_unit(std::mt19937_64& rng) {
  std::normal_distribution<double> n;
  return Vec3(n(rng), n(rng), n(rng)).normalized();
}

std::vector<double> sorted_edges(const std::array<Vec3, 4>& v) {
  std::vector<double> e;
  for (int i = 0; i < 4; ++i)
    for (int k = i + 1; k < 4; ++k) e.push_back((v[i] - v[k]).norm());
  std::sort(e.begin(), e.end());
  return e;
}

}  // namespace

TEST_CASE("decomposition of the cube into 24 congruent tetrahedra") {
  const TetraDecomposition dec;
  const auto ref = dec.reference_polyhedron();
  CHECK(ref.barycenter().norm() < 1e-15);
  const auto edges = sorted_edges(dec.reference());
  for (int j = 0; j < 24; ++j) {
    const Mat3& r = dec.rotation(j);
    CHECK((r * r.transpose() - Mat3::Identity()).norm() < 1e-15);
    CHECK(r.determinant() == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(dec.shift(j).cwiseAbs().maxCoeff() < 0.5);
    const auto t = dec.tetrahedron(j);
    CHECK(t.volume() == doctest::Approx(1.0 / 24.0).epsilon(1e-14));
    const auto e = sorted_edges(dec.vertices(j));
    for (std::size_t i = 0; i < e.size(); ++i) CHECK(std::abs(e[i] - edges[i]) < 1e-12);
    for (const auto& v : dec.vertices(j)) CHECK(v.cwiseAbs().maxCoeff() <= 0.5 + 1e-15);
    // T_j Delta = R_j Delta - z_j has barycentre -z_j.
    CHECK((t.barycenter() + dec.shift(j)).norm() < 1e-15);
    for (int k = 0; k < j; ++k) CHECK((dec.rotation(k) - r).norm() > 0.5);
  }
  SUBCASE("every sample lies in exactly one tetrahedron") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(-0.5, 0.5);
    int checked = 0;
    for (int i = 0; i < 100000; ++i) {
      const Vec3 x(u(rng), u(rng), u(rng));
      int inside = 0, owner = -1;
      bool face = false;
      for (int j = 0; j < 24; ++j) {
        const auto b = dec.barycentric(j, x);
        const double m = *std::min_element(b.begin(), b.end());
        if (m > 1e-14) {
          ++inside;
          owner = j;
        } else if (m >= -1e-14) {
          face = true;
        }
      }
      if (face) continue;
      ++checked;
      CHECK(inside == 1);
      CHECK(dec.locate(x).second == owner);
    }
    CHECK(checked > 99990);
  }
  SUBCASE("OFF export") {
    std::ostringstream os;
    write_off(os, dec, 2.0);
    std::istringstream is(os.str());
    std::string head;
    int nv = 0, nf = 0, ne = 0;
    is >> head >> nv >> nf >> ne;
    CHECK(head == "OFF");
    CHECK(nv == 96);
    CHECK(nf == 96);
  }
}

TEST_CASE("Monte-Carlo coverage and overlap") {
  const TetraDecomposition dec;
  const auto mc = tiling_monte_carlo(dec, 200000, 11);
  CHECK(mc.pass);
  CHECK(mc.covered == mc.samples);
  CHECK(mc.overlapped == 0);
  CHECK(mc.volume_z_threshold == doctest::Approx(3.9).epsilon(0.02));
  std::size_t total = 0;
  for (auto c : mc.counts) total += c;
  CHECK(total == mc.samples);
  CHECK(tiling_monte_carlo(dec, 200000, 11).counts == mc.counts);
}

TEST_CASE("indicator partition of unity") {
  const TetraDecomposition dec;
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-10.0, 10.0);
  for (double l : {1.0, 0.37, 5.0}) {
    for (int i = 0; i < 500; ++i) {
      const Vec3 x(u(rng), u(rng), u(rng));
      const auto s = pou_indicator_sum(x, dec, l);
      if (s.on_face) continue;
      CHECK(s.value == 1.0);
      const auto t = pou_indicator_sum(x + l * Vec3(3, -2, 7), dec, l);
      CHECK(t.value == s.value);
    }
  }
  // Points on the planes u_a = u_b separate neighbouring tetrahedra.
  CHECK(pou_indicator_sum(Vec3(0.3, 0.3, 0.1), dec, 1.0).on_face);
  CHECK(pou_indicator_sum(Vec3(0.5, 0.2, 0.1), dec, 1.0).on_face);
  CHECK_THROWS_AS(pou_indicator_sum(Vec3::Zero(), dec, 0.0), DomainError);
}

TEST_CASE("unit bump tables") {
  CHECK(4.0 * std::numbers::pi * bump::radial_mass(1.0) == doctest::Approx(1.0).epsilon(1e-14));
  for (double r : {0.05, 0.3, 0.61, 0.9, 0.99}) {
    const double f = composite([](double t) { return bump::density(t) * t * t; }, 0.0, r);
    CHECK(std::abs(bump::radial_mass(r) - f) < 1e-15);
    // Integration by parts: K(r) = -F(r)/r + int_0^r eta(s) s ds.
    const double k = -f / r + composite([](double t) { return bump::density(t) * t; }, 0.0, r);
    CHECK(std::abs(bump::radial_potential(r) - k) < 1e-14);
  }
  const Mollifier m(0.4);
  CHECK(m.radius() == doctest::Approx(0.04));
  CHECK(m.value(Vec3(0.041, 0, 0)) == 0.0);
  CHECK(m.mass() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(m.first_moment().norm() < 1e-15);
  CHECK_THROWS_AS(Mollifier(0.0), DomainError);
}

TEST_CASE("smeared indicator against a half-space profile") {
  // Near the centre of one face of a large box the other faces are outside the support.
  const auto box = ConvexPolyhedron::box(Vec3(-50, -50, -50), Vec3(50, 50, 50));
  const Mollifier m(1.0);
  for (double h : {-0.099, -0.07, -0.031, 0.0, 0.012, 0.05, 0.0999}) {
    const Vec3 x(0.3, -0.2, 50.0 - h);
    CHECK(std::abs(m.smeared_indicator(box, x) - half_space_profile(h / m.radius())) < 1e-12);
  }
}

TEST_CASE("smeared indicator against ray-clipping quadrature near edges and corners") {
  const TetraDecomposition dec;
  const auto tet = dec.tetrahedron(5, 1.0);
  const Mollifier m(0.5);
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  int transitions = 0;
  for (int i = 0; i < 12; ++i) {
    // Points within the support radius of a vertex or of an edge midpoint.
    const auto v = dec.vertices(5, 1.0);
    const Vec3 anchor = i % 2 ? v[i % 4] : 0.5 * (v[i % 4] + v[(i + 1) % 4]);
    const Vec3 x = anchor + 0.9 * m.radius() * u(rng) * random_unit(rng);
    if (m.classify(tet, x) != SmearCase::transition) continue;
    ++transitions;
    const double a = m.smeared_indicator(tet, x);
    // The ray rule converges slowly near vertices (first order in the angular step); 1600 nodes reach 1e-5.
    const double b = ray_convolution(tet, m, x, 1600);
    CHECK(std::abs(a - b) < 1e-5);
    CHECK(a >= -1e-14);
    CHECK(a <= 1.0 + 1e-14);
  }
  CHECK(transitions >= 8);
}

TEST_CASE("gradient of the smeared indicator against central differences") {
  const TetraDecomposition dec;
  const ConvexPolyhedron om = dec.reference_polyhedron(2.0);
  const Mollifier m(1.0);
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  int n = 0;
  double worst = 0.0;
  while (n < 40) {
    const Vec3 x(u(rng), u(rng), u(rng));
    if (m.classify(om, x) != SmearCase::transition) {
      CHECK(m.smeared_indicator_gradient(om, x).norm() == 0.0);
      continue;
    }
    ++n;
    const double h = 1e-4;
    Vec3 fd;
    for (int a = 0; a < 3; ++a) {
      const Vec3 e = h * Vec3::Unit(a);
      fd[a] = (8.0 * (m.smeared_indicator(om, x + e) - m.smeared_indicator(om, x - e)) -
               (m.smeared_indicator(om, x + 2.0 * e) - m.smeared_indicator(om, x - 2.0 * e))) /
              (12.0 * h);
    }
    worst = std::max(worst, (m.smeared_indicator_gradient(om, x) - fd).norm() / std::max(1.0, fd.norm()));
  }
  CHECK(worst < 1e-8);
}

TEST_CASE("case classifier agrees with the computed value") {
  const auto box = ConvexPolyhedron::box(Vec3(-1, -0.5, -0.3), Vec3(1, 0.5, 0.3));
  const Mollifier m(0.5);
  const double r = m.radius();
  // Just inside the threshold both sides must give the same value.
  for (const Vec3& x : {Vec3(0, 0, 0.3 - r * (1 + 1e-9)), Vec3(0, 0, 0.3 + r * (1 + 1e-9)), Vec3(1 + 1.01 * r, 0.5, 0.3)}) {
    const auto c = m.classify(box, x);
    CHECK(c != SmearCase::transition);
  }
  for (const Vec3& x : {Vec3(0, 0, 0.3 - r * (1 - 1e-9)), Vec3(0, 0, 0.3 + r * (1 - 1e-9))}) {
    CHECK(m.classify(box, x) == SmearCase::transition);
    const double v = m.smeared_indicator(box, x);
    CHECK((v < 1e-9 || v > 1.0 - 1e-9));
  }
}

TEST_CASE("mass of the smeared tetrahedron by grid integration") {
  const TetraDecomposition dec;
  const auto tet = dec.reference_polyhedron(1.0);
  const Mollifier m(1.0);
  const auto [lo, hi] = tet.bounding_box();
  double prev = 0.0;
  for (int n : {48, 96}) {
    const double pad = 0.15;
    const GridSpec g = GridSpec::box(Vec3(lo.array() - pad), Vec3(hi.array() + pad), {n, n, n});
    const ScalarField f = m.smeared_indicator(tet, g);
    double s = 0.0;
    for (std::size_t p = 0; p < g.size(); ++p) s += f(p);
    s *= g.cell_volume();
    const double err = std::abs(s - tet.volume()) / tet.volume();
    MESSAGE("n = " << n << " relative mass error " << err);
    if (n == 96) CHECK(err < 1e-6);
    prev = err;
  }
  CHECK(prev < 1e-6);
}

TEST_CASE("smeared moments by Fubini") {
  const TetraDecomposition dec;
  const auto tet = dec.reference_polyhedron(3.0);
  const Mollifier m(0.8);
  const auto mom = smeared_moments(tet, m);
  CHECK(mom.mass == doctest::Approx(tet.volume()).epsilon(1e-12));
  // Barycentre zero survives smearing.
  CHECK(mom.first.norm() < 1e-8 * tet.volume() * tet.diameter());
  CHECK((mom.second - tet.second_moment() - tet.volume() * m.second_moment()).norm() < 1e-12 * mom.second.norm());
  // The mollifier second moment is isotropic.
  const Mat3 m2 = m.second_moment();
  CHECK((m2 - m2.trace() / 3.0 * Mat3::Identity()).norm() < 1e-15);
  const auto off = tet.translated(Vec3(1, 2, -1));
  CHECK((smeared_moments(off, m).first - off.volume() * off.barycenter()).norm() < 1e-12 * off.volume() * off.diameter());
}

TEST_CASE("cutoff scaling relation") {
  const TetraDecomposition dec;
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const double l = 2.0, delta = 0.6;
  const auto tet = dec.reference_polyhedron(l);
  int tested = 0;
  for (int i = 0; i < 40 && tested < 20; ++i) {
    const double a = 0.2 + 4.0 * u(rng);
    const Vec3 x = tet.vertices()[i % 4] * (0.8 + 0.4 * u(rng)) + 0.05 * random_unit(rng);
    const double ref = Mollifier(delta).smeared_indicator(tet, x);
    const double scaled = Mollifier(delta / a).smeared_indicator(dec.reference_polyhedron(l / a), x / a);
    if (ref > 0.0 && ref < 1.0) ++tested;
    CHECK(std::abs(ref - scaled) <= 1e-10);
  }
  CHECK(tested >= 10);
}

TEST_CASE("regularized partition of unity") {
  const TetraDecomposition dec;
  SUBCASE("quadrature") {
    for (double l : {1.0, 3.0})
      for (double delta : {0.1, 0.5})
        for (const Vec3& x : {Vec3(0.1, 0.2, 0.3), Vec3(-2.0, 0.7, 5.5)}) {
          const auto a = pou_regularized_average(x, dec, l, delta);
          CHECK(std::abs(a.value - 1.0) < 1e-8);
        }
  }
  SUBCASE("Monte-Carlo over translations") {
    const auto a = pou_regularized_average(Vec3(0.11, -0.23, 0.05), dec, 1.0, 0.4, AverageMethod::monte_carlo, 3000, 9);
    MESSAGE("Monte-Carlo average " << a.value << " +- " << a.standard_error);
    CHECK(a.standard_error > 0.0);
    CHECK(std::abs(a.value - 1.0) < 4.0 * a.standard_error);
    const auto b = pou_regularized_average(Vec3(0.11, -0.23, 0.05), dec, 1.0, 0.4, AverageMethod::monte_carlo, 3000, 9);
    CHECK(a.value == b.value);
  }
  SUBCASE("pointwise sum is bounded and integrates to the cell volume") {
    // Each shrunken tetrahedron, rescaled by (1 - delta/l)^{-3}, carries volume |l Delta|.
    const double l = 1.0, delta = 0.5, s = 1.0 - delta / l;
    CHECK(pou_regularized_sum(Vec3(0.0, 0.0, 0.0), dec, l, delta) <= 1.0 / (s * s * s) + 1e-12);
  }
  CHECK_THROWS_AS(pou_regularized_average(Vec3::Zero(), dec, 1.0, 0.6), DomainError);
}

TEST_CASE("index classification") {
  const TetraDecomposition dec;
  const double l = 1.0, delta = 0.1, dt = 0.1;
  SUBCASE("inner volume fraction of large tetrahedra") {
    std::vector<double> fitted;
    for (double lp : {32.0, 64.0, 128.0}) {
      const auto target = dec.reference_polyhedron(lp);
      const auto c = classify_indices(target, dec, l, delta, dt);
      CHECK(c.j_inner.size() <= c.j_all.size());
      CHECK(c.band_reach <= l + delta + dt);
      const double frac = c.inner_volume / c.target_volume;
      CHECK(frac <= 1.0);
      fitted.push_back((1.0 - frac) * lp / (l + delta + dt));
      MESSAGE("l' = " << lp << " inner fraction " << frac << " fitted C " << fitted.back());
    }
    for (std::size_t i = 1; i < fitted.size(); ++i) CHECK(std::abs(fitted[i] / fitted[i - 1] - 1.0) < 0.25);
  }
  SUBCASE("J_0 shrinks as the target margin grows") {
    const auto target = dec.reference_polyhedron(12.0);
    std::size_t prev = SIZE_MAX;
    for (double d : {0.0, 0.5, 1.0, 2.0}) {
      const auto c = classify_indices(target, dec, l, delta, d);
      CHECK(c.j_inner.size() <= prev);
      prev = c.j_inner.size();
    }
  }
  SUBCASE("target smaller than a cell") {
    const auto c = classify_indices(dec.reference_polyhedron(0.5), dec, l, delta, dt);
    CHECK(c.j_inner.empty());
    CHECK(!c.j_all.empty());
  }
  SUBCASE("boundary band of scaled convex bodies grows like the surface") {
    std::vector<double> ratio;
    for (double s : {6.0, 12.0, 24.0}) {
      const auto target = ConvexPolyhedron::box(Vec3(-s, -0.7 * s, -0.5 * s), Vec3(s, 0.7 * s, 0.5 * s));
      const auto c = classify_indices(target, dec, l, delta, dt);
      ratio.push_back(c.band_volume / std::pow(c.target_volume, 2.0 / 3.0));
    }
    const auto [mn, mx] = std::minmax_element(ratio.begin(), ratio.end());
    MESSAGE("band / volume^(2/3): " << ratio[0] << " " << ratio[1] << " " << ratio[2]);
    CHECK(*mx / *mn < 1.5);
  }
}
