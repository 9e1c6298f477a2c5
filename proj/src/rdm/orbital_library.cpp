#include "mueg/rdm/orbital_library.hpp"

#include <algorithm>
#include <random>

#include <Eigen/Cholesky>

#include "mueg/fields/integrate.hpp"

namespace mueg {

namespace {

// dot() would conjugate its first argument; the coefficients are used unconjugated.
cplx polynomial(const GaussianOrbitalSpec& s, const CVec3& y) {
  return s.p0 + (s.p1.transpose() * y)(0) + (y.transpose() * s.p2 * y)(0);
}

}  // namespace

Orbital gaussian_orbital(const GaussianOrbitalSpec& s) {
  const Mat3 a = 0.5 * (s.precision + s.precision.transpose());
  const CMat3 q = s.p2 + s.p2.transpose();
  Orbital o;
  o.value = [s, a](const Vec3& x) {
    const Vec3 y = x - s.center;
    return polynomial(s, y.cast<cplx>()) * std::exp(-0.5 * y.dot(a * y)) * std::polar(1.0, s.wavevector.dot(x));
  };
  o.gradient = [s, a, q](const Vec3& x) -> CVec3 {
    const Vec3 y = x - s.center;
    const CVec3 yc = y.cast<cplx>();
    const cplx poly = polynomial(s, yc);
    const CVec3 dpoly = s.p1 + q * yc;
    const cplx env = std::exp(-0.5 * y.dot(a * y)) * std::polar(1.0, s.wavevector.dot(x));
    return env * (dpoly - (a * y).cast<cplx>() * poly + cplx(0.0, 1.0) * s.wavevector.cast<cplx>() * poly);
  };
  return o;
}

std::vector<Orbital> orthonormalize(const std::vector<Orbital>& orbitals, const GridSpec& g) {
  const std::size_t n = orbitals.size();
  const auto w = grid_weights(g);
  std::vector<std::vector<cplx>> v(n, std::vector<cplx>(g.size()));
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t p = 0; p < g.size(); ++p) v[k][p] = orbitals[k].value(g.point(p));
  Eigen::MatrixXcd s(n, n);
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t l = 0; l < n; ++l) {
      cplx acc = 0.0;
      for (std::size_t p = 0; p < g.size(); ++p) acc += w[p] * std::conj(v[k][p]) * v[l][p];
      s(k, l) = acc;
    }
  Eigen::LLT<Eigen::MatrixXcd> llt(s);
  if (llt.info() != Eigen::Success) throw NumericalError("orbital overlap matrix is not positive definite");
  const Eigen::MatrixXcd linv = llt.matrixL().solve(Eigen::MatrixXcd::Identity(n, n));
  const Eigen::MatrixXcd c = linv.conjugate();

  std::vector<Orbital> out(n);
  for (std::size_t j = 0; j < n; ++j) {
    std::vector<cplx> coef(n);
    for (std::size_t k = 0; k < n; ++k) coef[k] = c(j, k);
    const bool grads = std::all_of(orbitals.begin(), orbitals.end(), [](const Orbital& o) { return bool(o.gradient); });
    out[j].value = [orbitals, coef](const Vec3& x) {
      cplx s = 0.0;
      for (std::size_t k = 0; k < coef.size(); ++k)
        if (coef[k] != 0.0) s += coef[k] * orbitals[k].value(x);
      return s;
    };
    if (grads)
      out[j].gradient = [orbitals, coef](const Vec3& x) -> CVec3 {
        CVec3 s = CVec3::Zero();
        for (std::size_t k = 0; k < coef.size(); ++k)
          if (coef[k] != 0.0) s += coef[k] * orbitals[k].gradient(x);
        return s;
      };
  }
  return out;
}

std::vector<Orbital> random_orbitals(std::uint64_t seed, int n, const GridSpec& g) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const Vec3 mid = 0.5 * (g.lower() + g.upper());
  std::vector<Orbital> raw;
  for (int j = 0; j < n; ++j) {
    GaussianOrbitalSpec s;
    s.center = mid + 0.8 * Vec3(u(rng), u(rng), u(rng));
    const Eigen::Quaterniond q(u(rng), u(rng), u(rng), u(rng) + 1.5);
    const Mat3 r = q.normalized().toRotationMatrix();
    Vec3 width;
    for (int a = 0; a < 3; ++a) width(a) = 0.75 + 0.2 * u(rng);
    s.precision = r * width.cwiseInverse().cwiseAbs2().asDiagonal() * r.transpose();
    s.wavevector = 1.5 * Vec3(u(rng), u(rng), u(rng));
    s.p0 = 1.0;
    for (int a = 0; a < 3; ++a) s.p1(a) = 0.6 * cplx(u(rng), u(rng));
    for (int a = 0; a < 3; ++a)
      for (int b = a; b < 3; ++b) s.p2(a, b) = s.p2(b, a) = 0.3 * cplx(u(rng), u(rng));
    for (int a = g.dim; a < 3; ++a) {
      s.center(a) = 0.0;
      s.wavevector(a) = 0.0;
    }
    raw.push_back(gaussian_orbital(s));
  }
  return orthonormalize(raw, g);
}

GridSpec corpus_grid() { return GridSpec::box(3, -5.0, 5.0, 36); }

std::shared_ptr<LowRankRdm> random_slater_state(std::uint64_t seed, int n, const GridSpec& g) {
  std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ULL);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> occ(n);
  for (auto& l : occ) l = u(rng);
  return std::make_shared<LowRankRdm>(random_orbitals(seed, n, g), occ);
}

}  // namespace mueg
