#include "mueg/tiling/tiling.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include <boost/math/distributions/normal.hpp>

#include "mueg/errors.hpp"
#include "mueg/fields/parallel.hpp"
#include "mueg/fields/quadrature.hpp"

namespace mueg {

namespace {

// (face axis, face sign, edge axis, edge sign) of tetrahedron j.
struct Flag {
  int a, sa, b, sb;
};

std::array<Flag, 24> flags() {
  std::array<Flag, 24> f{};
  int j = 0;
  for (int a = 0; a < 3; ++a)
    for (int sa : {1, -1})
      for (int k = 1; k <= 2; ++k)
        for (int sb : {1, -1}) f[j++] = {a, sa, (a + k) % 3, sb};
  return f;
}

int flag_index(int a, int sa, int b, int sb) {
  const int k = (b - a + 3) % 3;
  return a * 8 + (sa > 0 ? 0 : 4) + (k - 1) * 2 + (sb > 0 ? 0 : 1);
}

std::array<Vec3, 4> cube_tetrahedron(const Flag& f) {
  const int c = 3 - f.a - f.b;
  Vec3 face = Vec3::Zero();
  face(f.a) = 0.5 * f.sa;
  Vec3 p = face, q = face;
  p(f.b) = q(f.b) = 0.5 * f.sb;
  p(c) = 0.5;
  q(c) = -0.5;
  return {Vec3::Zero(), face, p, q};
}

std::mt19937_64 chunk_rng(std::uint64_t seed, std::size_t chunk) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(chunk), static_cast<std::uint32_t>(chunk >> 32)};
  return std::mt19937_64(seq);
}

constexpr std::size_t kChunk = 1 << 14;

}  // namespace

TetraDecomposition::TetraDecomposition() {
  const auto fl = flags();
  const auto t0 = cube_tetrahedron(fl[0]);
  const Vec3 c0 = (t0[0] + t0[1] + t0[2] + t0[3]) / 4.0;
  for (int i = 0; i < 4; ++i) reference_[i] = t0[i] - c0;
  for (int j = 0; j < count; ++j) {
    Mat3 r = Mat3::Zero();
    r(fl[j].a, 0) = fl[j].sa;
    r(fl[j].b, 1) = fl[j].sb;
    r.col(2) = r.col(0).cross(r.col(1));
    rotations_[j] = r;
    shifts_[j] = -r * c0;
    const auto v = vertices(j);
    Mat3 e;
    e << v[1] - v[0], v[2] - v[0], v[3] - v[0];
    inverse_edges_[j] = e.inverse();
    base_[j] = v[0];
  }
}

std::array<Vec3, 4> TetraDecomposition::vertices(int j, double l, const Vec3& z, double s) const {
  std::array<Vec3, 4> v;
  for (int i = 0; i < 4; ++i) v[i] = l * (rotations_[j] * (s * reference_[i]) - shifts_[j]) + l * z;
  return v;
}

ConvexPolyhedron TetraDecomposition::tetrahedron(int j, double l, const Vec3& z, double s) const {
  return ConvexPolyhedron::tetrahedron(vertices(j, l, z, s));
}

ConvexPolyhedron TetraDecomposition::reference_polyhedron(double l) const {
  return ConvexPolyhedron::tetrahedron({l * reference_[0], l * reference_[1], l * reference_[2], l * reference_[3]});
}

std::array<double, 4> TetraDecomposition::barycentric(int j, const Vec3& x) const {
  const Vec3 l = inverse_edges_[j] * (x - base_[j]);
  return {1.0 - l.sum(), l(0), l(1), l(2)};
}

std::pair<Vec3, int> TetraDecomposition::locate(const Vec3& x, double l) const {
  const Vec3 y = x / l;
  const Vec3 z(std::floor(y(0) + 0.5), std::floor(y(1) + 0.5), std::floor(y(2) + 0.5));
  const Vec3 u = y - z;
  int a = 0;
  for (int i = 1; i < 3; ++i)
    if (std::abs(u(i)) > std::abs(u(a))) a = i;
  const int b1 = (a + 1) % 3, b2 = (a + 2) % 3;
  const int b = std::abs(u(b1)) >= std::abs(u(b2)) ? b1 : b2;
  return {z, flag_index(a, u(a) >= 0 ? 1 : -1, b, u(b) >= 0 ? 1 : -1)};
}

IndicatorSum pou_indicator_sum(const Vec3& x, const TetraDecomposition& dec, double l, double face_tol) {
  if (!(l > 0.0)) throw DomainError("tiling scale must be positive");
  const Vec3 y = x / l;
  const Vec3 c(std::floor(y(0) + 0.5), std::floor(y(1) + 0.5), std::floor(y(2) + 0.5));
  IndicatorSum out;
  for (int dz = -1; dz <= 1; ++dz)
    for (int dy = -1; dy <= 1; ++dy)
      for (int dx = -1; dx <= 1; ++dx) {
        const Vec3 u = y - c - Vec3(dx, dy, dz);
        for (int j = 0; j < TetraDecomposition::count; ++j) {
          const auto b = dec.barycentric(j, u);
          const double m = *std::min_element(b.begin(), b.end());
          if (m > face_tol) {
            ++out.hits;
          } else if (m >= -face_tol) {
            out.on_face = true;
          }
        }
      }
  out.value = out.hits;
  return out;
}

Report TilingMonteCarlo::to_report() const {
  Report r;
  r.add("samples", samples);
  r.add("face_rejects", face_rejects);
  r.add("coverage", coverage);
  r.add("coverage_sigma", coverage_sigma);
  r.add("overlap", overlap);
  r.add("overlap_sigma", overlap_sigma);
  r.add("max_volume_z", max_volume_z);
  r.add("volume_z_threshold", volume_z_threshold);
  r.add("pass", pass);
  return r;
}

TilingMonteCarlo tiling_monte_carlo(const TetraDecomposition& dec, std::size_t samples, std::uint64_t seed) {
  if (samples == 0) throw DomainError("Monte-Carlo needs at least one sample");
  struct Chunk {
    std::size_t rejects = 0, covered = 0, overlapped = 0;
    std::array<std::size_t, 24> counts{};
  };
  const std::size_t chunks = (samples + kChunk - 1) / kChunk;
  std::vector<Chunk> parts(chunks);
  parallel_for(chunks, [&](std::size_t b, std::size_t e) {
    for (std::size_t c = b; c < e; ++c) {
      auto rng = chunk_rng(seed, c);
      std::uniform_real_distribution<double> u(-0.5, 0.5);
      const std::size_t n = std::min(kChunk, samples - c * kChunk);
      Chunk& out = parts[c];
      for (std::size_t i = 0; i < n;) {
        const Vec3 x(u(rng), u(rng), u(rng));
        int hits = 0, last = -1;
        bool face = false;
        for (int j = 0; j < TetraDecomposition::count; ++j) {
          const auto bc = dec.barycentric(j, x);
          const double m = *std::min_element(bc.begin(), bc.end());
          if (m > 1e-14) {
            ++hits;
            last = j;
          } else if (m >= -1e-14) {
            face = true;
          }
        }
        if (face) {
          ++out.rejects;
          continue;
        }
        if (hits >= 1) ++out.covered;
        if (hits >= 2) ++out.overlapped;
        if (hits == 1) ++out.counts[last];
        ++i;
      }
    }
  });
  TilingMonteCarlo r;
  r.samples = samples;
  for (const auto& p : parts) {
    r.face_rejects += p.rejects;
    r.covered += p.covered;
    r.overlapped += p.overlapped;
    for (int j = 0; j < 24; ++j) r.counts[j] += p.counts[j];
  }
  const double n = static_cast<double>(samples);
  r.coverage = r.covered / n;
  r.coverage_sigma = std::sqrt(r.coverage * (1.0 - r.coverage) / n);
  r.overlap = r.overlapped / n;
  r.overlap_sigma = std::sqrt(r.overlap * (1.0 - r.overlap) / n);
  const double p = 1.0 / 24.0, sigma = std::sqrt(p * (1.0 - p) / n);
  for (int j = 0; j < 24; ++j) r.max_volume_z = std::max(r.max_volume_z, std::abs(r.counts[j] / n - p) / sigma);
  const double alpha = 1.0 - std::pow(1.0 - 0.0027, 1.0 / 24.0);
  r.volume_z_threshold = boost::math::quantile(boost::math::normal(), 1.0 - alpha / 2.0);
  // Under exact tiling coverage is 1 and overlap 0 with zero variance, so the 3-sigma band is a point.
  r.pass = r.covered == r.samples && r.overlapped == 0 &&
           r.max_volume_z <= r.volume_z_threshold;
  return r;
}

double pou_regularized_sum(const Vec3& y, const TetraDecomposition& dec, double l, double delta) {
  if (!(delta > 0.0) || delta > 0.5 * l) throw DomainError("regularized partition needs 0 < delta <= l/2");
  const double s = 1.0 - delta / l, c = 1.0 / (s * s * s);
  const Mollifier m(delta);
  double reach = 0.0;
  for (const auto& v : dec.reference()) reach = std::max(reach, v.norm());
  reach = l * s * reach + m.radius();
  const Vec3 yl = y / l;
  const Vec3 cell(std::floor(yl(0) + 0.5), std::floor(yl(1) + 0.5), std::floor(yl(2) + 0.5));
  double sum = 0.0;
  for (int dz = -1; dz <= 1; ++dz)
    for (int dy = -1; dy <= 1; ++dy)
      for (int dx = -1; dx <= 1; ++dx) {
        const Vec3 z = cell + Vec3(dx, dy, dz);
        for (int j = 0; j < TetraDecomposition::count; ++j) {
          const Vec3 centre = l * (z - dec.shift(j));
          if ((y - centre).norm() >= reach) continue;
          sum += c * m.smeared_indicator(dec.tetrahedron(j, l, z, s), y);
        }
      }
  return sum;
}

PouAverage pou_regularized_average(const Vec3& x, const TetraDecomposition& dec, double l, double delta,
                                   AverageMethod method, std::size_t samples, std::uint64_t seed, int order) {
  if (!(delta > 0.0) || delta > 0.5 * l) throw DomainError("regularized partition needs 0 < delta <= l/2");
  PouAverage out;
  if (method == AverageMethod::quadrature) {
    // Unfolding: the tau-average over C_l of the sum over z equals l^{-3} times the integral over R^3,
    // and each integral factorizes into the tetrahedron volume times the mollifier mass.
    const double s = 1.0 - delta / l;
    const double mass = Mollifier(delta).mass(16);
    double total = 0.0;
    for (int j = 0; j < TetraDecomposition::count; ++j) {
      const CubatureRule r = tetrahedron_rule(dec.vertices(j, l, Vec3::Zero(), s), order);
      double vol = 0.0;
      for (double w : r.weights) vol += w;
      total += vol * mass / (s * s * s);
      out.evaluations += r.weights.size();
    }
    out.value = total / (l * l * l);
    return out;
  }
  if (samples < 2) throw DomainError("Monte-Carlo average needs at least two samples");
  const std::size_t chunks = (samples + kChunk - 1) / kChunk;
  std::vector<std::pair<double, double>> parts(chunks, {0.0, 0.0});
  parallel_for(chunks, [&](std::size_t b, std::size_t e) {
    for (std::size_t c = b; c < e; ++c) {
      auto rng = chunk_rng(seed, c);
      std::uniform_real_distribution<double> u(-0.5 * l, 0.5 * l);
      const std::size_t n = std::min(kChunk, samples - c * kChunk);
      for (std::size_t i = 0; i < n; ++i) {
        const Vec3 tau(u(rng), u(rng), u(rng));
        const double v = pou_regularized_sum(x - tau, dec, l, delta);
        parts[c].first += v;
        parts[c].second += v * v;
      }
    }
  });
  double s1 = 0.0, s2 = 0.0;
  for (const auto& p : parts) {
    s1 += p.first;
    s2 += p.second;
  }
  const double n = static_cast<double>(samples);
  out.value = s1 / n;
  out.standard_error = std::sqrt(std::max(0.0, s2 / n - out.value * out.value) / (n - 1.0));
  out.evaluations = samples;
  return out;
}

namespace {

// Separating-axis test between a tetrahedron and the target inflated by r. Conservative: returns
// true unless some face normal or edge-pair direction separates the two by more than r.
bool may_intersect(const std::array<Vec3, 4>& t, const ConvexPolyhedron& target, double r) {
  std::vector<Vec3> axes;
  for (const auto& p : target.planes()) axes.push_back(p.n);
  const auto tp = ConvexPolyhedron::tetrahedron(t);
  for (const auto& p : tp.planes()) axes.push_back(p.n);
  std::vector<Vec3> te, oe;
  for (int i = 0; i < 4; ++i)
    for (int k = i + 1; k < 4; ++k) te.push_back(t[k] - t[i]);
  const auto& v = target.vertices();
  for (const auto& f : target.faces())
    for (std::size_t i = 0; i < f.size(); ++i) oe.push_back(v[f[(i + 1) % f.size()]] - v[f[i]]);
  for (const auto& a : te)
    for (const auto& b : oe) {
      const Vec3 n = a.cross(b);
      if (n.norm() > 1e-12 * a.norm() * b.norm()) axes.push_back(n.normalized());
    }
  for (const auto& n : axes) {
    double tlo = 1e300, thi = -1e300, olo = 1e300, ohi = -1e300;
    for (const auto& p : t) {
      tlo = std::min(tlo, n.dot(p));
      thi = std::max(thi, n.dot(p));
    }
    for (const auto& p : v) {
      olo = std::min(olo, n.dot(p));
      ohi = std::max(ohi, n.dot(p));
    }
    if (tlo > ohi + r || olo > thi + r) return false;
  }
  return true;
}

double boundary_distance(const ConvexPolyhedron& target, const Vec3& x) {
  const double d = target.inner_distance(x);
  return d >= 0.0 ? d : target.distance(x);
}

}  // namespace

Report IndexClassification::to_report() const {
  Report r;
  r.add("l", l);
  r.add("delta", delta);
  r.add("delta_target", delta_target);
  r.add("count_j", j_all.size());
  r.add("count_j0", j_inner.size());
  r.add("target_volume", target_volume);
  r.add("inner_volume", inner_volume);
  r.add("band_volume", band_volume);
  r.add("band_reach", band_reach);
  return r;
}

IndexClassification classify_indices(const ConvexPolyhedron& target, const TetraDecomposition& dec, double l,
                                     double delta, double delta_target) {
  if (!(l > 0.0) || delta < 0.0 || delta_target < 0.0) throw DomainError("invalid classification scales");
  IndexClassification out;
  out.l = l;
  out.delta = delta;
  out.delta_target = delta_target;
  out.target_volume = target.volume();
  const double r = 0.1 * (delta + delta_target);
  const double inner = delta_target + 0.1 * delta;
  auto [lo, hi] = target.bounding_box();
  lo.array() -= r + l;
  hi.array() += r + l;
  std::array<int, 3> zlo{}, zhi{};
  for (int a = 0; a < 3; ++a) {
    zlo[a] = static_cast<int>(std::floor(lo(a) / l - 0.5));
    zhi[a] = static_cast<int>(std::ceil(hi(a) / l + 0.5));
  }
  double reach = 0.0;
  for (const auto& v : dec.reference()) reach = std::max(reach, v.norm());
  reach *= l;
  const double tetra_volume = l * l * l / 24.0;
  for (int k = zlo[2]; k <= zhi[2]; ++k)
    for (int j2 = zlo[1]; j2 <= zhi[1]; ++j2)
      for (int i = zlo[0]; i <= zhi[0]; ++i) {
        const Vec3 z(i, j2, k);
        for (int j = 0; j < TetraDecomposition::count; ++j) {
          const Vec3 centre = l * (z - dec.shift(j));
          const double depth = target.inner_distance(centre);
          if (depth < 0.0 && target.distance(centre) > reach + r) continue;
          const auto v = dec.vertices(j, l, z);
          double vmin = 1e300;
          for (const auto& p : v) vmin = std::min(vmin, target.inner_distance(p));
          const bool in_j = vmin >= 0.0 || may_intersect(v, target, r);
          if (!in_j) continue;
          out.j_all.push_back({{i, j2, k}, j});
          if (vmin >= inner) {
            out.j_inner.push_back({{i, j2, k}, j});
          } else {
            for (const auto& p : v) out.band_reach = std::max(out.band_reach, boundary_distance(target, p));
          }
        }
      }
  out.inner_volume = tetra_volume * out.j_inner.size();
  out.band_volume = tetra_volume * (out.j_all.size() - out.j_inner.size());
  return out;
}

void write_off(std::ostream& os, const TetraDecomposition& dec, double l) {
  os << "OFF\n" << 4 * TetraDecomposition::count << ' ' << 4 * TetraDecomposition::count << " 0\n";
  os.precision(17);
  for (int j = 0; j < TetraDecomposition::count; ++j)
    for (const auto& v : dec.vertices(j, l)) os << v(0) << ' ' << v(1) << ' ' << v(2) << '\n';
  for (int j = 0; j < TetraDecomposition::count; ++j) {
    const int b = 4 * j;
    const auto t = dec.vertices(j, l);
    const bool positive = (t[1] - t[0]).dot((t[2] - t[0]).cross(t[3] - t[0])) > 0.0;
    // Faces listed counter-clockwise seen from outside.
    const int f[4][3] = {{0, 2, 1}, {0, 1, 3}, {0, 3, 2}, {1, 2, 3}};
    for (const auto& face : f) {
      if (positive)
        os << "3 " << b + face[0] << ' ' << b + face[1] << ' ' << b + face[2] << '\n';
      else
        os << "3 " << b + face[0] << ' ' << b + face[2] << ' ' << b + face[1] << '\n';
    }
  }
}

Report decomposition_report(const TetraDecomposition& dec) {
  Report r;
  r.section("decomposition");
  r.add("tetrahedra", TetraDecomposition::count);
  const auto ref = dec.reference_polyhedron();
  r.add("reference_volume", ref.volume());
  r.add("reference_barycenter_norm", ref.barycenter().norm());
  for (int i = 0; i < 4; ++i) {
    const auto& v = dec.reference()[i];
    r.add("reference_vertex_" + std::to_string(i), format_double(v(0)) + " " + format_double(v(1)) + " " + format_double(v(2)));
  }
  for (int j = 0; j < TetraDecomposition::count; ++j) {
    const Vec3& z = dec.shift(j);
    r.add("shift_" + std::to_string(j), format_double(z(0)) + " " + format_double(z(1)) + " " + format_double(z(2)));
  }
  return r;
}

}  // namespace mueg
