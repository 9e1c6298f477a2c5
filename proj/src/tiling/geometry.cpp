#include "mueg/tiling/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "mueg/errors.hpp"
#include "mueg/fields/quadrature.hpp"

namespace mueg {

ConvexPolyhedron::ConvexPolyhedron(std::vector<Vec3> vertices, std::vector<std::vector<int>> faces)
    : vertices_(std::move(vertices)), faces_(std::move(faces)) {
  if (vertices_.size() < 4 || faces_.size() < 4) throw DomainError("polyhedron needs at least 4 vertices and faces");
  for (const auto& f : faces_) {
    if (f.size() < 3) throw DomainError("polyhedron face needs at least 3 vertices");
    for (int i : f)
      if (i < 0 || i >= static_cast<int>(vertices_.size())) throw DomainError("face index out of range");
  }
  orient();
}

void ConvexPolyhedron::orient() {
  Vec3 inside = Vec3::Zero();
  for (const auto& v : vertices_) inside += v;
  inside /= static_cast<double>(vertices_.size());
  planes_.clear();
  for (auto& f : faces_) {
    Vec3 n = Vec3::Zero();
    for (std::size_t i = 0; i < f.size(); ++i) n += vertices_[f[i]].cross(vertices_[f[(i + 1) % f.size()]]);
    if (n.norm() < 1e-300) throw DomainError("degenerate polyhedron face");
    n.normalize();
    double c = n.dot(vertices_[f[0]]);
    if (c - n.dot(inside) < 0.0) {
      std::reverse(f.begin(), f.end());
      n = -n;
      c = -c;
    }
    if (!(c - n.dot(inside) > 0.0)) throw DomainError("degenerate polyhedron");
    planes_.push_back({n, c});
  }
}

ConvexPolyhedron ConvexPolyhedron::tetrahedron(const std::array<Vec3, 4>& v) {
  return ConvexPolyhedron({v[0], v[1], v[2], v[3]}, {{0, 1, 2}, {0, 1, 3}, {0, 2, 3}, {1, 2, 3}});
}

ConvexPolyhedron ConvexPolyhedron::box(const Vec3& lo, const Vec3& hi) {
  std::vector<Vec3> v;
  for (int k = 0; k < 2; ++k)
    for (int j = 0; j < 2; ++j)
      for (int i = 0; i < 2; ++i) v.emplace_back(i ? hi.x() : lo.x(), j ? hi.y() : lo.y(), k ? hi.z() : lo.z());
  return ConvexPolyhedron(v, {{0, 2, 3, 1}, {4, 5, 7, 6}, {0, 1, 5, 4}, {2, 6, 7, 3}, {0, 4, 6, 2}, {1, 3, 7, 5}});
}

namespace {

// Fan of tetrahedra (apex, face triangle) covering the body.
template <class F>
void for_each_tetrahedron(const std::vector<Vec3>& v, const std::vector<std::vector<int>>& faces, F&& f) {
  const Vec3& apex = v[0];
  for (const auto& face : faces)
    for (std::size_t i = 1; i + 1 < face.size(); ++i) {
      const std::array<Vec3, 4> t{apex, v[face[0]], v[face[i]], v[face[i + 1]]};
      const double vol = (t[1] - t[0]).dot((t[2] - t[0]).cross(t[3] - t[0])) / 6.0;
      f(t, vol);
    }
}

}  // namespace

double ConvexPolyhedron::volume() const {
  double s = 0.0;
  for_each_tetrahedron(vertices_, faces_, [&](const auto&, double vol) { s += vol; });
  return s;
}

Vec3 ConvexPolyhedron::barycenter() const {
  Vec3 m = Vec3::Zero();
  double s = 0.0;
  for_each_tetrahedron(vertices_, faces_, [&](const auto& t, double vol) {
    m += vol * (t[0] + t[1] + t[2] + t[3]) / 4.0;
    s += vol;
  });
  return m / s;
}

Mat3 ConvexPolyhedron::second_moment() const {
  Mat3 m = Mat3::Zero();
  for_each_tetrahedron(vertices_, faces_, [&](const auto& t, double vol) {
    Vec3 sum = Vec3::Zero();
    Mat3 outer = Mat3::Zero();
    for (const auto& p : t) {
      sum += p;
      outer += p * p.transpose();
    }
    m += vol / 20.0 * (outer + sum * sum.transpose());
  });
  return m;
}

double ConvexPolyhedron::diameter() const {
  double d = 0.0;
  for (const auto& a : vertices_)
    for (const auto& b : vertices_) d = std::max(d, (a - b).norm());
  return d;
}

std::pair<Vec3, Vec3> ConvexPolyhedron::bounding_box() const {
  Vec3 lo = vertices_[0], hi = vertices_[0];
  for (const auto& v : vertices_) {
    lo = lo.cwiseMin(v);
    hi = hi.cwiseMax(v);
  }
  return {lo, hi};
}

double ConvexPolyhedron::inner_distance(const Vec3& x) const {
  double d = std::numeric_limits<double>::infinity();
  for (const auto& p : planes_) d = std::min(d, p.depth(x));
  return d;
}

double ConvexPolyhedron::distance(const Vec3& x) const {
  if (contains(x)) return 0.0;
  double d = std::numeric_limits<double>::infinity();
  for (std::size_t f = 0; f < faces_.size(); ++f) {
    if (planes_[f].depth(x) >= 0.0) continue;
    const auto& face = faces_[f];
    for (std::size_t i = 1; i + 1 < face.size(); ++i)
      d = std::min(d, (x - closest_point_on_triangle(x, vertices_[face[0]], vertices_[face[i]], vertices_[face[i + 1]]))
                          .norm());
  }
  return d;
}

ConvexPolyhedron ConvexPolyhedron::transformed(const Mat3& a, const Vec3& b) const {
  if (!(std::abs(a.determinant()) > 0.0)) throw DomainError("singular polyhedron map");
  std::vector<Vec3> v;
  v.reserve(vertices_.size());
  for (const auto& p : vertices_) v.push_back(a * p + b);
  return ConvexPolyhedron(std::move(v), faces_);
}

Vec3 closest_point_on_triangle(const Vec3& p, const Vec3& a, const Vec3& b, const Vec3& c) {
  const Vec3 ab = b - a, ac = c - a, ap = p - a;
  const double d1 = ab.dot(ap), d2 = ac.dot(ap);
  if (d1 <= 0.0 && d2 <= 0.0) return a;
  const Vec3 bp = p - b;
  const double d3 = ab.dot(bp), d4 = ac.dot(bp);
  if (d3 >= 0.0 && d4 <= d3) return b;
  const double vc = d1 * d4 - d3 * d2;
  if (vc <= 0.0 && d1 >= 0.0 && d3 <= 0.0) return a + d1 / (d1 - d3) * ab;
  const Vec3 cp = p - c;
  const double d5 = ab.dot(cp), d6 = ac.dot(cp);
  if (d6 >= 0.0 && d5 <= d6) return c;
  const double vb = d5 * d2 - d1 * d6;
  if (vb <= 0.0 && d2 >= 0.0 && d6 <= 0.0) return a + d2 / (d2 - d6) * ac;
  const double va = d3 * d6 - d5 * d4;
  if (va <= 0.0 && (d4 - d3) >= 0.0 && (d5 - d6) >= 0.0) return b + (d4 - d3) / ((d4 - d3) + (d5 - d6)) * (c - b);
  const double denom = 1.0 / (va + vb + vc);
  return a + ab * (vb * denom) + ac * (vc * denom);
}

CubatureRule tetrahedron_rule(const std::array<Vec3, 4>& v, int order) {
  const QuadratureRule g = gauss_legendre(order, 0.0, 1.0);
  const Vec3 e1 = v[1] - v[0], e2 = v[2] - v[0], e3 = v[3] - v[0];
  const double jac = std::abs(e1.dot(e2.cross(e3)));
  CubatureRule r;
  for (int i = 0; i < order; ++i)
    for (int j = 0; j < order; ++j)
      for (int k = 0; k < order; ++k) {
        const double u = g.nodes[i], s = g.nodes[j], t = g.nodes[k];
        // (u, s, t) in the cube -> barycentric (a, b, c) in the unit simplex.
        const double a = u, b = (1.0 - u) * s, c = (1.0 - u) * (1.0 - s) * t;
        r.nodes.push_back(v[0] + a * e1 + b * e2 + c * e3);
        r.weights.push_back(g.weights[i] * g.weights[j] * g.weights[k] * (1.0 - u) * (1.0 - u) * (1.0 - s) * jac);
      }
  return r;
}

}  // namespace mueg
