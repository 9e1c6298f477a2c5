#pragma once

#include <array>
#include <utility>
#include <vector>

#include "mueg/fields/grid.hpp"

namespace mueg {

// Half-space n.y <= c with unit outward normal n.
struct Plane {
  Vec3 n = Vec3::UnitX();
  double c = 0.0;
  // Positive inside.
  double depth(const Vec3& x) const { return c - n.dot(x); }
};

// Bounded convex polyhedron. Faces are stored counter-clockwise seen from outside.
class ConvexPolyhedron {
 public:
  ConvexPolyhedron() = default;
  ConvexPolyhedron(std::vector<Vec3> vertices, std::vector<std::vector<int>> faces);
  static ConvexPolyhedron tetrahedron(const std::array<Vec3, 4>& v);
  static ConvexPolyhedron box(const Vec3& lo, const Vec3& hi);

  const std::vector<Vec3>& vertices() const { return vertices_; }
  const std::vector<std::vector<int>>& faces() const { return faces_; }
  const std::vector<Plane>& planes() const { return planes_; }

  double volume() const;
  Vec3 barycenter() const;
  // Integral of x x^T over the body.
  Mat3 second_moment() const;
  double diameter() const;
  std::pair<Vec3, Vec3> bounding_box() const;

  // Smallest face depth: positive inside, equal to the distance to the boundary there.
  double inner_distance(const Vec3& x) const;
  // Euclidean distance to the body; zero inside.
  double distance(const Vec3& x) const;
  bool contains(const Vec3& x) const { return inner_distance(x) >= 0.0; }

  // Image under y = A x + b with A invertible.
  ConvexPolyhedron transformed(const Mat3& a, const Vec3& b) const;
  ConvexPolyhedron scaled(double s) const { return transformed(s * Mat3::Identity(), Vec3::Zero()); }
  ConvexPolyhedron translated(const Vec3& b) const { return transformed(Mat3::Identity(), b); }

 private:
  void orient();
  std::vector<Vec3> vertices_;
  std::vector<std::vector<int>> faces_;
  std::vector<Plane> planes_;
};

// Closest point of triangle abc to p.
Vec3 closest_point_on_triangle(const Vec3& p, const Vec3& a, const Vec3& b, const Vec3& c);

// Nodes and weights integrating over a tetrahedron: Gauss-Legendre on the cube mapped by the collapsed (Duffy) map.
struct CubatureRule {
  std::vector<Vec3> nodes;
  std::vector<double> weights;
};
CubatureRule tetrahedron_rule(const std::array<Vec3, 4>& v, int order);

}  // namespace mueg
