#include "mueg/fields/grid.hpp"

#include <cmath>
#include <string>

#include "mueg/errors.hpp"

namespace mueg {

GridSpec GridSpec::box(int dim, double lo, double hi, int n) {
  GridSpec g;
  g.dim = dim;
  for (int a = 0; a < 3; ++a) {
    if (a < dim) {
      g.origin[a] = lo;
      g.spacing[a] = (hi - lo) / (n - 1);
      g.counts[a] = n;
    } else {
      g.origin[a] = 0.0;
      g.spacing[a] = 1.0;
      g.counts[a] = 1;
    }
  }
  g.validate();
  return g;
}

GridSpec GridSpec::box(const Vec3& lo, const Vec3& hi, const std::array<int, 3>& n) {
  GridSpec g;
  g.dim = 3;
  for (int a = 0; a < 3; ++a) {
    g.origin[a] = lo(a);
    g.spacing[a] = (hi(a) - lo(a)) / (n[a] - 1);
    g.counts[a] = n[a];
  }
  g.validate();
  return g;
}

void GridSpec::validate() const {
  if (dim < 1 || dim > 3) throw DimensionError("grid dimension must be 1, 2 or 3, got " + std::to_string(dim));
  for (int a = 0; a < dim; ++a) {
    if (!(spacing[a] > 0.0) || !std::isfinite(spacing[a]))
      throw DomainError("grid spacing must be positive on axis " + std::to_string(a));
    if (counts[a] < 4)
      throw DimensionError("grid needs at least 4 points per axis, axis " + std::to_string(a) + " has " +
                           std::to_string(counts[a]));
  }
  for (int a = dim; a < 3; ++a)
    if (counts[a] != 1) throw DimensionError("inactive grid axes must have count 1");
}

std::size_t GridSpec::size() const {
  return static_cast<std::size_t>(counts[0]) * counts[1] * counts[2];
}

std::array<int, 3> GridSpec::coords(std::size_t idx) const {
  std::array<int, 3> c{};
  c[0] = static_cast<int>(idx % counts[0]);
  idx /= counts[0];
  c[1] = static_cast<int>(idx % counts[1]);
  c[2] = static_cast<int>(idx / counts[1]);
  return c;
}

Vec3 GridSpec::point(std::size_t idx) const {
  auto c = coords(idx);
  Vec3 x = Vec3::Zero();
  for (int a = 0; a < dim; ++a) x(a) = origin[a] + spacing[a] * c[a];
  return x;
}

bool GridSpec::interior(std::size_t idx, int margin) const {
  auto c = coords(idx);
  for (int a = 0; a < dim; ++a)
    if (c[a] < margin || c[a] > counts[a] - 1 - margin) return false;
  return true;
}

double GridSpec::cell_volume() const {
  double v = 1.0;
  for (int a = 0; a < dim; ++a) v *= spacing[a];
  return v;
}

Vec3 GridSpec::lower() const {
  Vec3 x = Vec3::Zero();
  for (int a = 0; a < dim; ++a) x(a) = origin[a];
  return x;
}

Vec3 GridSpec::upper() const {
  Vec3 x = Vec3::Zero();
  for (int a = 0; a < dim; ++a) x(a) = origin[a] + spacing[a] * (counts[a] - 1);
  return x;
}

bool GridSpec::operator==(const GridSpec& o) const {
  return dim == o.dim && origin == o.origin && spacing == o.spacing && counts == o.counts;
}

}  // namespace mueg
