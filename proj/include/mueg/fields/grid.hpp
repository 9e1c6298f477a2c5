#pragma once

#include <array>
#include <complex>
#include <cstddef>

#include <Eigen/Dense>

namespace mueg {

using cplx = std::complex<double>;
using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;
using CVec3 = Eigen::Vector3cd;
using CMat3 = Eigen::Matrix3cd;

// Uniform box grid. Axes beyond dim carry count 1 and are ignored.
struct GridSpec {
  int dim = 3;
  std::array<double, 3> origin{0.0, 0.0, 0.0};
  std::array<double, 3> spacing{1.0, 1.0, 1.0};
  std::array<int, 3> counts{1, 1, 1};

  // n points per axis spanning [lo, hi] on every active axis.
  static GridSpec box(int dim, double lo, double hi, int n);
  static GridSpec box(const Vec3& lo, const Vec3& hi, const std::array<int, 3>& n);

  void validate() const;
  std::size_t size() const;
  std::size_t index(int i, int j = 0, int k = 0) const {
    return static_cast<std::size_t>(i) +
           static_cast<std::size_t>(counts[0]) *
               (static_cast<std::size_t>(j) + static_cast<std::size_t>(counts[1]) * k);
  }
  std::array<int, 3> coords(std::size_t idx) const;
  Vec3 point(std::size_t idx) const;
  // True when every active index sits at least `margin` points from the boundary.
  bool interior(std::size_t idx, int margin = 2) const;
  double cell_volume() const;
  Vec3 lower() const;
  Vec3 upper() const;
  bool operator==(const GridSpec& o) const;
};

}  // namespace mueg
