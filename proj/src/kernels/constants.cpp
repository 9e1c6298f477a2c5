#include "mueg/kernels/constants.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "mueg/errors.hpp"

namespace mueg {

namespace {
void check_dim(int d) {
  if (d < 1 || d > 3) throw DimensionError("unsupported dimension " + std::to_string(d));
}
}  // namespace

double unit_ball_volume(int d) {
  check_dim(d);
  return std::pow(std::numbers::pi, 0.5 * d) / std::tgamma(0.5 * d + 1.0);
}

double thomas_fermi_constant(int d) {
  check_dim(d);
  const double pi = std::numbers::pi;
  return static_cast<double>(d) / (d + 2) * 4.0 * pi * pi / std::pow(unit_ball_volume(d), 2.0 / d);
}

double strain_constant(int d) {
  check_dim(d);
  return 1.0 + d * d * d / 4.0;
}

}  // namespace mueg
