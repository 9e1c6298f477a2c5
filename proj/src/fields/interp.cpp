#include "mueg/fields/interp.hpp"

#include <algorithm>
#include <cmath>

#include "mueg/fields/differential.hpp"

namespace mueg {

namespace {

// Lagrange value and first-derivative weights at t for consecutive nodes starting at `start`.
void lagrange(double t, int start, int width, double* w0, double* w1) {
  for (int k = 0; k < width; ++k) {
    double num = 1.0, den = 1.0;
    for (int m = 0; m < width; ++m) {
      if (m == k) continue;
      num *= t - (start + m);
      den *= static_cast<double>(k - m);
    }
    w0[k] = num / den;
    double s = 0.0;
    for (int q = 0; q < width; ++q) {
      if (q == k) continue;
      double prod = 1.0;
      for (int m = 0; m < width; ++m) {
        if (m == k || m == q) continue;
        prod *= t - (start + m);
      }
      s += prod;
    }
    w1[k] = s / den;
  }
}

}  // namespace

LocalInterpolant::LocalInterpolant(ScalarField f) : f_(std::move(f)) { f_.grid().validate(); }

double LocalInterpolant::value(const Vec3& x) const {
  double v;
  Vec3 g;
  evaluate(x, v, g);
  return v;
}

Vec3 LocalInterpolant::gradient(const Vec3& x) const {
  double v;
  Vec3 g;
  evaluate(x, v, g);
  return g;
}

void LocalInterpolant::evaluate(const Vec3& x, double& value, Vec3& grad) const {
  const GridSpec& g = f_.grid();
  value = 0.0;
  grad = Vec3::Zero();
  int start[3] = {0, 0, 0}, width[3] = {1, 1, 1};
  double w0[3][5], w1[3][5];
  for (int a = 0; a < 3; ++a) {
    w0[a][0] = 1.0;
    w1[a][0] = 0.0;
  }
  for (int a = 0; a < g.dim; ++a) {
    const int n = g.counts[a];
    const double t = (x(a) - g.origin[a]) / g.spacing[a];
    if (t < -1e-9 || t > n - 1 + 1e-9) return;
    width[a] = std::min(5, n);
    const int nearest = static_cast<int>(std::lround(t));
    start[a] = std::clamp(nearest - width[a] / 2, 0, n - width[a]);
    lagrange(t, start[a], width[a], w0[a], w1[a]);
  }
  for (int k = 0; k < width[2]; ++k)
    for (int j = 0; j < width[1]; ++j)
      for (int i = 0; i < width[0]; ++i) {
        const double f = f_(g.index(start[0] + i, start[1] + j, start[2] + k));
        value += w0[0][i] * w0[1][j] * w0[2][k] * f;
        grad(0) += w1[0][i] * w0[1][j] * w0[2][k] * f;
        if (g.dim >= 2) grad(1) += w0[0][i] * w1[1][j] * w0[2][k] * f;
        if (g.dim >= 3) grad(2) += w0[0][i] * w0[1][j] * w1[2][k] * f;
      }
  for (int a = 0; a < g.dim; ++a) grad(a) /= g.spacing[a];
}

}  // namespace mueg
