#include "mueg/fields/integrate.hpp"

#include <cmath>

#include "mueg/fields/reduce.hpp"

namespace mueg {

std::vector<double> axis_weights(int n, double h) {
  std::vector<double> w(n, h);
  if (n == 1) {
    w[0] = 1.0;
    return w;
  }
  if (n < 6) {
    w.front() = w.back() = 0.5 * h;
    return w;
  }
  const double ends[3] = {3.0 / 8.0, 7.0 / 6.0, 23.0 / 24.0};
  for (int k = 0; k < 3; ++k) {
    w[k] = ends[k] * h;
    w[n - 1 - k] = ends[k] * h;
  }
  return w;
}

std::vector<double> grid_weights(const GridSpec& g) {
  std::vector<double> wa[3];
  for (int a = 0; a < 3; ++a) wa[a] = a < g.dim ? axis_weights(g.counts[a], g.spacing[a]) : std::vector<double>{1.0};
  std::vector<double> w(g.size());
  for (std::size_t p = 0; p < w.size(); ++p) {
    auto c = g.coords(p);
    w[p] = wa[0][c[0]] * wa[1][c[1]] * wa[2][c[2]];
  }
  return w;
}

double integrate_values(const GridSpec& g, const std::vector<double>& v) {
  if (v.size() != g.size()) throw DimensionError("integrand size does not match grid");
  const auto w = grid_weights(g);
  std::vector<double> terms(v.size());
  for (std::size_t p = 0; p < v.size(); ++p) {
    if (!std::isfinite(v[p])) throw NumericalError("non-finite integrand value");
    terms[p] = w[p] * v[p];
  }
  return pairwise_sum(terms);
}

double integrate(const ScalarField& f) { return integrate_values(f.grid(), f.values()); }

double integrate_weighted(const ScalarField& f, const ScalarField& w) {
  if (!(f.grid() == w.grid())) throw DimensionError("integrate_weighted: grids differ");
  std::vector<double> v(f.size());
  for (std::size_t p = 0; p < v.size(); ++p) v[p] = f(p) * w(p);
  return integrate_values(f.grid(), v);
}

}  // namespace mueg
