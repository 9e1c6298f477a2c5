#include "mueg/fields/differential.hpp"

#include <algorithm>
#include <cmath>

namespace mueg {

std::vector<double> fd_weights(double z, const std::vector<double>& x, int m) {
  const int n = static_cast<int>(x.size()) - 1;
  std::vector<std::vector<double>> c(n + 1, std::vector<double>(m + 1, 0.0));
  double c1 = 1.0, c4 = x[0] - z;
  c[0][0] = 1.0;
  for (int i = 1; i <= n; ++i) {
    const int mn = std::min(i, m);
    double c2 = 1.0;
    const double c5 = c4;
    c4 = x[i] - z;
    for (int j = 0; j < i; ++j) {
      const double c3 = x[i] - x[j];
      c2 *= c3;
      if (j == i - 1) {
        for (int k = mn; k >= 1; --k) c[i][k] = c1 * (k * c[i - 1][k - 1] - c5 * c[i - 1][k]) / c2;
        c[i][0] = -c1 * c5 * c[i - 1][0] / c2;
      }
      for (int k = mn; k >= 1; --k) c[j][k] = (c4 * c[j][k] - k * c[j][k - 1]) / c3;
      c[j][0] = c4 * c[j][0] / c3;
    }
    c1 = c2;
  }
  std::vector<double> w(n + 1);
  for (int i = 0; i <= n; ++i) w[i] = c[i][m];
  return w;
}

namespace {

struct AxisStencil {
  std::vector<int> start;
  std::vector<std::vector<double>> weights;
};

AxisStencil axis_stencil(int n, double h) {
  AxisStencil s;
  s.start.resize(n);
  s.weights.resize(n);
  const int width = n >= 5 ? 5 : n;
  for (int i = 0; i < n; ++i) {
    if (width == 5 && i >= 2 && i <= n - 3) {
      s.start[i] = i - 2;
      s.weights[i] = {1.0 / (12.0 * h), -8.0 / (12.0 * h), 0.0, 8.0 / (12.0 * h), -1.0 / (12.0 * h)};
      continue;
    }
    const int st = std::clamp(i - width / 2, 0, n - width);
    std::vector<double> nodes(width);
    for (int k = 0; k < width; ++k) nodes[k] = st + k;
    auto w = fd_weights(static_cast<double>(i), nodes, 1);
    for (auto& v : w) v /= h;
    s.start[i] = st;
    s.weights[i] = w;
  }
  return s;
}

}  // namespace

template <class T>
std::vector<T> partial(const GridSpec& g, const std::vector<T>& f, int axis) {
  g.validate();
  if (axis < 0 || axis >= g.dim) throw DimensionError("derivative axis out of range");
  if (f.size() != g.size()) throw DimensionError("field size does not match grid");
  const int n = g.counts[axis];
  const AxisStencil st = axis_stencil(n, g.spacing[axis]);
  std::size_t stride = 1;
  for (int a = 0; a < axis; ++a) stride *= g.counts[a];
  std::vector<T> out(f.size());
  for (std::size_t p = 0; p < f.size(); ++p) {
    const int i = g.coords(p)[axis];
    const std::size_t base = p - static_cast<std::size_t>(i) * stride;
    const auto& w = st.weights[i];
    T acc{};
    for (std::size_t k = 0; k < w.size(); ++k) {
      if (w[k] == 0.0) continue;
      acc += w[k] * f[base + static_cast<std::size_t>(st.start[i] + static_cast<int>(k)) * stride];
    }
    out[p] = acc;
  }
  return out;
}

template std::vector<double> partial(const GridSpec&, const std::vector<double>&, int);
template std::vector<cplx> partial(const GridSpec&, const std::vector<cplx>&, int);

template <class T>
Field<T, Rank::vector> gradient(const Field<T, Rank::scalar>& f) {
  const GridSpec& g = f.grid();
  Field<T, Rank::vector> out(g);
  for (int a = 0; a < g.dim; ++a) {
    auto d = partial(g, f.values(), a);
    for (std::size_t p = 0; p < g.size(); ++p) out(p, a) = d[p];
  }
  return out;
}

template Field<double, Rank::vector> gradient(const Field<double, Rank::scalar>&);
template Field<cplx, Rank::vector> gradient(const Field<cplx, Rank::scalar>&);

template <class T>
Field<T, Rank::tensor> jacobian(const Field<T, Rank::vector>& u) {
  const GridSpec& g = u.grid();
  Field<T, Rank::tensor> out(g);
  std::vector<T> comp(g.size());
  for (int a = 0; a < g.dim; ++a) {
    for (std::size_t p = 0; p < g.size(); ++p) comp[p] = u(p, a);
    for (int b = 0; b < g.dim; ++b) {
      auto d = partial(g, comp, b);
      for (std::size_t p = 0; p < g.size(); ++p) out.at(p, a, b) = d[p];
    }
  }
  return out;
}

template Field<double, Rank::tensor> jacobian(const Field<double, Rank::vector>&);
template Field<cplx, Rank::tensor> jacobian(const Field<cplx, Rank::vector>&);

TensorField symmetric_part(const TensorField& m) {
  TensorField out(m.grid());
  const int d = m.dim();
  for (std::size_t p = 0; p < m.size(); ++p)
    for (int a = 0; a < d; ++a)
      for (int b = 0; b < d; ++b) out.at(p, a, b) = 0.5 * (m.at(p, a, b) + m.at(p, b, a));
  return out;
}

TensorField antisymmetric_part(const TensorField& m) {
  TensorField out(m.grid());
  const int d = m.dim();
  for (std::size_t p = 0; p < m.size(); ++p)
    for (int a = 0; a < d; ++a)
      for (int b = 0; b < d; ++b) out.at(p, a, b) = 0.5 * (m.at(p, a, b) - m.at(p, b, a));
  return out;
}

VectorField curl(const VectorField& u) {
  if (u.dim() != 3) throw DimensionError("curl is only defined in three dimensions");
  const TensorField du = jacobian(u);
  VectorField out(u.grid());
  for (std::size_t p = 0; p < u.size(); ++p) {
    out(p, 0) = du.at(p, 2, 1) - du.at(p, 1, 2);
    out(p, 1) = du.at(p, 0, 2) - du.at(p, 2, 0);
    out(p, 2) = du.at(p, 1, 0) - du.at(p, 0, 1);
  }
  return out;
}

ScalarField divergence(const VectorField& u) {
  const GridSpec& g = u.grid();
  ScalarField out(g);
  std::vector<double> comp(g.size());
  for (int a = 0; a < g.dim; ++a) {
    for (std::size_t p = 0; p < g.size(); ++p) comp[p] = u(p, a);
    auto d = partial(g, comp, a);
    for (std::size_t p = 0; p < g.size(); ++p) out(p) += d[p];
  }
  return out;
}

ScalarField frobenius_norm(const TensorField& m) {
  ScalarField out(m.grid());
  const int c = m.components();
  for (std::size_t p = 0; p < m.size(); ++p) {
    double s = 0.0;
    for (int k = 0; k < c; ++k) s += m(p, k) * m(p, k);
    out(p) = std::sqrt(s);
  }
  return out;
}

ScalarField norm(const VectorField& u) {
  ScalarField out(u.grid());
  for (std::size_t p = 0; p < u.size(); ++p) out(p) = u.vec(p).norm();
  return out;
}

}  // namespace mueg
