#include "mueg/rdm/coulomb.hpp"

#include <cmath>
#include <numbers>

#include "mueg/fields/integrate.hpp"
#include "mueg/fields/parallel.hpp"
#include "mueg/fields/reduce.hpp"

namespace mueg {

namespace {

// 1/|x_i - x_j| tabulated by index offset, with the ball average 3/(2R) on the diagonal.
class CoulombTable {
 public:
  explicit CoulombTable(const GridSpec& g) : g_(g) {
    if (g.dim != 3) throw DimensionError("Coulomb energies are evaluated for d = 3");
    for (int a = 0; a < 3; ++a) span_[a] = 2 * g.counts[a] - 1;
    table_.resize(std::size_t(span_[0]) * span_[1] * span_[2]);
    const double vol = g.spacing[0] * g.spacing[1] * g.spacing[2];
    const double r_ball = std::cbrt(3.0 * vol / (4.0 * std::numbers::pi));
    for (int k = 0; k < span_[2]; ++k)
      for (int j = 0; j < span_[1]; ++j)
        for (int i = 0; i < span_[0]; ++i) {
          const Vec3 z((i - g.counts[0] + 1) * g.spacing[0], (j - g.counts[1] + 1) * g.spacing[1],
                       (k - g.counts[2] + 1) * g.spacing[2]);
          const double r = z.norm();
          table_[(std::size_t(k) * span_[1] + j) * span_[0] + i] = r > 0.0 ? 1.0 / r : 1.5 / r_ball;
        }
  }

  std::array<int, 3> index(std::size_t p) const {
    const int nx = g_.counts[0], ny = g_.counts[1];
    return {int(p % nx), int((p / nx) % ny), int(p / (std::size_t(nx) * ny))};
  }

  double operator()(const std::array<int, 3>& a, const std::array<int, 3>& b) const {
    const int i = a[0] - b[0] + g_.counts[0] - 1;
    const int j = a[1] - b[1] + g_.counts[1] - 1;
    const int k = a[2] - b[2] + g_.counts[2] - 1;
    return table_[(std::size_t(k) * span_[1] + j) * span_[0] + i];
  }

 private:
  GridSpec g_;
  std::array<int, 3> span_{};
  std::vector<double> table_;
};

// 1/2 sum_ij f(i, j) K_ij over all ordered pairs, accumulated per row then reduced pairwise.
// A symmetric f is evaluated on i <= j only.
template <class F>
double pair_sum(const GridSpec& g, const std::vector<std::size_t>& active, F&& f, bool symmetric = false) {
  const CoulombTable table(g);
  std::vector<std::array<int, 3>> idx(active.size());
  for (std::size_t a = 0; a < active.size(); ++a) idx[a] = table.index(active[a]);
  std::vector<double> rows(active.size(), 0.0);
  parallel_for(active.size(), [&](std::size_t b, std::size_t e) {
    for (std::size_t a = b; a < e; ++a) {
      double s = 0.0;
      if (symmetric) {
        for (std::size_t c = a + 1; c < active.size(); ++c) s += f(a, c) * table(idx[a], idx[c]);
        s = 2.0 * s + f(a, a) * table(idx[a], idx[a]);
      } else {
        for (std::size_t c = 0; c < active.size(); ++c) s += f(a, c) * table(idx[a], idx[c]);
      }
      rows[a] = s;
    }
  });
  return 0.5 * pairwise_sum(rows);
}

std::vector<std::size_t> all_points(const GridSpec& g) {
  std::vector<std::size_t> v(g.size());
  for (std::size_t p = 0; p < v.size(); ++p) v[p] = p;
  return v;
}

}  // namespace

double coulomb_direct(const ScalarField& mu1, const ScalarField& mu2) {
  const GridSpec& g = mu1.grid();
  if (!(g == mu2.grid())) throw DimensionError("Coulomb form needs fields on one grid");
  if (!mu1.finite() || !mu2.finite()) throw NumericalError("non-finite input to Coulomb form");
  const auto w = grid_weights(g);
  std::vector<std::size_t> active;
  for (std::size_t p = 0; p < g.size(); ++p)
    if (w[p] * mu1(p) != 0.0 || w[p] * mu2(p) != 0.0) active.push_back(p);
  std::vector<double> a(active.size()), b(active.size());
  for (std::size_t i = 0; i < active.size(); ++i) {
    a[i] = w[active[i]] * mu1(active[i]);
    b[i] = w[active[i]] * mu2(active[i]);
  }
  return pair_sum(g, active, [&](std::size_t i, std::size_t j) { return a[i] * b[j]; });
}

double coulomb_exchange(const Rdm& gamma, const GridSpec& g) {
  g.validate();
  const auto w = grid_weights(g);
  if (auto lr = dynamic_cast<const LowRankRdm*>(&gamma)) {
    std::vector<ComplexScalarField> v;
    std::vector<ComplexVectorField> gr;
    lr->sample(g, v, gr);
    const auto& lam = lr->occupations();
    double total = 0.0;
    for (std::size_t j = 0; j < v.size(); ++j)
      for (std::size_t k = j; k < v.size(); ++k) {
        ScalarField re(g), im(g);
        for (std::size_t p = 0; p < g.size(); ++p) {
          const cplx z = v[j](p) * std::conj(v[k](p));
          re(p) = z.real();
          im(p) = z.imag();
        }
        const double f = (j == k ? 1.0 : 2.0) * lam[j] * lam[k];
        if (f == 0.0) continue;
        total += f * (coulomb_direct(re, re) + coulomb_direct(im, im));
      }
    return total;
  }
  const auto active = all_points(g);
  std::vector<Vec3> x(g.size());
  for (std::size_t p = 0; p < g.size(); ++p) x[p] = g.point(p);
  return pair_sum(g, active, [&](std::size_t i, std::size_t j) {
    const cplx z = gamma.kernel(x[i], x[j]);
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) throw NumericalError("non-finite kernel value");
    return w[i] * w[j] * std::norm(z);
  }, true);
}

double quasi_free_coulomb(const Rdm& gamma, const GridSpec& g) {
  g.validate();
  const auto w = grid_weights(g);
  const auto active = all_points(g);
  if (auto lr = dynamic_cast<const LowRankRdm*>(&gamma)) {
    std::vector<ComplexScalarField> v;
    std::vector<ComplexVectorField> gr;
    lr->sample(g, v, gr);
    const auto& lam = lr->occupations();
    const std::size_t m = v.size();
    // Occupation-weighted orbital values per point, for the kernel and the diagonal.
    std::vector<cplx> phi(g.size() * m);
    std::vector<double> rho(g.size(), 0.0);
    for (std::size_t p = 0; p < g.size(); ++p)
      for (std::size_t k = 0; k < m; ++k) {
        phi[p * m + k] = v[k](p);
        rho[p] += lam[k] * std::norm(v[k](p));
      }
    return pair_sum(g, active, [&](std::size_t i, std::size_t j) {
      cplx z = 0.0;
      for (std::size_t k = 0; k < m; ++k) z += lam[k] * phi[i * m + k] * std::conj(phi[j * m + k]);
      return w[i] * w[j] * (rho[i] * rho[j] - std::norm(z));
    }, true);
  }
  std::vector<Vec3> x(g.size());
  std::vector<double> rho(g.size());
  for (std::size_t p = 0; p < g.size(); ++p) {
    x[p] = g.point(p);
    rho[p] = gamma.kernel(x[p], x[p]).real();
  }
  return pair_sum(g, active, [&](std::size_t i, std::size_t j) {
    const cplx z = i == j ? cplx(rho[i]) : gamma.kernel(x[i], x[j]);
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) throw NumericalError("non-finite kernel value");
    return w[i] * w[j] * (rho[i] * rho[j] - std::norm(z));
  }, true);
}

}  // namespace mueg
