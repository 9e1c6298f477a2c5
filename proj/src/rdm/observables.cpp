#include "mueg/rdm/observables.hpp"

#include <algorithm>
#include <cmath>

#include "mueg/fields/differential.hpp"
#include "mueg/fields/integrate.hpp"
#include "mueg/fields/parallel.hpp"
#include "mueg/rdm/rdm.hpp"

namespace mueg {

namespace {
// Fourth-order first-derivative weights (times 12h) at offsets -2..2, and sixth-order (times 60h) at -3..3.
constexpr double kStencil[5] = {1.0, -8.0, 0.0, 8.0, -1.0};
constexpr double kStencil6[7] = {-1.0, 9.0, -45.0, 0.0, 45.0, -9.0, 1.0};
}

void finalize_observables(RdmObservables& obs, double rho_floor_rel) {
  const GridSpec& g = obs.grid;
  const int d = g.dim;
  const std::size_t n = g.size();
  if (!obs.rho.finite() || !obs.zeta.finite() || !obs.tau_tensor.finite())
    throw NumericalError("non-finite value in density matrix observables");

  double rho_max = 0.0;
  for (double r : obs.rho.values()) rho_max = std::max(rho_max, r);
  obs.rho_floor = rho_floor_rel * rho_max;
  obs.valid.assign(n, 0);
  obs.jp = VectorField(g);
  obs.tau = ScalarField(g);
  obs.omega = ComplexTensorField(g);
  obs.rho_da = TensorField(g);
  for (std::size_t p = 0; p < n; ++p) {
    double tr = 0.0;
    for (int a = 0; a < d; ++a) {
      obs.jp(p, a) = obs.zeta(p, a).imag();
      tr += obs.tau_tensor.at(p, a, a).real();
    }
    obs.tau(p) = tr;
    const double rho = obs.rho(p);
    if (!(rho > obs.rho_floor)) continue;
    obs.valid[p] = 1;
    for (int a = 0; a < d; ++a)
      for (int b = 0; b < d; ++b)
        obs.omega.at(p, a, b) = obs.tau_tensor.at(p, a, b) - obs.zeta(p, a) * std::conj(obs.zeta(p, b)) / rho;
    for (int a = 0; a < d; ++a)
      for (int b = 0; b < d; ++b)
        obs.rho_da.at(p, a, b) = 0.5 * (obs.omega.at(p, a, b).imag() - obs.omega.at(p, b, a).imag());
  }

  if (d == 3) {
    VectorField u(g);
    for (std::size_t p = 0; p < n; ++p)
      if (obs.valid[p])
        for (int a = 0; a < d; ++a) u(p, a) = obs.jp(p, a) / obs.rho(p);
    obs.vorticity = curl(u);
  } else {
    obs.vorticity = VectorField(g);
  }
  obs.kinetic_energy = integrate(obs.tau);
}

RdmObservables kernel_fd_observables(const Rdm& rdm, const GridSpec& g, const ObservableOptions& opt) {
  g.validate();
  if (g.dim != rdm.dim()) throw DimensionError("grid and density matrix dimensions differ");
  const int d = g.dim;
  RdmObservables obs;
  obs.grid = g;
  obs.rho = ScalarField(g);
  obs.zeta = ComplexVectorField(g);
  obs.tau_tensor = ComplexTensorField(g);

  parallel_for(g.size(), [&](std::size_t begin, std::size_t end) {
    for (std::size_t p = begin; p < end; ++p) {
      const Vec3 x = g.point(p);
      const double h = opt.fd_step > 0.0 ? opt.fd_step : 5e-3 * rdm.length_scale(x);
      const double c = 1.0 / (12.0 * h);
      obs.rho(p) = rdm.kernel_near(x, x, x).real();
      for (int a = 0; a < d; ++a) {
        cplx s = 0.0;
        for (int k = 0; k < 7; ++k) {
          if (k == 3) continue;
          Vec3 xs = x;
          xs(a) += (k - 3) * h;
          s += kStencil6[k] * rdm.kernel_near(xs, x, x);
        }
        obs.zeta(p, a) = s / (60.0 * h);
      }
      for (int a = 0; a < d && opt.kinetic; ++a)
        for (int b = a; b < d; ++b) {
          if (!opt.full_tensor && a != b) continue;
          cplx s = 0.0;
          for (int k = 0; k < 5; ++k) {
            if (k == 2) continue;
            Vec3 xs = x;
            xs(a) += (k - 2) * h;
            for (int l = 0; l < 5; ++l) {
              if (l == 2) continue;
              Vec3 ys = x;
              ys(b) += (l - 2) * h;
              s += kStencil[k] * kStencil[l] * rdm.kernel_near(xs, ys, x);
            }
          }
          s *= c * c;
          if (a == b) s = s.real();
          obs.tau_tensor.at(p, a, b) = s;
          obs.tau_tensor.at(p, b, a) = std::conj(s);
        }
    }
  });
  finalize_observables(obs, opt.rho_floor_rel);
  return obs;
}

TensorField stencil_rho_da(const RdmObservables& obs) {
  const GridSpec& g = obs.grid;
  const int d = g.dim;
  VectorField u(g);
  for (std::size_t p = 0; p < g.size(); ++p)
    if (obs.valid[p])
      for (int a = 0; a < d; ++a) u(p, a) = obs.jp(p, a) / obs.rho(p);
  TensorField da = antisymmetric_part(jacobian(u));
  for (std::size_t p = 0; p < g.size(); ++p)
    for (int c = 0; c < d * d; ++c) da(p, c) *= obs.valid[p] ? obs.rho(p) : 0.0;
  return da;
}

double gauge_term(const RdmObservables& obs) {
  ScalarField f(obs.grid);
  for (std::size_t p = 0; p < f.size(); ++p)
    if (obs.valid[p]) f(p) = obs.jp.vec(p).squaredNorm() / obs.rho(p);
  return integrate(f);
}

double weizsacker_term(const RdmObservables& obs) {
  ScalarField f(obs.grid);
  for (std::size_t p = 0; p < f.size(); ++p)
    if (obs.valid[p]) {
      double s = 0.0;
      for (int a = 0; a < obs.grid.dim; ++a) s += std::norm(obs.zeta(p, a).real());
      f(p) = s / obs.rho(p);
    }
  return integrate(f);
}

}  // namespace mueg
