#include "mueg/rdm/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "mueg/fields/integrate.hpp"
#include "mueg/fields/reduce.hpp"

namespace mueg {

void BoundReport::summarize() {
  evaluated = margins.size();
  if (margins.empty()) {
    min_margin = mean_margin = 0.0;
    pass = true;
    return;
  }
  min_margin = *std::min_element(margins.begin(), margins.end());
  mean_margin = pairwise_sum(margins) / static_cast<double>(margins.size());
  pass = min_margin >= -tolerance;
}

Report BoundReport::to_report() const {
  Report r;
  r.add("inequality", id);
  r.add("tag", tag);
  r.add("margin_scale", scale);
  r.add("lhs", lhs);
  r.add("rhs", rhs);
  r.add("min_margin", min_margin);
  r.add("mean_margin", mean_margin);
  r.add("tolerance", tolerance);
  r.add("evaluated_points", evaluated);
  r.add("skipped_points", skipped);
  r.add("pass", pass);
  return r;
}

namespace {

double frobenius(const TensorField& m, std::size_t p) {
  double s = 0.0;
  for (int c = 0; c < m.components(); ++c) s += m(p, c) * m(p, c);
  return std::sqrt(s);
}

}  // namespace

std::array<BoundReport, 2> check_pointwise_bounds(const RdmObservables& obs, const PointwiseOptions& opt) {
  const GridSpec& g = obs.grid;
  const int d = g.dim;
  const TensorField da = opt.route == VorticityRoute::tensor ? obs.rho_da : stencil_rho_da(obs);
  const int margin = opt.route == VorticityRoute::stencil ? std::max(opt.boundary_margin, 2) : opt.boundary_margin;

  std::array<BoundReport, 2> out;
  out[0].id = "weizsacker_gauge_vorticity_density";
  out[0].tag = "|grad sqrt rho|^2 + |jp|^2/rho + rho|D_a(jp/rho)|/sqrt(d) <= tau";
  out[0].scale = "local tau";
  out[1].id = "current_chain";
  out[1].tag = "|jp| <= |zeta| <= sqrt(tau rho)";
  out[1].scale = "local sqrt(tau rho)";
  double lhs0 = 0.0, rhs0 = 0.0;
  std::vector<double> l0(g.size(), 0.0), r0(g.size(), 0.0);
  for (std::size_t p = 0; p < g.size(); ++p) {
    if (!obs.valid[p] || !g.interior(p, margin)) {
      ++out[0].skipped;
      ++out[1].skipped;
      continue;
    }
    const double rho = obs.rho(p);
    const double tau = obs.tau(p);
    double re2 = 0.0, j2 = 0.0;
    for (int a = 0; a < d; ++a) {
      re2 += std::pow(obs.zeta(p, a).real(), 2);
      j2 += std::pow(obs.zeta(p, a).imag(), 2);
    }
    const double lhs = (re2 + j2) / rho + frobenius(da, p) / std::sqrt(double(d));
    const double scale = std::max(tau, std::numeric_limits<double>::min());
    out[0].margins.push_back((tau - lhs) / scale);
    l0[p] = lhs;
    r0[p] = tau;

    const double zabs = std::sqrt(re2 + j2);
    const double root = std::sqrt(std::max(tau, 0.0) * rho);
    const double m = std::min(zabs - std::sqrt(j2), root - zabs);
    out[1].margins.push_back(m / std::max(root, std::numeric_limits<double>::min()));
  }
  lhs0 = integrate_values(g, l0);
  rhs0 = integrate_values(g, r0);
  out[0].lhs = lhs0;
  out[0].rhs = rhs0;
  for (auto& r : out) {
    r.tolerance = opt.tolerance;
    r.summarize();
    r.skipped = g.size() - r.evaluated;
  }
  return out;
}

BoundReport check_integrated_bound(const RdmObservables& obs, bool strict, double tolerance, VorticityRoute route) {
  const GridSpec& g = obs.grid;
  if (g.dim != 3) throw DimensionError("integrated vorticity bound is stated for d = 3");
  std::vector<double> vort(g.size(), 0.0);
  std::size_t skipped = 0;
  for (std::size_t p = 0; p < g.size(); ++p) {
    if (!obs.valid[p]) {
      ++skipped;
      continue;
    }
    if (route == VorticityRoute::tensor)
      vort[p] = std::sqrt(2.0) * frobenius(obs.rho_da, p);
    else
      vort[p] = obs.rho(p) * obs.vorticity.vec(p).norm();
  }
  const double c = strict ? 1.0 : 1.0 / std::sqrt(6.0);
  BoundReport r;
  r.id = strict ? "kinetic_weizsacker_gauge_vorticity_strict" : "kinetic_weizsacker_gauge_vorticity";
  r.tag = strict ? "Tr(-Lap gamma) >= int|grad sqrt rho|^2 + int|jp|^2/rho + int rho|nu|"
                 : "Tr(-Lap gamma) >= int|grad sqrt rho|^2 + int|jp|^2/rho + int rho|nu|/sqrt(6)";
  r.scale = "Tr(-Lap gamma)";
  r.lhs = weizsacker_term(obs) + gauge_term(obs) + c * integrate_values(g, vort);
  r.rhs = obs.kinetic_energy;
  r.margins = {(r.rhs - r.lhs) / std::max(r.rhs, std::numeric_limits<double>::min())};
  r.tolerance = tolerance;
  r.summarize();
  r.skipped = skipped;
  return r;
}

}  // namespace mueg
