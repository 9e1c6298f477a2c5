#include "mueg/constructor/ledger.hpp"

#include <cmath>

#include "mueg/fields/integrate.hpp"
#include "mueg/fields/parallel.hpp"
#include "mueg/kernels/constants.hpp"

namespace mueg {

double BoundTerms::total() const {
  return tf_term + weizsacker_term + gauge_term + strain_vorticity_term + floor_term + width_gradient_term;
}

BoundTerms bound_terms(const SmoothScalar& rho, const CurrentDecomposition& dec, const ConstructorSpec& spec,
                       const GridSpec& g) {
  const int d = g.dim;
  const ConstructedRdm gamma(rho, dec, spec, d);
  const EtaConstants& c = gamma.eta_constants();
  BoundTerms t;
  t.epsilon = spec.epsilon;
  t.tf_factor = c.tf_factor;
  t.weiz_factor = c.weiz_factor;
  t.kappa1 = (c.tf_factor - 1.0) / spec.epsilon;
  t.kappa2 = c.weiz_factor * spec.epsilon / std::pow(1.0 + std::sqrt(spec.epsilon), 2);

  const std::size_t n = g.size();
  std::vector<double> tf(n, 0.0), wz(n, 0.0), ga(n, 0.0), st(n, 0.0), fl(n, 0.0), wg(n, 0.0);
  const double ctf = thomas_fermi_constant(d), cd = strain_constant(d);
  parallel_for(n, [&](std::size_t b, std::size_t e) {
    for (std::size_t p = b; p < e; ++p) {
      const Vec3 x = g.point(p);
      const Site s = gamma.site(x);
      if (!(s.rho > 0.0)) continue;
      const double dw = s.dw.topLeftCorner(d, d).norm();
      tf[p] = ctf * std::pow(s.rho, 1.0 + 2.0 / d);
      wz[p] = s.grad_rho.squaredNorm() / (4.0 * s.rho);
      ga[p] = s.rho * (s.w + s.grad_g).squaredNorm();
      if (spec.width == WidthPolicy::constant) {
        st[p] = s.rho * (s.delta + d * d * d * dw * dw / (4.0 * s.delta));
      } else {
        st[p] = cd * s.rho * dw;
        if (dw < spec.delta_floor) fl[p] = spec.delta_floor * s.rho;
        wg[p] = s.rho * d * gamma.width_gradient(x).squaredNorm() / (8.0 * s.delta * s.delta);
      }
    }
  });
  t.tf_term = c.tf_factor * integrate_values(g, tf);
  t.weizsacker_term = c.weiz_factor * integrate_values(g, wz);
  t.gauge_term = integrate_values(g, ga);
  t.strain_vorticity_term = integrate_values(g, st);
  t.floor_term = integrate_values(g, fl);
  t.width_gradient_term = integrate_values(g, wg);
  return t;
}

namespace {

void add_terms(Report& r, const BoundTerms& t) {
  r.add("tf_term", t.tf_term);
  r.add("weizsacker_term", t.weizsacker_term);
  r.add("gauge_term", t.gauge_term);
  r.add("strain_vorticity_term", t.strain_vorticity_term);
  r.add("floor_term", t.floor_term);
  r.add("width_gradient_term", t.width_gradient_term);
  r.add("epsilon", t.epsilon);
  r.add("tf_factor", t.tf_factor);
  r.add("weiz_factor", t.weiz_factor);
  r.add("kappa1", t.kappa1);
  r.add("kappa2", t.kappa2);
}

}  // namespace

Report KineticBoundLedger::to_report() const {
  Report r;
  add_terms(r, terms);
  r.add("rhs", rhs);
  r.add("lhs_analytic", lhs_analytic);
  r.add("lhs_fd", lhs_fd);
  r.add("lhs_rel_diff", lhs_rel_diff);
  r.add("path_tolerance", path_tol);
  r.add("paths_agree", paths_agree);
  r.add("inequality_holds", holds);
  if (violation_checked) {
    r.add("violation", violation);
    r.add("violation_doubled_orders", violation_doubled);
    r.add("violation_shrinks", violation_shrinks);
  }
  r.add("pass", pass);
  return r;
}

KineticBoundLedger kinetic_bound_ledger(const ConstructedRdm& gamma, const GridSpec& g, double path_tol) {
  KineticBoundLedger l;
  l.terms = bound_terms(gamma.density(), gamma.decomposition(), gamma.spec(), g);
  l.rhs = l.terms.total();
  ObservableOptions opt;
  opt.full_tensor = false;
  const RdmObservables obs = gamma.observables(g, opt);
  l.lhs_fd = obs.kinetic_energy;
  l.lhs_analytic = integrate(obs.tau_analytic);
  l.lhs_rel_diff = std::abs(l.lhs_fd - l.lhs_analytic) / std::max(std::abs(l.lhs_analytic), 1e-300);
  l.path_tol = path_tol;
  l.paths_agree = l.lhs_rel_diff <= path_tol;
  l.holds = l.lhs_fd <= l.rhs;
  if (!l.holds) {
    l.violation_checked = true;
    l.violation = l.lhs_fd - l.rhs;
    const auto doubled = gamma.with_orders(2 * gamma.spec().t_order, 2 * gamma.spec().u_order);
    l.violation_doubled = doubled->observables(g, opt).kinetic_energy - l.rhs;
    l.violation_shrinks = l.violation_doubled < l.violation;
  }
  l.pass = l.paths_agree && (l.holds || l.violation_shrinks);
  return l;
}

Report UpperFunctional::to_report() const {
  Report r;
  r.add("value", value);
  r.add("argmin_epsilon", epsilon);
  for (std::size_t k = 0; k < epsilons.size(); ++k) r.add("value_eps_" + format_double(epsilons[k]), values[k]);
  add_terms(r, terms);
  return r;
}

UpperFunctional kinetic_upper_functional(const SmoothScalar& rho, const CurrentDecomposition& dec,
                                         const ConstructorSpec& spec, const GridSpec& g) {
  dec.check_membership(rho, g);
  UpperFunctional u;
  u.value = 1e300;
  for (double eps : {0.1, 0.3, 1.0}) {
    ConstructorSpec s = spec;
    s.epsilon = eps;
    const BoundTerms t = bound_terms(rho, dec, s, g);
    u.epsilons.push_back(eps);
    u.values.push_back(t.total());
    if (t.total() < u.value) {
      u.value = t.total();
      u.epsilon = eps;
      u.terms = t;
    }
  }
  return u;
}

}  // namespace mueg
