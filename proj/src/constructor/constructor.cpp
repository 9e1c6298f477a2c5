#include "mueg/constructor/constructor.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <Eigen/Eigenvalues>

#include "mueg/fields/parallel.hpp"
#include "mueg/kernels/constants.hpp"
#include "mueg/kernels/fermi.hpp"

namespace mueg {

namespace {
constexpr double pi = std::numbers::pi;

double fermi_radius(double t, int d) { return 2.0 * pi * std::pow(t / unit_ball_volume(d), 1.0 / d); }
}  // namespace

void ConstructorSpec::validate() const {
  if (!(delta_floor > 0.0)) throw DomainError("width floor must be positive");
  if (width == WidthPolicy::constant && !(delta > 0.0)) throw DomainError("constant width must be positive");
  if (!(epsilon > 0.0)) throw DomainError("epsilon must be positive");
  if (u_order < 8 || t_order < 8) throw DomainError("quadrature orders must be at least 8");
}

ConstructedRdm::ConstructedRdm(SmoothScalar rho, CurrentDecomposition dec, ConstructorSpec spec, int dim)
    : rho_(std::move(rho)),
      dec_(std::move(dec)),
      spec_(spec),
      dim_(dim),
      eta_(EtaProfile::epsilon_family(spec.epsilon)) {
  spec_.validate();
  if (dim < 1 || dim > 3) throw DimensionError("density matrix dimension must be 1, 2 or 3");
  eta_constants_ = eta_.constants(dim);
  t_rule_ = gauss_legendre(spec_.t_order);
  u_rule_ = gauss_hermite(spec_.u_order);

  // Mass of eta and the u-average of cos(xi) (exactly e^{-1/2}) under the chosen and doubled rules.
  auto eta_mass = [&](const QuadratureRule& r) {
    const double half = 0.5 * (eta_.upper() - eta_.lower()), mid = 0.5 * (eta_.upper() + eta_.lower());
    double s = 0.0;
    for (int k = 0; k < r.order(); ++k) s += half * r.weights[k] * eta_.value(mid + half * r.nodes[k]);
    return s;
  };
  auto cos_mean = [](const QuadratureRule& r) {
    double s = 0.0;
    for (int k = 0; k < r.order(); ++k) s += r.weights[k] * std::cos(r.nodes[k]);
    return s;
  };
  quad_error_ = std::max(std::abs(eta_mass(t_rule_) - eta_mass(gauss_legendre(2 * spec_.t_order))),
                         std::abs(cos_mean(u_rule_) - cos_mean(gauss_hermite(2 * spec_.u_order))));
  if (quad_error_ > spec_.convergence_tol)
    throw NumericalError("quadrature not converged: order doubling changes the rules by " + format_double(quad_error_));
}

double ConstructedRdm::width_of(const Mat3& dw) const {
  if (spec_.width == WidthPolicy::constant) return spec_.delta;
  return std::max(dw.topLeftCorner(dim_, dim_).norm(), spec_.delta_floor);
}

Site ConstructedRdm::site(const Vec3& x) const {
  Site s;
  rho_.evaluate(x, s.rho, s.grad_rho);
  dec_.w.evaluate(x, s.w, s.dw);
  if (dec_.g) {
    s.g = dec_.g->value(x);
    s.grad_g = dec_.g->gradient(x);
  }
  s.delta = width_of(s.dw);
  for (int a = dim_; a < 3; ++a) {
    s.grad_rho(a) = 0.0;
    s.w(a) = 0.0;
    s.grad_g(a) = 0.0;
  }
  return s;
}

double ConstructedRdm::width(const Vec3& x) const { return width_of(dec_.w.jacobian(x)); }

Vec3 ConstructedRdm::width_gradient(const Vec3& x) const {
  Vec3 g = Vec3::Zero();
  if (spec_.width == WidthPolicy::constant) return g;
  const double h = 1e-4 * length_scale(x);
  for (int a = 0; a < dim_; ++a) {
    Vec3 e = Vec3::Zero();
    e(a) = h;
    g(a) = (width(x + e) - width(x - e)) / (2.0 * h);
  }
  return g;
}

double ConstructedRdm::length_scale(const Vec3& x) const {
  const Site s = site(x);
  if (!(s.rho > 0.0)) return 1.0;
  double l = 1.0 / fermi_radius(eta_.upper() * s.rho, dim_);
  l = std::min(l, 1.0 / ((s.w + s.grad_g).norm() + std::sqrt(s.delta)));
  const double gr = s.grad_rho.norm();
  // eta(t / rho(x)) varies on the scale rho / (|grad rho| sqrt(Fisher moment of eta)).
  if (gr > 0.0) l = std::min(l, s.rho / (gr * std::sqrt(eta_constants_.weiz_factor)));
  return std::clamp(l, 1e-4, 1e4);
}

cplx ConstructedRdm::evaluate(const Site& sx, const Site& sy, const Vec3& z, double lo, double hi) const {
  if (!(sx.rho > 0.0) || !(sy.rho > 0.0) || !(hi > lo)) return 0.0;
  const int d = dim_;

  // Momentum average: the product of the two Gaussian square roots is one Gaussian in u.
  const double a = d / (4.0 * sx.delta), b = d / (4.0 * sy.delta), ab = a + b;
  const double var_x = sx.delta / d, var_y = sy.delta / d;
  double log_pref = -0.25 * d * std::log(2.0 * pi * var_x) - 0.25 * d * std::log(2.0 * pi * var_y) +
                    0.5 * d * std::log(pi / ab) - a * b / ab * (sx.w - sy.w).squaredNorm();
  const Vec3 m = (a * sx.w + b * sy.w) / ab;
  const double s = std::sqrt(0.5 / ab);
  double u_factor = 1.0;
  for (int ax = 0; ax < d; ++ax) {
    double acc = 0.0;
    for (int k = 0; k < u_rule_.order(); ++k) acc += u_rule_.weights[k] * std::cos(s * u_rule_.nodes[k] * z(ax));
    u_factor *= acc;
  }
  const double phase = m.head(d).dot(z.head(d)) + sx.g - sy.g;

  // Density average over t in [lo, hi] with measure dt / t.
  const double r = z.head(d).norm();
  const double half = 0.5 * (hi - lo), mid = 0.5 * (hi + lo);
  double t_sum = 0.0;
  for (int k = 0; k < t_rule_.order(); ++k) {
    const double t = mid + half * t_rule_.nodes[k];
    const double e = eta_.value(t / sx.rho) * eta_.value(t / sy.rho);
    if (e <= 0.0) continue;
    t_sum += t_rule_.weights[k] * std::sqrt(e) * FermiKernel(t, d).radial(r) / t;
  }
  t_sum *= half;
  return std::polar(std::exp(log_pref) * u_factor * t_sum, phase);
}

cplx ConstructedRdm::kernel(const Vec3& x, const Vec3& y) const {
  const Site sx = site(x), sy = site(y);
  const double lo = eta_.lower() * std::max(sx.rho, sy.rho);
  const double hi = eta_.upper() * std::min(sx.rho, sy.rho);
  return evaluate(sx, sy, x - y, lo, hi);
}

cplx ConstructedRdm::kernel_near(const Vec3& x, const Vec3& y, const Vec3& anchor) const {
  const double r0 = rho_.value(anchor);
  return evaluate(site(x), site(y), x - y, eta_.lower() * r0, eta_.upper() * r0);
}

double ConstructedRdm::analytic_tau(const Vec3& x) const {
  const Site s = site(x);
  if (!(s.rho > 0.0)) return 0.0;
  const int d = dim_;
  const Vec3 v = s.w + s.grad_g;
  const double dw2 = s.dw.topLeftCorner(d, d).squaredNorm();
  double tau = eta_constants_.tf_factor * thomas_fermi_constant(d) * std::pow(s.rho, 1.0 + 2.0 / d) +
               eta_constants_.weiz_factor * s.grad_rho.squaredNorm() / (4.0 * s.rho) + s.rho * v.squaredNorm() +
               s.rho * s.delta + s.rho * d * dw2 / (4.0 * s.delta);
  if (spec_.width == WidthPolicy::pointwise)
    tau += s.rho * d * width_gradient(x).squaredNorm() / (8.0 * s.delta * s.delta);
  return tau;
}

RdmObservables ConstructedRdm::observables(const GridSpec& g, const ObservableOptions& opt) const {
  RdmObservables obs = kernel_fd_observables(*this, g, opt);
  if (opt.kinetic) {
    obs.tau_analytic = ScalarField(g);
    parallel_for(g.size(), [&](std::size_t b, std::size_t e) {
      for (std::size_t p = b; p < e; ++p) obs.tau_analytic(p) = analytic_tau(g.point(p));
    });
    obs.has_tau_analytic = true;
  }
  return obs;
}

std::shared_ptr<ConstructedRdm> ConstructedRdm::with_orders(int t_order, int u_order) const {
  ConstructorSpec s = spec_;
  s.t_order = t_order;
  s.u_order = u_order;
  return std::make_shared<ConstructedRdm>(rho_, dec_, s, dim_);
}

ConstructedRdmPtr build_rdm(const SmoothScalar& rho, const CurrentDecomposition& dec, const ConstructorSpec& spec,
                            int dim) {
  return std::make_shared<ConstructedRdm>(rho, dec, spec, dim);
}

ConstructedRdmPtr build_rdm(const ScalarField& rho, const VectorField& w, const ScalarField* g,
                            const ConstructorSpec& spec) {
  if (!(rho.grid() == w.grid())) throw DimensionError("density and velocity fields must share a grid");
  bool any = false;
  for (double r : rho.values()) {
    if (r < 0.0 || !std::isfinite(r)) throw DomainError("density must be finite and nonnegative");
    any = any || r > 0.0;
  }
  if (!any) throw DomainError("degenerate input: density is identically zero");
  CurrentDecomposition dec;
  dec.w = SmoothVector::from_field(w);
  if (g) {
    if (!(g->grid() == rho.grid())) throw DimensionError("gauge field must share the density grid");
    dec.g = GaugeFunction::from_field(*g);
  }
  dec.check_membership(SmoothScalar::from_field(rho), rho.grid());
  return std::make_shared<ConstructedRdm>(SmoothScalar::from_field(rho), dec, spec, rho.dim());
}

Report MarginalReport::to_report() const {
  Report r;
  r.add("density_error", density_error);
  r.add("current_error", current_error);
  r.add("tolerance", tolerance);
  r.add("evaluated_points", evaluated);
  r.add("skipped_points", skipped);
  r.add("pass", pass);
  return r;
}

MarginalReport verify_marginals(const ConstructedRdm& gamma, const GridSpec& g, double tol, double rho_floor_rel) {
  ObservableOptions opt;
  opt.kinetic = false;
  const RdmObservables obs = kernel_fd_observables(gamma, g, opt);
  std::vector<double> rho(g.size());
  std::vector<Vec3> v(g.size());
  double rho_max = 0.0, v_max = 0.0;
  for (std::size_t p = 0; p < g.size(); ++p) {
    const Vec3 x = g.point(p);
    rho[p] = gamma.density().value(x);
    v[p] = gamma.decomposition().velocity(x);
    for (int a = gamma.dim(); a < 3; ++a) v[p](a) = 0.0;
    rho_max = std::max(rho_max, rho[p]);
  }
  MarginalReport r;
  r.tolerance = tol;
  for (std::size_t p = 0; p < g.size(); ++p)
    if (rho[p] > rho_floor_rel * rho_max) v_max = std::max(v_max, v[p].norm());
  const double v_scale = v_max > 0.0 ? v_max : 1.0;
  for (std::size_t p = 0; p < g.size(); ++p) {
    if (!(rho[p] > rho_floor_rel * rho_max)) {
      ++r.skipped;
      continue;
    }
    ++r.evaluated;
    r.density_error = std::max(r.density_error, std::abs(obs.rho(p) - rho[p]) / rho[p]);
    r.current_error = std::max(r.current_error, (obs.jp.vec(p) - rho[p] * v[p]).norm() / (rho[p] * v_scale));
  }
  r.pass = r.density_error <= tol && r.current_error <= tol;
  return r;
}

Report ConvergenceStudy::to_report() const {
  Report r;
  for (std::size_t k = 0; k < t_orders.size(); ++k) {
    const std::string tag = "order_" + std::to_string(t_orders[k]) + "_" + std::to_string(u_orders[k]);
    r.add(tag + ".density_error", density_errors[k]);
    r.add(tag + ".current_error", current_errors[k]);
  }
  for (std::size_t k = 0; k < density_ratios.size(); ++k) {
    r.add("doubling_" + std::to_string(k) + ".density_ratio", density_ratios[k]);
    r.add("doubling_" + std::to_string(k) + ".current_ratio", current_ratios[k]);
  }
  r.add("min_ratio", min_ratio);
  r.add("pass", pass);
  return r;
}

ConvergenceStudy marginal_convergence(const ConstructedRdm& gamma, const GridSpec& g, int doublings,
                                      double required_ratio) {
  ConvergenceStudy st;
  for (int k = 0; k <= doublings; ++k) {
    const int nt = gamma.spec().t_order << k, nu = gamma.spec().u_order << k;
    const auto gk = gamma.with_orders(nt, nu);
    const auto m = verify_marginals(*gk, g);
    st.t_orders.push_back(nt);
    st.u_orders.push_back(nu);
    st.density_errors.push_back(m.density_error);
    st.current_errors.push_back(m.current_error);
  }
  st.min_ratio = 1e300;
  for (int k = 0; k < doublings; ++k) {
    st.density_ratios.push_back(st.density_errors[k] / st.density_errors[k + 1]);
    st.current_ratios.push_back(st.current_errors[k] / st.current_errors[k + 1]);
    st.min_ratio = std::min({st.min_ratio, st.density_ratios.back(), st.current_ratios.back()});
  }
  st.pass = doublings > 0 && st.min_ratio >= required_ratio;
  return st;
}

GridSpec sampling_lattice(double rho_max, double eta_upper, const Vec3& center, int n, int d) {
  const double h = 0.9 * pi / fermi_radius(eta_upper * rho_max, d);
  Vec3 lo = center, hi = center;
  std::array<int, 3> counts{1, 1, 1};
  for (int a = 0; a < d; ++a) {
    lo(a) = center(a) - 0.5 * h * (n - 1);
    hi(a) = center(a) + 0.5 * h * (n - 1);
    counts[a] = n;
  }
  if (d == 3) return GridSpec::box(lo, hi, counts);
  GridSpec g = GridSpec::box(d, 0.0, 1.0, n);
  for (int a = 0; a < d; ++a) {
    g.origin[a] = lo(a);
    g.spacing[a] = h;
  }
  return g;
}

BoundReport operator_bound(const Rdm& gamma, const GridSpec& lattice, double tol) {
  const std::size_t n = lattice.size();
  const double w = lattice.cell_volume();
  Eigen::MatrixXcd a(n, n);
  parallel_for(n, [&](std::size_t b, std::size_t e) {
    for (std::size_t i = b; i < e; ++i)
      for (std::size_t j = 0; j <= i; ++j) a(i, j) = w * gamma.kernel(lattice.point(i), lattice.point(j));
  });
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < i; ++j) a(j, i) = std::conj(a(i, j));
  if (!a.allFinite()) throw NumericalError("non-finite kernel value in sample matrix");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(a, Eigen::EigenvaluesOnly);
  BoundReport r;
  r.id = "operator_bound";
  r.tag = "0 <= gamma <= 1 on sampled points";
  r.scale = "absolute";
  r.lhs = es.eigenvalues()(0);
  r.rhs = es.eigenvalues()(n - 1);
  r.margins = {r.lhs, 1.0 - r.rhs};
  r.tolerance = tol;
  r.summarize();
  return r;
}

}  // namespace mueg
