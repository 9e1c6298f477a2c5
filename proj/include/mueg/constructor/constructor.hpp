#pragma once

#include <memory>
#include <vector>

#include "mueg/constructor/inputs.hpp"
#include "mueg/fields/quadrature.hpp"
#include "mueg/kernels/profiles.hpp"
#include "mueg/rdm/bounds.hpp"
#include "mueg/rdm/rdm.hpp"

namespace mueg {

enum class WidthPolicy { constant, pointwise };

struct ConstructorSpec {
  WidthPolicy width = WidthPolicy::pointwise;
  // Momentum-space second moment for the constant policy.
  double delta = 1.0;
  // Lower bound on the pointwise width max(|Dw(x)|, floor).
  double delta_floor = 1e-3;
  // The density profile lives on [1, 1 + epsilon].
  double epsilon = 1.0;
  int u_order = 16;
  int t_order = 48;
  // Largest accepted change of the quadrature rules under order doubling.
  double convergence_tol = 1e-6;

  void validate() const;
};

// Pointwise inputs of the kernel at one site.
struct Site {
  double rho = 0.0;
  Vec3 grad_rho = Vec3::Zero();
  Vec3 w = Vec3::Zero();
  Mat3 dw = Mat3::Zero();
  double delta = 1.0;
  double g = 0.0;
  Vec3 grad_g = Vec3::Zero();
};

// Density matrix averaging shifted Fermi kernels over a momentum profile theta(u - w) and
// a density profile eta(t / rho), followed by the gauge phase e^{i(g(x) - g(y))}.
class ConstructedRdm : public Rdm {
 public:
  ConstructedRdm(SmoothScalar rho, CurrentDecomposition dec, ConstructorSpec spec, int dim = 3);

  int dim() const override { return dim_; }
  cplx kernel(const Vec3& x, const Vec3& y) const override;
  // Freezes the t-rule on the support of eta(t / rho(anchor)).
  cplx kernel_near(const Vec3& x, const Vec3& y, const Vec3& anchor) const override;
  double length_scale(const Vec3& x) const override;
  // Kernel finite differences plus the closed-form kinetic density in tau_analytic.
  RdmObservables observables(const GridSpec& g, const ObservableOptions& opt = {}) const override;

  Site site(const Vec3& x) const;
  double width(const Vec3& x) const;
  // Gradient of the pointwise width by central differences (zero for the constant policy).
  Vec3 width_gradient(const Vec3& x) const;
  // Closed-form kinetic density at x.
  double analytic_tau(const Vec3& x) const;

  const SmoothScalar& density() const { return rho_; }
  const CurrentDecomposition& decomposition() const { return dec_; }
  const ConstructorSpec& spec() const { return spec_; }
  const EtaProfile& eta() const { return eta_; }
  const EtaConstants& eta_constants() const { return eta_constants_; }
  // Change of the t and u rules under order doubling, recorded at construction.
  double quadrature_error_estimate() const { return quad_error_; }
  // Same inputs with other quadrature orders.
  std::shared_ptr<ConstructedRdm> with_orders(int t_order, int u_order) const;

 private:
  cplx evaluate(const Site& sx, const Site& sy, const Vec3& z, double lo, double hi) const;
  double width_of(const Mat3& dw) const;

  SmoothScalar rho_;
  CurrentDecomposition dec_;
  ConstructorSpec spec_;
  int dim_;
  EtaProfile eta_;
  EtaConstants eta_constants_;
  QuadratureRule t_rule_;
  QuadratureRule u_rule_;
  double quad_error_ = 0.0;
};

using ConstructedRdmPtr = std::shared_ptr<const ConstructedRdm>;

ConstructedRdmPtr build_rdm(const SmoothScalar& rho, const CurrentDecomposition& dec, const ConstructorSpec& spec,
                            int dim = 3);
// Grid-backed inputs; an empty g field means g = 0.
ConstructedRdmPtr build_rdm(const ScalarField& rho, const VectorField& w, const ScalarField* g,
                            const ConstructorSpec& spec);

struct MarginalReport {
  double density_error = 0.0;
  double current_error = 0.0;
  double tolerance = 1e-6;
  std::size_t evaluated = 0;
  std::size_t skipped = 0;
  bool pass = false;
  Report to_report() const;
};

// Largest |rho_gamma - rho| / rho and |jp_gamma - rho v| / (rho max|v|) over grid points with
// rho above rho_floor_rel * max rho. Current errors are absolute in units of rho when v = 0.
MarginalReport verify_marginals(const ConstructedRdm& gamma, const GridSpec& g, double tol = 1e-6,
                                double rho_floor_rel = 1e-8);

struct ConvergenceStudy {
  std::vector<int> t_orders;
  std::vector<int> u_orders;
  std::vector<double> density_errors;
  std::vector<double> current_errors;
  // Error at each order over the error at the doubled order.
  std::vector<double> density_ratios;
  std::vector<double> current_ratios;
  double min_ratio = 0.0;
  bool pass = false;
  Report to_report() const;
};

// Marginal errors at the spec orders times 2^k, k = 0..doublings.
ConvergenceStudy marginal_convergence(const ConstructedRdm& gamma, const GridSpec& g, int doublings = 1,
                                      double required_ratio = 4.0);

// Evenly spaced points fine enough that every Fermi ball in the construction fits the
// reciprocal cell: spacing = 0.9 pi / k_F(b rho_max).
GridSpec sampling_lattice(double rho_max, double eta_upper, const Vec3& center, int n, int d = 3);

// Eigenvalues of h^{d/2} gamma(x_i, x_j) h^{d/2} must lie in [-tol, 1 + tol].
// lhs and rhs carry the smallest and largest eigenvalue.
BoundReport operator_bound(const Rdm& gamma, const GridSpec& lattice, double tol = 1e-8);

}  // namespace mueg
