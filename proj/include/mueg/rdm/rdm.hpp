#pragma once

#include <functional>
#include <memory>
#include <vector>

#include "mueg/fields/field.hpp"
#include "mueg/fields/interp.hpp"
#include "mueg/kernels/fermi.hpp"
#include "mueg/rdm/observables.hpp"

namespace mueg {

// Hermitian one-particle kernel gamma(x, y).
class Rdm {
 public:
  virtual ~Rdm() = default;
  virtual int dim() const = 0;
  virtual cplx kernel(const Vec3& x, const Vec3& y) const = 0;
  // Kernel for x, y within a few difference steps of `anchor`. Implementations may freeze
  // anchor-dependent quadrature so that the result is smooth in (x, y).
  virtual cplx kernel_near(const Vec3& x, const Vec3& y, const Vec3& /*anchor*/) const { return kernel(x, y); }
  // Length on which the kernel varies near x.
  virtual double length_scale(const Vec3& /*x*/) const { return 1.0; }
  virtual RdmObservables observables(const GridSpec& g, const ObservableOptions& opt = {}) const;
};

using RdmPtr = std::shared_ptr<const Rdm>;

struct Orbital {
  std::function<cplx(const Vec3&)> value;
  // Optional analytic gradient; grid stencils are used when empty.
  std::function<CVec3(const Vec3&)> gradient;

  static Orbital from_field(const ComplexScalarField& f);
};

class LowRankRdm : public Rdm {
 public:
  LowRankRdm(std::vector<Orbital> orbitals, std::vector<double> occupations, int dim = 3);

  int dim() const override { return dim_; }
  cplx kernel(const Vec3& x, const Vec3& y) const override;
  RdmObservables observables(const GridSpec& g, const ObservableOptions& opt = {}) const override;

  const std::vector<Orbital>& orbitals() const { return orbitals_; }
  const std::vector<double>& occupations() const { return occupations_; }
  double trace() const;
  // Largest |<phi_j, phi_k> - delta_jk| by grid quadrature.
  double orthonormality_defect(const GridSpec& g) const;
  // Sampled orbital values and gradients (analytic where available).
  void sample(const GridSpec& g, std::vector<ComplexScalarField>& values, std::vector<ComplexVectorField>& grads) const;

 private:
  std::vector<Orbital> orbitals_;
  std::vector<double> occupations_;
  int dim_;
};

// Translation-invariant shifted Fermi sphere as a density matrix.
class FermiRdm : public Rdm {
 public:
  explicit FermiRdm(ShiftedFermiKernel k) : k_(k) {}
  int dim() const override { return k_.base().dim(); }
  cplx kernel(const Vec3& x, const Vec3& y) const override { return k_.value(x - y); }
  double length_scale(const Vec3&) const override;
  const ShiftedFermiKernel& fermi() const { return k_; }

 private:
  ShiftedFermiKernel k_;
};

class GaugeFunction {
 public:
  GaugeFunction(std::function<double(const Vec3&)> value, std::function<Vec3(const Vec3&)> gradient);
  // g(x) = x.Q x / 2 + b.x + c
  static GaugeFunction quadratic(const Mat3& q, const Vec3& b = Vec3::Zero(), double c = 0.0);
  static GaugeFunction linear(const Vec3& k) { return quadratic(Mat3::Zero(), k); }
  static GaugeFunction from_field(const ScalarField& g);

  double value(const Vec3& x) const { return value_(x); }
  Vec3 gradient(const Vec3& x) const { return gradient_(x); }
  // Gradient sampled on a grid, cached for repeated use with the same grid.
  const VectorField& gradient_field(const GridSpec& g) const;

 private:
  std::function<double(const Vec3&)> value_;
  std::function<Vec3(const Vec3&)> gradient_;
  mutable std::shared_ptr<VectorField> cache_;
};

// gamma~(x,y) = e^{i(g(y) - g(x))} gamma(x,y): rho unchanged, jp -> jp - rho grad g.
RdmPtr gauge_transform(const RdmPtr& gamma, const GaugeFunction& g);

// gamma_T(x,y) = |det M| gamma(Mx + a, My + a).
RdmPtr affine_transform(const RdmPtr& gamma, const Mat3& m, const Vec3& a);

struct DensityCurrentPair {
  std::function<double(const Vec3&)> rho;
  std::function<Vec3(const Vec3&)> jp;
};

// (rho, jp) -> (|det M| rho(Tx), |det M| M^T jp(Tx)).
DensityCurrentPair affine_transform_pair(const DensityCurrentPair& p, const Mat3& m, const Vec3& a);

}  // namespace mueg
