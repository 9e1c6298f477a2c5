#pragma once

#include "mueg/fields/grid.hpp"

namespace mueg {

// Kernel of the projection onto the Fermi ball of density t:
// f_t(z) = (2 pi)^{-d} * integral over |k| <= k_F of e^{i k.z} dk.
class FermiKernel {
 public:
  FermiKernel(double t, int d);

  double density() const { return t_; }
  int dim() const { return d_; }
  double fermi_radius() const { return kf_; }

  double radial(double r) const;
  double value(const Vec3& z) const;
  // Gradient of z -> f_t(z); equals the x-gradient of f_t(x - y).
  Vec3 gradient(const Vec3& z) const;
  // -Laplacian of f_t at the origin, c_TF t^{1+2/d}.
  double diagonal_kinetic_density() const;

 private:
  double t_;
  int d_;
  double kf_;
};

// Fermi ball shifted to centre u: kernel e^{i u.z} f_t(z).
class ShiftedFermiKernel {
 public:
  ShiftedFermiKernel(FermiKernel base, const Vec3& u) : base_(base), u_(u) {}

  const FermiKernel& base() const { return base_; }
  const Vec3& shift() const { return u_; }
  cplx value(const Vec3& z) const;

 private:
  FermiKernel base_;
  Vec3 u_;
};

struct KernelObservables {
  double density = 0.0;
  Vec3 current = Vec3::Zero();
  double kinetic_density = 0.0;
};

KernelObservables shifted_kernel_observables(const ShiftedFermiKernel& k);

}  // namespace mueg
