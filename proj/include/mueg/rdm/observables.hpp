#pragma once

#include <vector>

#include "mueg/fields/field.hpp"

namespace mueg {

class Rdm;

struct ObservableOptions {
  // Finite-difference step for kernel derivatives; 0 selects 1e-3 times the kernel length scale.
  double fd_step = 0.0;
  // Quotients by rho are formed only where rho > rho_floor_rel * max rho.
  double rho_floor_rel = 1e-12;
  // Off-diagonal kinetic tensor entries are skipped when false (trace only).
  bool full_tensor = true;
  // Kinetic quantities are skipped entirely when false (density and current only).
  bool kinetic = true;
  // Maximum allowed deviation of orbital overlaps from the identity; negative disables the check.
  double orthonormality_tol = 1e-8;
};

// Diagonal one-body quantities of a density matrix on a grid.
// zeta_a = d_{x_a} gamma(x,y)|_{y=x}, tau_tensor_ab = d_{x_a} d_{y_b} gamma|_{y=x}.
struct RdmObservables {
  GridSpec grid;
  ScalarField rho;
  ComplexVectorField zeta;
  VectorField jp;
  ScalarField tau;
  ComplexTensorField tau_tensor;
  // Intrinsic tensor tau - zeta zeta^* / rho.
  ComplexTensorField omega;
  // rho D_a(jp/rho) from the antisymmetric part of Im omega.
  TensorField rho_da;
  // curl(jp/rho) by grid stencils (d = 3 only).
  VectorField vorticity;
  std::vector<unsigned char> valid;
  double rho_floor = 0.0;
  // Tr(-Laplacian gamma): orbital-wise for low-rank states, integral of tau otherwise.
  double kinetic_energy = 0.0;
  // Kinetic density from an independent closed-form path when the state provides one.
  ScalarField tau_analytic;
  bool has_tau_analytic = false;
};

// Fills jp, tau, omega, rho_da, vorticity and valid from rho, zeta and tau_tensor.
void finalize_observables(RdmObservables& obs, double rho_floor_rel);

// Observables by finite differences of the kernel at every grid point.
RdmObservables kernel_fd_observables(const Rdm& rdm, const GridSpec& g, const ObservableOptions& opt = {});

// rho D_a(jp/rho) by grid stencils applied to jp/rho (zero where rho is below the floor).
TensorField stencil_rho_da(const RdmObservables& obs);

// Integral of |jp|^2 / rho over valid points.
double gauge_term(const RdmObservables& obs);
// Integral of |grad sqrt(rho)|^2 = |Re zeta|^2 / rho over valid points.
double weizsacker_term(const RdmObservables& obs);

}  // namespace mueg
