#pragma once

#include <array>
#include <string>
#include <vector>

#include "mueg/report.hpp"
#include "mueg/rdm/observables.hpp"

namespace mueg {

// Inequality check result. Margins are rhs - lhs divided by the stated scale, so a check
// passes when every margin is at least -tolerance.
struct BoundReport {
  std::string id;
  std::string tag;
  std::string scale;
  double lhs = 0.0;
  double rhs = 0.0;
  std::vector<double> margins;
  double min_margin = 0.0;
  double mean_margin = 0.0;
  double tolerance = 0.0;
  std::size_t evaluated = 0;
  std::size_t skipped = 0;
  bool pass = false;

  // Fills min/mean/pass from margins.
  void summarize();
  Report to_report() const;
};

enum class VorticityRoute { tensor, stencil };

struct PointwiseOptions {
  double tolerance = 1e-10;
  VorticityRoute route = VorticityRoute::tensor;
  int boundary_margin = 2;
};

// [0]: |grad sqrt rho|^2 + |jp|^2/rho + rho |D_a(jp/rho)| / sqrt(d) <= tau
// [1]: |jp| <= |zeta| <= sqrt(tau rho)
// Margins are divided by the local tau.
std::array<BoundReport, 2> check_pointwise_bounds(const RdmObservables& obs, const PointwiseOptions& opt = {});

// Tr(-Laplacian gamma) >= int |grad sqrt rho|^2 + int |jp|^2/rho + c int rho |nu|, c = 1/sqrt(6)
// or 1 in strict mode. The margin is divided by Tr(-Laplacian gamma).
BoundReport check_integrated_bound(const RdmObservables& obs, bool strict = false, double tolerance = 1e-8,
                                   VorticityRoute route = VorticityRoute::tensor);

}  // namespace mueg
