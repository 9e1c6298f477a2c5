#pragma once

#include <optional>
#include <string>
#include <vector>

#include "mueg/constructor/constructor.hpp"
#include "mueg/constructor/ledger.hpp"
#include "mueg/rdm/bounds.hpp"
#include "mueg/report.hpp"
#include "mueg/tiling/geometry.hpp"
#include "mueg/tiling/mollifier.hpp"

namespace mueg {

enum class DomainKind { tetrahedron, box };

// l Delta (the reference tetrahedron of the cube split) or the cube (-l/2, l/2)^3. Both have barycentre 0.
ConvexPolyhedron ueg_domain(DomainKind kind, double l);
DomainKind parse_domain_kind(const std::string& s);
std::string to_string(DomainKind kind);

// Density rho0 (1_omega * eta_delta) with velocity nu0 x x / 2, so jp = rho nu0 x x / 2 and g = 0.
class UegTrial {
 public:
  UegTrial(double rho0, const Vec3& nu0, ConvexPolyhedron omega, double delta, GridSpec grid);

  double rho0() const { return rho0_; }
  const Vec3& nu0() const { return nu0_; }
  const ConvexPolyhedron& domain() const { return omega_; }
  const Mollifier& mollifier() const { return mollifier_; }
  const GridSpec& grid() const { return grid_; }

  // Smeared density with its gradient. Values in the transition layer are memoized per point.
  const SmoothScalar& density() const { return density_; }
  CurrentDecomposition decomposition() const;
  ScalarField density_field() const;
  VectorField current_field() const;
  // Exact moments of 1_omega * eta_delta.
  const SmearedMoments& moments() const { return moments_; }
  double volume() const { return omega_.volume(); }
  // (1/|omega|) int rho |nu0 x x / 2|^2 from the exact second moment.
  double gauge_correction_per_volume() const;

 private:
  double rho0_;
  Vec3 nu0_;
  ConvexPolyhedron omega_;
  Mollifier mollifier_;
  GridSpec grid_;
  SmoothScalar density_;
  SmearedMoments moments_;
};

// Box grid with n points per axis covering the support of 1_omega * eta_delta plus two cells.
GridSpec covering_grid(const ConvexPolyhedron& omega, double delta, int n);
// Smallest n for which the covering grid spacing is at most `ratio` times the mollifier radius.
int resolving_points(const ConvexPolyhedron& omega, double delta, double ratio = 1.0);

// Throws DomainError when delta/10 exceeds half the diameter of omega, when rho0 < 0, or when the grid
// misses part of the support.
UegTrial build_trial(double rho0, const Vec3& nu0, const ConvexPolyhedron& omega, double delta,
                     std::optional<GridSpec> grid = std::nullopt, int points = 32);

struct TrialInvariants {
  // Largest |curl(jp / rho) - nu0| over interior grid points with rho above the floor.
  double vorticity_error = 0.0;
  // |D_s(nu0 x x / 2)| and ||D(nu0 x x / 2)| - |nu0| / sqrt 2|.
  double symmetric_strain = 0.0;
  double jacobian_norm_error = 0.0;
  // |int x (1_omega * eta)| / (|omega| diam omega), from the exact moments.
  double barycentre_error = 0.0;
  std::size_t evaluated = 0;
  bool pass = false;
  Report to_report() const;
};

TrialInvariants check_trial_invariants(const UegTrial& trial, double rho_floor_rel = 1e-6, double tol = 1e-8);

struct GaugeScan {
  std::vector<double> scales;
  std::vector<double> values;
  double exponent = 0.0;
  double constant = 0.0;
  double max_residual = 0.0;
  bool fitted = false;
  Report to_report() const;
};

// Gauge correction per volume on the domains l omega at fixed delta, fitted to C l^p in log-log.
// nu0 = 0 or rho0 = 0 gives identically zero values and no fit. Throws DomainError for fewer than
// four distinct positive scales and NumericalError for a degenerate fit.
GaugeScan gauge_term_scan(double rho0, const Vec3& nu0, const ConvexPolyhedron& omega, double delta,
                          const std::vector<double>& scales);

struct SurrogateOptions {
  ConstructorSpec spec;
  // Exchange refinement from the constructed density matrix, on a box grid over the trial grid.
  bool exchange = false;
  int exchange_points = 16;
};

// Upper-bound surrogates per unit volume. Every value is a constructor-based upper bound; the report says so.
struct EnergyPerVolumeReport {
  double rho0 = 0.0;
  Vec3 nu0 = Vec3::Zero();
  double delta = 0.0;
  double scale = 0.0;
  double volume = 0.0;
  // Right-hand side of the kinetic bound minimized over epsilon, per volume.
  double kinetic_per_volume = 0.0;
  double gauge_correction_per_volume = 0.0;
  double corrected_kinetic_per_volume = 0.0;
  double tf_per_volume = 0.0;
  double weizsacker_per_volume = 0.0;
  double gauge_term_per_volume = 0.0;
  double strain_per_volume = 0.0;
  double floor_per_volume = 0.0;
  double width_gradient_per_volume = 0.0;
  double epsilon = 0.0;
  // 1 + kappa1 epsilon at the selected epsilon.
  double tf_factor = 0.0;
  // int (1 * eta)^{5/3} / |omega| on the grid, at most 1.
  double tf_filling = 0.0;
  // Largest grid spacing over the mollifier radius. The layer terms need it near 1 or below.
  double layer_resolution = 0.0;
  bool exchange_computed = false;
  double exchange_per_volume = 0.0;
  // Kinetic bound minus exchange minus gauge correction, per volume.
  double energy_per_volume = 0.0;
  bool surrogate = true;

  Report to_report() const;
  static std::string tsv_header();
  std::string tsv_row() const;
};

EnergyPerVolumeReport surrogate_energies(const UegTrial& trial, const SurrogateOptions& opt = {});

struct IsometryCheck {
  // Bound on the translated trial and on the trial with vorticity R nu0, plus the predicted offset.
  double lhs = 0.0;
  double rhs_rotated = 0.0;
  double predicted_offset = 0.0;
  double measured_offset = 0.0;
  // |lhs - rhs_rotated - predicted_offset| / |lhs| and the same excess over the predicted offset.
  double discrepancy = 0.0;
  double offset_error = 0.0;
  double barycentre_error = 0.0;
  // The translated grid is the image of the trial grid, so both sides see the same points.
  bool grid_exact = false;
  double tolerance = 1e-6;
  bool pass = false;
  BoundReport bound;
  Report to_report() const;
};

// Compares the kinetic bound of the trial on T^{-1}(omega), T x = R x + a, with that of the trial on omega
// with vorticity R nu0 plus (rho0/4)|R nu0 x a|^2 int (1 * eta). When R is a signed permutation the
// translated trial is sampled on the preimage of the trial grid; otherwise on a fresh grid of equal spacing.
// Throws DomainError unless omega has barycentre 0 and R is orthogonal.
IsometryCheck isometry_identity_check(const UegTrial& trial, const Mat3& r, const Vec3& a,
                                      const ConstructorSpec& spec = {}, double tol = 1e-6);

enum class DeltaPolicy { fixed, thermodynamic };

// Fixed width, or delta = l^{-1/3} rho0^{-4/9}.
double policy_delta(DeltaPolicy policy, double fixed, double l, double rho0);

}  // namespace mueg
