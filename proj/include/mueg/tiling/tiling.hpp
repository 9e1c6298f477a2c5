#pragma once

#include <array>
#include <cstdint>
#include <ostream>
#include <vector>

#include "mueg/report.hpp"
#include "mueg/tiling/geometry.hpp"
#include "mueg/tiling/mollifier.hpp"

namespace mueg {

// Split of the unit cube (-1/2, 1/2)^3 into 24 congruent tetrahedra with vertices
// {cube centre, face centre, both ends of one edge of that face}.
// Tetrahedron j is T_j(Delta) with T_j x = R_j x - z_j, R_j in SO(3), and Delta has barycentre 0.
class TetraDecomposition {
 public:
  TetraDecomposition();

  const std::array<Vec3, 4>& reference() const { return reference_; }
  const Mat3& rotation(int j) const { return rotations_[j]; }
  const Vec3& shift(int j) const { return shifts_[j]; }
  // Vertices of l T_j (s Delta) + l z, where s shrinks the tetrahedron about its barycentre.
  std::array<Vec3, 4> vertices(int j, double l = 1.0, const Vec3& z = Vec3::Zero(), double s = 1.0) const;
  ConvexPolyhedron tetrahedron(int j, double l = 1.0, const Vec3& z = Vec3::Zero(), double s = 1.0) const;
  ConvexPolyhedron reference_polyhedron(double l = 1.0) const;
  // Barycentric coordinates of x with respect to tetrahedron j of the unit cube.
  std::array<double, 4> barycentric(int j, const Vec3& x) const;
  // Cell and tetrahedron index of x at scale l, decided by the face and edge cone of the cube.
  std::pair<Vec3, int> locate(const Vec3& x, double l = 1.0) const;

  static constexpr int count = 24;

 private:
  std::array<Vec3, 4> reference_;
  std::array<Mat3, 24> rotations_;
  std::array<Vec3, 24> shifts_;
  std::array<Mat3, 24> inverse_edges_;
  std::array<Vec3, 24> base_;
};

struct IndicatorSum {
  double value = 0.0;
  int hits = 0;
  // Some tetrahedron saw x within the face tolerance.
  bool on_face = false;
};

// Sum over z and j of 1_{l T_j Delta}(x - l z) by signed barycentric tests.
IndicatorSum pou_indicator_sum(const Vec3& x, const TetraDecomposition& dec, double l, double face_tol = 1e-14);

struct TilingMonteCarlo {
  std::size_t samples = 0;
  std::size_t face_rejects = 0;
  std::size_t covered = 0;
  std::size_t overlapped = 0;
  std::array<std::size_t, 24> counts{};
  double coverage = 0.0, coverage_sigma = 0.0;
  double overlap = 0.0, overlap_sigma = 0.0;
  // Largest |count / samples - 1/24| in units of its binomial standard deviation.
  double max_volume_z = 0.0;
  // Threshold on max_volume_z giving a family-wise 3-sigma level (0.27%) over the 24 volumes.
  double volume_z_threshold = 0.0;
  bool pass = false;
  Report to_report() const;
};

// Uniform samples of the cube; face-incident samples are redrawn.
TilingMonteCarlo tiling_monte_carlo(const TetraDecomposition& dec, std::size_t samples, std::uint64_t seed);

enum class AverageMethod { quadrature, monte_carlo };

struct PouAverage {
  double value = 0.0;
  double standard_error = 0.0;
  std::size_t evaluations = 0;
};

// Average over tau in C_l of sum_{z,j} (1 - delta/l)^{-3} (1_{l T_j (1 - delta/l) Delta} * eta_delta)(x - tau - l z).
// The quadrature method unfolds the tau-average and sum over z into integrals over R^3 of each smeared
// tetrahedron, evaluated by Fubini with collapsed Gauss-Legendre on the tetrahedron and radial Gauss-Legendre
// for the mollifier. The Monte-Carlo method samples tau and evaluates the smeared indicators pointwise.
PouAverage pou_regularized_average(const Vec3& x, const TetraDecomposition& dec, double l, double delta,
                                   AverageMethod method = AverageMethod::quadrature, std::size_t samples = 4096,
                                   std::uint64_t seed = 1, int order = 8);

// The pointwise sum sum_{z,j} (1 - delta/l)^{-3} (1_{l T_j (1 - delta/l) Delta} * eta_delta)(y - l z).
double pou_regularized_sum(const Vec3& y, const TetraDecomposition& dec, double l, double delta);

struct IndexClassification {
  double l = 0.0, delta = 0.0, delta_target = 0.0;
  std::vector<std::pair<std::array<int, 3>, int>> j_all;
  std::vector<std::pair<std::array<int, 3>, int>> j_inner;
  double target_volume = 0.0;
  // Volume |l Delta| |J_0| of the inner tetrahedra and |l Delta| |J \ J_0| of the boundary band.
  double inner_volume = 0.0;
  double band_volume = 0.0;
  // Largest distance from a band tetrahedron vertex to the target boundary.
  double band_reach = 0.0;
  Report to_report() const;
};

// Tetrahedra l T_j Delta + l z of the tiling (fixed rotation and translation) whose smeared support meets the
// smeared target (J), and those whose smeared support lies in the target shrunk by delta_target (J_0).
// Both tests are exact for convex targets: distance to the body, and depth of every vertex.
IndexClassification classify_indices(const ConvexPolyhedron& target, const TetraDecomposition& dec, double l,
                                     double delta, double delta_target);

// OFF mesh of the 24 tetrahedra of C_l.
void write_off(std::ostream& os, const TetraDecomposition& dec, double l = 1.0);

Report decomposition_report(const TetraDecomposition& dec);

}  // namespace mueg
