#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "mueg/rdm/rdm.hpp"

namespace mueg {

// phi(x) = P(y) exp(-y.A y / 2) e^{i k.x}, y = x - c, P(y) = p0 + p.y + y.S y with complex coefficients.
struct GaussianOrbitalSpec {
  Vec3 center = Vec3::Zero();
  Mat3 precision = Mat3::Identity();
  Vec3 wavevector = Vec3::Zero();
  cplx p0 = 1.0;
  CVec3 p1 = CVec3::Zero();
  CMat3 p2 = CMat3::Zero();
};

Orbital gaussian_orbital(const GaussianOrbitalSpec& s);

// Linear combinations making the orbitals orthonormal under the grid quadrature.
std::vector<Orbital> orthonormalize(const std::vector<Orbital>& orbitals, const GridSpec& g);

// Random set of n complex orbitals, orthonormalized on g.
std::vector<Orbital> random_orbitals(std::uint64_t seed, int n, const GridSpec& g);

// Grid used by the bundled random orbital corpus.
GridSpec corpus_grid();

// n orthonormal random orbitals with occupations drawn uniformly from [0, 1).
std::shared_ptr<LowRankRdm> random_slater_state(std::uint64_t seed, int n, const GridSpec& g);

}  // namespace mueg
