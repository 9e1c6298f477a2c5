#pragma once

#include "mueg/fields/field.hpp"
#include "mueg/rdm/rdm.hpp"

namespace mueg {

// D(mu1, mu2) = 1/2 double integral mu1(x) mu2(y) / |x - y| on the common grid. The cell
// containing x = y uses the average of 1/r over a ball of the cell's volume.
double coulomb_direct(const ScalarField& mu1, const ScalarField& mu2);

// 1/2 double integral |gamma(x,y)|^2 / |x - y| >= 0. Low-rank states use orbital products;
// other states evaluate the kernel at every pair of grid points.
double coulomb_exchange(const Rdm& gamma, const GridSpec& g);

// Coulomb energy of the quasi-free state, 1/2 double integral (rho(x)rho(y) - |gamma(x,y)|^2)/|x-y|,
// from the pair density directly.
double quasi_free_coulomb(const Rdm& gamma, const GridSpec& g);

}  // namespace mueg
