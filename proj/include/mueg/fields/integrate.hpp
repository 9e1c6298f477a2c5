#pragma once

#include <vector>

#include "mueg/fields/field.hpp"

namespace mueg {

// One-dimensional weights of the trapezoid rule with Gregory endpoint corrections
// (exact for cubics); plain trapezoid when fewer than 6 nodes.
std::vector<double> axis_weights(int n, double h);

// Tensor-product weights over the grid, one per point.
std::vector<double> grid_weights(const GridSpec& g);

double integrate(const ScalarField& f);
double integrate_weighted(const ScalarField& f, const ScalarField& w);
// Integral of raw point data laid out on g; throws NumericalError on NaN.
double integrate_values(const GridSpec& g, const std::vector<double>& v);

}  // namespace mueg
