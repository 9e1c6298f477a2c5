#pragma once

#include <vector>

#include "mueg/fields/field.hpp"

namespace mueg {

// Finite-difference weights for the m-th derivative at z from the given nodes (Fornberg).
std::vector<double> fd_weights(double z, const std::vector<double>& nodes, int m);

// Partial derivative along one axis of raw point data. Fourth-order central stencil in the
// interior, one-sided five-point stencils near the ends (four-point when the axis has 4 nodes).
template <class T>
std::vector<T> partial(const GridSpec& g, const std::vector<T>& f, int axis);

template <class T>
Field<T, Rank::vector> gradient(const Field<T, Rank::scalar>& f);

// (Du)_{ab} = d_b u_a.
template <class T>
Field<T, Rank::tensor> jacobian(const Field<T, Rank::vector>& u);

TensorField symmetric_part(const TensorField& m);
TensorField antisymmetric_part(const TensorField& m);
VectorField curl(const VectorField& u);
ScalarField divergence(const VectorField& u);
ScalarField frobenius_norm(const TensorField& m);
ScalarField norm(const VectorField& u);

}  // namespace mueg
