#pragma once

#include <array>
#include <vector>

namespace mueg {

struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
  int order() const { return static_cast<int>(nodes.size()); }
};

// Gauss-Legendre on [a, b].
QuadratureRule gauss_legendre(int n, double a = -1.0, double b = 1.0);

// Gauss-Hermite for the standard normal weight; weights sum to 1.
QuadratureRule gauss_hermite(int n);

// Tensor product of gauss_hermite(n) in d dimensions for N(0, I_d).
struct TensorRule {
  int dim = 3;
  std::vector<std::array<double, 3>> nodes;
  std::vector<double> weights;
};
TensorRule gauss_hermite_tensor(int dim, int n);

}  // namespace mueg
