#include "mueg/fields/quadrature.hpp"

#include <cmath>
#include <numbers>

#include <Eigen/Eigenvalues>

#include "mueg/errors.hpp"

namespace mueg {

QuadratureRule gauss_legendre(int n, double a, double b) {
  if (n < 1) throw DomainError("Gauss-Legendre order must be positive");
  QuadratureRule r;
  r.nodes.resize(n);
  r.weights.resize(n);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      if (n == 1) p0 = 1.0;
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      if (n == 1) p0 = 1.0;
      dp = n * (x * p1 - p0) / (x * x - 1.0);
    }
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    r.nodes[i] = -x;
    r.nodes[n - 1 - i] = x;
    r.weights[i] = w;
    r.weights[n - 1 - i] = w;
  }
  if (n % 2 == 1) r.nodes[n / 2] = 0.0;
  const double half = 0.5 * (b - a), mid = 0.5 * (a + b);
  for (int i = 0; i < n; ++i) {
    r.nodes[i] = mid + half * r.nodes[i];
    r.weights[i] *= half;
  }
  return r;
}

QuadratureRule gauss_hermite(int n) {
  if (n < 1) throw DomainError("Gauss-Hermite order must be positive");
  // Golub-Welsch on the Jacobi matrix of the probabilists' Hermite polynomials.
  Eigen::VectorXd diag = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd sub(std::max(n - 1, 0));
  for (int k = 1; k < n; ++k) sub(k - 1) = std::sqrt(static_cast<double>(k));
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
  if (n == 1) {
    return QuadratureRule{{0.0}, {1.0}};
  }
  es.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);
  QuadratureRule r;
  r.nodes.resize(n);
  r.weights.resize(n);
  for (int i = 0; i < n; ++i) {
    r.nodes[i] = es.eigenvalues()(i);
    const double v = es.eigenvectors()(0, i);
    r.weights[i] = v * v;
  }
  // Enforce the exact symmetry of the rule.
  for (int i = 0; i < n / 2; ++i) {
    const double x = 0.5 * (r.nodes[n - 1 - i] - r.nodes[i]);
    const double w = 0.5 * (r.weights[n - 1 - i] + r.weights[i]);
    r.nodes[i] = -x;
    r.nodes[n - 1 - i] = x;
    r.weights[i] = r.weights[n - 1 - i] = w;
  }
  if (n % 2 == 1) r.nodes[n / 2] = 0.0;
  double s = 0.0;
  for (double w : r.weights) s += w;
  for (double& w : r.weights) w /= s;
  return r;
}

TensorRule gauss_hermite_tensor(int dim, int n) {
  if (dim < 1 || dim > 3) throw DimensionError("tensor rule dimension must be 1..3");
  const QuadratureRule r = gauss_hermite(n);
  TensorRule t;
  t.dim = dim;
  const int n1 = n, n2 = dim >= 2 ? n : 1, n3 = dim >= 3 ? n : 1;
  for (int k = 0; k < n3; ++k)
    for (int j = 0; j < n2; ++j)
      for (int i = 0; i < n1; ++i) {
        std::array<double, 3> x{r.nodes[i], dim >= 2 ? r.nodes[j] : 0.0, dim >= 3 ? r.nodes[k] : 0.0};
        double w = r.weights[i];
        if (dim >= 2) w *= r.weights[j];
        if (dim >= 3) w *= r.weights[k];
        t.nodes.push_back(x);
        t.weights.push_back(w);
      }
  return t;
}

}  // namespace mueg
