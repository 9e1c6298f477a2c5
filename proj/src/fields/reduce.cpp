#include "mueg/fields/reduce.hpp"

namespace mueg {

namespace {
template <class T>
T tree_sum(const T* v, std::size_t n) {
  if (n <= 8) {
    T s{};
    for (std::size_t i = 0; i < n; ++i) s += v[i];
    return s;
  }
  const std::size_t half = n / 2;
  return tree_sum(v, half) + tree_sum(v + half, n - half);
}
}  // namespace

double pairwise_sum(const double* v, std::size_t n) { return tree_sum(v, n); }
std::complex<double> pairwise_sum(const std::complex<double>* v, std::size_t n) { return tree_sum(v, n); }

}  // namespace mueg
