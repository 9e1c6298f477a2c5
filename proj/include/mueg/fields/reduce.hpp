#pragma once

#include <complex>
#include <cstddef>
#include <vector>

namespace mueg {

// Pairwise tree summation with a fixed split, independent of worker count.
double pairwise_sum(const double* v, std::size_t n);
std::complex<double> pairwise_sum(const std::complex<double>* v, std::size_t n);

inline double pairwise_sum(const std::vector<double>& v) { return pairwise_sum(v.data(), v.size()); }
inline std::complex<double> pairwise_sum(const std::vector<std::complex<double>>& v) {
  return pairwise_sum(v.data(), v.size());
}

}  // namespace mueg
